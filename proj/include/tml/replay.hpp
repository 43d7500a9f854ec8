#ifndef TML_REPLAY_HPP
#define TML_REPLAY_HPP

#include "tml/syntax.hpp"

namespace tml {

// Replay diverged from the recorded control flow (or the trace cannot run at
// all); recoverable by design, slicing and the security checks rely on it.
struct ReplayInconsistent : Error {
    using Error::Error;
};

ValuePtr replay(const Env& env, const TracePtr& t, long fuel = 1000000);
bool is_consistent(const Env& env, const TracePtr& t, long fuel = 1000000);

}  // namespace tml

#endif
