#ifndef TML_EVAL_HPP
#define TML_EVAL_HPP

#include "tml/syntax.hpp"

namespace tml {

struct EvalError : Error {
    using Error::Error;
};

inline constexpr long kDefaultFuel = 1000000;

struct EvalResult {
    ValuePtr value;
    TracePtr trace;
};

// Big-step tracing evaluation.  `e` must be elaborated (see check_expr);
// the fuel bound counts rule applications and throws FuelExhausted.
EvalResult eval(const Env& env, const ExprPtr& e, long fuel = kDefaultFuel);

ValuePtr eval_primitive(const std::string& op, const std::vector<ValuePtr>& args);

}  // namespace tml

#endif
