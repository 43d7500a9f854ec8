#ifndef TML_SESSION_HPP
#define TML_SESSION_HPP

#include <iosfwd>
#include <map>

#include "tml/extract.hpp"
#include "tml/serialize.hpp"
#include "tml/slicing.hpp"

namespace tml {

// ---------------------------------------------------------------------------
// Toplevel commands (concrete syntax parsed by the parser module).
// ---------------------------------------------------------------------------

struct Command {
    enum class Kind {
        Empty, Expr, Val, ValTrace, Trace,
        Where, Dependency, Expression,
        Slice, Obfuscate, Replay,
        TypeOf, Save, Load, Fuel
    };
    Kind kind = Kind::Empty;
    std::string name;     // binder or operand entry
    std::string file;     // :save/:load target
    ExprPtr expr;
    PatternPtr pattern;   // slice
    // obfuscate items: variable, pattern (null means `keep`)
    std::vector<std::pair<std::string, PatternPtr>> env_items;
    std::vector<std::pair<std::string, ExprPtr>> overrides;  // replay
    long fuel = 0;
};

Command parse_command(const std::string& line);

// ---------------------------------------------------------------------------
// Rendering of annotated values, matching the toplevel output notation.
// ---------------------------------------------------------------------------

std::string render_where(const AnnPtr<WhereAnn>& v);
std::string render_dep(const AnnPtr<DepAnn>& v);
std::string render_expr_ann(const AnnPtr<TermPtr>& v);

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

struct SessionOptions {
    long fuel = kDefaultFuel;
    bool canonical = false;  // print slices in the serialized format
};

class Session {
  public:
    explicit Session(SessionOptions opts = {});

    // Executes one toplevel line; output has no trailing newline.  Errors
    // are reported in the output, never thrown.
    std::string run_line(const std::string& line);

    const TraceDocument* trace_entry(const std::string& name) const;
    long fuel() const { return fuel_; }

  private:
    std::string dispatch(const Command& cmd);

    struct Evaluated {
        ExprPtr core;  // labels hoisted
        TypePtr type;
        ValuePtr value;
        TracePtr trace;
    };
    Evaluated evaluate(const ExprPtr& parsed);

    const TraceDocument& entry_or_throw(const std::string& name) const;
    std::string bind_trace(const std::string& name, const Evaluated& r);
    TypeEnv trace_label_types(const AnnotatedEnv<PathAnn>& env, const TracePtr& t) const;
    PatternEnv resolve_pattern_env(const TraceDocument& doc,
                                   const std::vector<std::pair<std::string, PatternPtr>>& items);

    bool canonical_ = false;
    TypeEnv tenv_;
    AnnotatedEnv<PathAnn> env_;
    std::vector<std::string> labels_;  // registration order
    std::map<std::string, TraceDocument> traces_;
    long fuel_;
};

// Runs a script (one command per line, '#' comments); echoes commands and
// outputs to `out`.  Returns the process exit code.
int batch_run(std::istream& script, std::ostream& out, SessionOptions opts,
              bool keep_going);

}  // namespace tml

#endif
