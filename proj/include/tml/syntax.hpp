#ifndef TML_SYNTAX_HPP
#define TML_SYNTAX_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tml {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnboundVariable : Error {
    explicit UnboundVariable(const std::string& x)
        : Error("unbound variable: " + x), name(x) {}
    std::string name;
};

struct FuelExhausted : Error {
    FuelExhausted() : Error("fuel exhausted") {}
};

// ---------------------------------------------------------------------------
// Types: int, bool, unit, products, sums, arrows, isorecursive mu types.
// ---------------------------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
    enum class Kind { Int, Bool, Unit, Prod, Sum, Arrow, Mu, Var };
    Kind kind;
    TypePtr a, b;      // Prod/Sum/Arrow children; Mu body in a
    std::string name;  // Mu binder or Var name

    bool is_base() const {
        return kind == Kind::Int || kind == Kind::Bool || kind == Kind::Unit;
    }
};

TypePtr t_int();
TypePtr t_bool();
TypePtr t_unit();
TypePtr t_prod(TypePtr a, TypePtr b);
TypePtr t_sum(TypePtr a, TypePtr b);
TypePtr t_arrow(TypePtr a, TypePtr b);
TypePtr t_mu(std::string binder, TypePtr body);
TypePtr t_var(std::string name);

// mu alpha. unit + (elem * alpha)
TypePtr t_list(TypePtr elem);
// Recognizes the list shape above; returns the element type.
std::optional<TypePtr> list_elem_type(const TypePtr& t);

bool type_equal(const TypePtr& a, const TypePtr& b);  // alpha-equivalence
TypePtr type_subst(const TypePtr& t, const std::string& var, const TypePtr& repl);
TypePtr mu_unfold(const TypePtr& mu);  // body[mu/alpha]
std::string pretty_type(const TypePtr& t);

// ---------------------------------------------------------------------------
// Constants (base values)
// ---------------------------------------------------------------------------

struct Constant {
    enum class Kind { Int, Bool, Unit };
    Kind kind = Kind::Unit;
    std::int64_t i = 0;
    bool b = false;

    static Constant of_int(std::int64_t v) { return {Kind::Int, v, false}; }
    static Constant of_bool(bool v) { return {Kind::Bool, 0, v}; }
    static Constant unit() { return {Kind::Unit, 0, false}; }
};

bool operator==(const Constant& a, const Constant& b);
inline bool operator!=(const Constant& a, const Constant& b) { return !(a == b); }
std::string pretty_constant(const Constant& c);
TypePtr constant_type(const Constant& c);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct SourceSpan {
    std::size_t begin = 0, end = 0;
    int line = 0, column = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Match pointer m = {inl(x1).e1; inr(x2).e2}.  `from_if` marks arms produced
// by desugaring `if`, so traces print |>_then / |>_else.
struct MatchArms {
    std::string left_var, right_var;
    ExprPtr left_body, right_body;
    bool from_if = false;
};
using MatchPtr = std::shared_ptr<const MatchArms>;

struct Expr {
    enum class Kind {
        Var, Const, Prim, Let, Pair, Fst, Snd,
        Inl, Inr, Case, Fun, App, Roll, Unroll,
        Labeled,  // c@L marker, eliminated before evaluation
        Ascribe   // (e : t), consumed by elaboration
    };
    Kind kind;
    std::string name;      // Var name | Prim op | Let binder | Fun f | Labeled label
    std::string arg_name;  // Fun x
    Constant lit;          // Const
    std::vector<ExprPtr> kids;
    MatchPtr arms;              // Case
    TypePtr ann;                // Inl/Inr: sum type; Roll: mu type (filled by elaboration)
    TypePtr arg_type, ret_type; // Fun annotations
    SourceSpan span;
};

ExprPtr e_var(std::string x);
ExprPtr e_const(Constant c);
ExprPtr e_prim(std::string op, std::vector<ExprPtr> args);
ExprPtr e_let(std::string x, ExprPtr e1, ExprPtr e2);
ExprPtr e_pair(ExprPtr a, ExprPtr b);
ExprPtr e_fst(ExprPtr e);
ExprPtr e_snd(ExprPtr e);
ExprPtr e_inl(ExprPtr e, TypePtr ann = nullptr);
ExprPtr e_inr(ExprPtr e, TypePtr ann = nullptr);
ExprPtr e_case(ExprPtr scrut, MatchPtr arms);
ExprPtr e_fun(std::string f, std::string x, TypePtr arg_type, TypePtr ret_type, ExprPtr body);
ExprPtr e_app(ExprPtr f, ExprPtr a);
ExprPtr e_roll(ExprPtr e, TypePtr ann = nullptr);
ExprPtr e_unroll(ExprPtr e);
ExprPtr e_labeled(std::string label, ExprPtr e);
ExprPtr e_ascribe(ExprPtr e, TypePtr t);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
std::set<std::string> free_vars(const ExprPtr& e);

// ---------------------------------------------------------------------------
// Values and environments
// ---------------------------------------------------------------------------

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct TypeEnv;

// Code pointer: a fun term compared by structural identity, plus the typing
// of its closure environment (used only by the trace type checker).
struct CodePointer {
    ExprPtr fun;  // Expr::Kind::Fun
    std::shared_ptr<const TypeEnv> env_types;
};

bool code_pointer_equal(const CodePointer& a, const CodePointer& b);

// Ordered finite map; extension replaces in place, lookup of an unbound
// variable throws.
class Env {
  public:
    Env() = default;
    ValuePtr lookup(const std::string& x) const;       // throws UnboundVariable
    const Value* find(const std::string& x) const;     // nullptr if absent
    Env extend(const std::string& x, ValuePtr v) const;
    ValuePtr find_ptr(const std::string& x) const;     // nullptr if absent
    const std::vector<std::pair<std::string, ValuePtr>>& items() const;
    bool empty() const { return !data_ || data_->empty(); }

  private:
    std::shared_ptr<const std::vector<std::pair<std::string, ValuePtr>>> data_;
};

bool env_equal(const Env& a, const Env& b);  // as finite maps

struct Value {
    enum class Kind { Const, Pair, Inl, Inr, Roll, Closure };
    Kind kind;
    Constant lit;   // Const
    ValuePtr a, b;  // Pair children; Inl/Inr/Roll child in a
    TypePtr ann;    // Inl/Inr: sum type; Roll: mu type (may be null for raw values)
    CodePointer kappa;  // Closure
    Env env;            // Closure
};

ValuePtr v_const(Constant c);
ValuePtr v_int(std::int64_t i);
ValuePtr v_bool(bool b);
ValuePtr v_unit();
ValuePtr v_pair(ValuePtr a, ValuePtr b);
ValuePtr v_inl(ValuePtr v, TypePtr ann = nullptr);
ValuePtr v_inr(ValuePtr v, TypePtr ann = nullptr);
ValuePtr v_roll(ValuePtr v, TypePtr ann = nullptr);
ValuePtr v_closure(CodePointer kappa, Env env);

// Structural equality; type annotations are not compared.
bool value_equal(const ValuePtr& a, const ValuePtr& b);
std::string pretty_value(const ValuePtr& v);

// Spec operation name; same as Env::lookup.
ValuePtr env_lookup(const Env& env, const std::string& x);

// ---------------------------------------------------------------------------
// Traces.  The grammar includes the hole; complete traces (evaluation
// output, replay input) contain none.
// ---------------------------------------------------------------------------

struct Trace;
using TracePtr = std::shared_ptr<const Trace>;
using PartialTrace = TracePtr;

struct Trace {
    enum class Kind {
        Hole, Var, Const, Prim, Let, Pair, Fst, Snd,
        Inl, Inr, CaseL, CaseR, Fun, App, Roll, Unroll
    };
    Kind kind;
    std::string name;      // Var | Prim op | Let binder | CaseL/CaseR branch var | App f
    std::string arg_name;  // App x
    Constant lit;          // Const
    std::vector<TracePtr> kids;
    MatchPtr arms;      // CaseL/CaseR match pointer
    CodePointer kappa;  // Fun/App
    TypePtr ann;        // Inl/Inr/Roll type annotation
};

TracePtr tr_hole();
TracePtr tr_var(std::string x);
TracePtr tr_const(Constant c);
TracePtr tr_prim(std::string op, std::vector<TracePtr> kids);
TracePtr tr_let(std::string x, TracePtr t1, TracePtr t2);
TracePtr tr_pair(TracePtr a, TracePtr b);
TracePtr tr_fst(TracePtr t);
TracePtr tr_snd(TracePtr t);
TracePtr tr_inl(TracePtr t, TypePtr ann = nullptr);
TracePtr tr_inr(TracePtr t, TypePtr ann = nullptr);
TracePtr tr_case_l(MatchPtr arms, TracePtr scrut, std::string x1, TracePtr body);
TracePtr tr_case_r(MatchPtr arms, TracePtr scrut, std::string x2, TracePtr body);
TracePtr tr_fun(CodePointer kappa);
TracePtr tr_app(CodePointer kappa, TracePtr t1, TracePtr t2,
                std::string f, std::string x, TracePtr body);
TracePtr tr_roll(TracePtr t, TypePtr ann = nullptr);
TracePtr tr_unroll(TracePtr t);

bool trace_equal(const TracePtr& a, const TracePtr& b);
bool trace_complete(const TracePtr& t);
// S `leq` T: T is obtained from S by filling holes.
bool trace_leq(const TracePtr& s, const TracePtr& t);
std::set<std::string> trace_free_vars(const TracePtr& t);
// Number of nodes of the given kind.
int trace_count(const TracePtr& t, Trace::Kind kind);

}  // namespace tml

#endif
