#ifndef TML_TYPECHECK_HPP
#define TML_TYPECHECK_HPP

#include <string>
#include <utility>
#include <vector>

#include "tml/syntax.hpp"

namespace tml {

struct TypeError : Error {
    using Error::Error;
};

struct TypeEnv {
    std::vector<std::pair<std::string, TypePtr>> items;

    TypePtr find(const std::string& x) const;  // nullptr if absent
    TypePtr lookup(const std::string& x) const;  // throws TypeError
    TypeEnv extend(const std::string& x, TypePtr t) const;
};

bool type_env_equal(const TypeEnv& a, const TypeEnv& b);

// Primitive operator signatures ({+,-,*,=,<,&&,||,not} plus the internal
// bool-to-sum conversion used by `if`).
bool is_primitive(const std::string& op);
std::vector<TypePtr> primitive_arg_types(const std::string& op);
TypePtr primitive_result_type(const std::string& op);

struct Elaborated {
    ExprPtr expr;  // annotations on fun/inl/inr/roll filled in
    TypePtr type;
};

// Bidirectional checking; annotations are required wherever synthesis is not
// syntax-directed (fun binders always; inl/inr/roll in synthesis position,
// except list-literal spines whose element type synthesizes).
Elaborated check_expr(const TypeEnv& env, const ExprPtr& e);
ExprPtr check_expr_against(const TypeEnv& env, const ExprPtr& e, const TypePtr& expected);

// Shallow type of an elaborated value (constant/annotation driven).
TypePtr value_type(const ValuePtr& v);
// Full value typing: recursive, closures check their bodies.
TypePtr check_value(const ValuePtr& v);
// Typing of every binding in an environment.
TypeEnv env_types(const Env& env);

TypePtr check_trace(const TypeEnv& env, const TracePtr& t);

}  // namespace tml

#endif
