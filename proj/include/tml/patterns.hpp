#ifndef TML_PATTERNS_HPP
#define TML_PATTERNS_HPP

#include <optional>

#include "tml/syntax.hpp"

namespace tml {

struct IncompatiblePatterns : Error {
    using Error::Error;
};

// Partial values: value shapes extended with the hole (anything) and the
// exact-match diamond.
struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct PatternEnv {
    // Missing variables are treated as holes.
    std::vector<std::pair<std::string, PatternPtr>> items;

    PatternPtr find(const std::string& x) const;  // nullptr if absent
    PatternPtr get(const std::string& x) const;   // hole if absent
    PatternEnv set(const std::string& x, PatternPtr p) const;
    PatternEnv without(const std::string& x) const;
};

struct Pattern {
    enum class Kind { Hole, Diamond, Const, Pair, Inl, Inr, Roll, Closure };
    Kind kind;
    Constant lit;
    PatternPtr a, b;
    CodePointer kappa;
    PatternEnv env;
};

PatternPtr p_hole();
PatternPtr p_diamond();
PatternPtr p_const(Constant c);
PatternPtr p_int(std::int64_t i);
PatternPtr p_pair(PatternPtr a, PatternPtr b);
PatternPtr p_inl(PatternPtr p);
PatternPtr p_inr(PatternPtr p);
PatternPtr p_roll(PatternPtr p);
PatternPtr p_closure(CodePointer kappa, PatternEnv env);

bool pattern_equal(const PatternPtr& a, const PatternPtr& b);
bool pattern_env_equal(const PatternEnv& a, const PatternEnv& b);
bool diamond_free(const PatternPtr& p);
bool diamond_free(const PatternEnv& env);

PatternPtr pattern_of_value(const ValuePtr& v);
// Succeeds only on hole- and diamond-free patterns.
std::optional<ValuePtr> value_of_pattern(const PatternPtr& p);

// p [diamond/hole]
PatternPtr diamond_subst(const PatternPtr& p);

// Least upper bound; nullopt when incompatible.
std::optional<PatternPtr> join(const PatternPtr& p, const PatternPtr& q);
PatternPtr join_or_throw(const PatternPtr& p, const PatternPtr& q);
std::optional<PatternEnv> join(const PatternEnv& a, const PatternEnv& b);
PatternEnv join_env_or_throw(const PatternEnv& a, const PatternEnv& b);

// p `leq` q iff q = p `join` q
bool pattern_leq(const PatternPtr& p, const PatternPtr& q);
bool pattern_leq_value(const PatternPtr& p, const ValuePtr& v);
bool pattern_env_leq(const PatternEnv& rho, const Env& env);

// v1 == v2 modulo p
bool matches_mod(const PatternPtr& p, const ValuePtr& v1, const ValuePtr& v2);
bool matches_mod(const PatternEnv& rho, const Env& g1, const Env& g2);

// v|_p : replaces diamonds with the corresponding parts of v (requires
// p `leq` v); the result is diamond-free.
PatternPtr restrict_value(const ValuePtr& v, const PatternPtr& p);
PatternEnv restrict_env(const Env& env, const PatternEnv& rho);

std::string pretty_pattern(const PatternPtr& p);
std::string pretty_pattern_env(const PatternEnv& rho);

}  // namespace tml

#endif
