#ifndef TML_TESTS_GEN_HPP
#define TML_TESTS_GEN_HPP

#include <random>

#include "tml/eval.hpp"
#include "tml/parser.hpp"
#include "tml/patterns.hpp"
#include "tml/security.hpp"
#include "tml/typecheck.hpp"

namespace tmlgen {

using namespace tml;

using Rng = std::mt19937_64;

inline std::int64_t pick_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// Base-type leaves stay in {0..3}; recursive types are int lists.
inline TypePtr gen_type(Rng& rng, int depth) {
    int roll = static_cast<int>(pick_int(rng, 0, depth <= 0 ? 1 : 6));
    switch (roll) {
        case 0: return t_int();
        case 1: return t_bool();
        case 2: return t_prod(gen_type(rng, depth - 1), gen_type(rng, depth - 1));
        case 3: return t_sum(gen_type(rng, depth - 1), gen_type(rng, depth - 1));
        case 4: return t_list(t_int());
        case 5: return t_unit();
        default:
            return t_arrow(gen_type(rng, depth - 1), gen_type(rng, depth - 1));
    }
}

struct GenCtx;
inline ValuePtr gen_value(Rng& rng, const TypePtr& type, int depth);

// ---------------------------------------------------------------------------
// Typed expression generation (produces elaborated terms).
// ---------------------------------------------------------------------------

struct GenCtx {
    Rng& rng;
    TypeEnv env;
    int fresh = 0;

    std::string fresh_name(const std::string& base) {
        return base + std::to_string(fresh++);
    }
};

inline ExprPtr gen_expr(GenCtx& cx, const TypePtr& want, int depth);

inline ValuePtr gen_value(Rng& rng, const TypePtr& type, int depth) {
    switch (type->kind) {
        case Type::Kind::Int: return v_int(pick_int(rng, 0, 3));
        case Type::Kind::Bool: return v_bool(chance(rng, 0.5));
        case Type::Kind::Unit: return v_unit();
        case Type::Kind::Prod:
            return v_pair(gen_value(rng, type->a, depth - 1),
                          gen_value(rng, type->b, depth - 1));
        case Type::Kind::Sum:
            return chance(rng, 0.5) ? v_inl(gen_value(rng, type->a, depth - 1), type)
                                    : v_inr(gen_value(rng, type->b, depth - 1), type);
        case Type::Kind::Mu: {
            TypePtr unfolded = mu_unfold(type);
            if (depth <= 0) {
                // the prelude list shape can always terminate with nil
                if (auto elem = list_elem_type(type))
                    return v_roll(v_inl(v_unit(), unfolded), type);
                throw Error("cannot ground recursive type " + pretty_type(type));
            }
            return v_roll(gen_value(rng, unfolded, depth - 1), type);
        }
        case Type::Kind::Arrow: {
            ExprPtr body;
            if (type_equal(type->a, type->b) && chance(rng, 0.5)) {
                body = e_var("x");
            } else {
                GenCtx cx{rng, {}, 0};
                cx.env = cx.env.extend("f", type).extend("x", type->a);
                body = gen_expr(cx, type->b, 0);
            }
            ExprPtr fn = e_fun("f", "x", type->a, type->b, body);
            CodePointer kappa{fn, std::make_shared<TypeEnv>()};
            return v_closure(kappa, Env{});
        }
        case Type::Kind::Var:
            throw Error("free type variable in generator");
    }
    throw Error("unreachable");
}


inline std::vector<std::string> vars_of_type(const GenCtx& cx, const TypePtr& want) {
    std::vector<std::string> out;
    for (const auto& [n, t] : cx.env.items)
        if (type_equal(t, want)) out.push_back(n);
    return out;
}

inline ExprPtr gen_base_leaf(GenCtx& cx, const TypePtr& want) {
    auto vars = vars_of_type(cx, want);
    if (!vars.empty() && chance(cx.rng, 0.6))
        return e_var(vars[pick_int(cx.rng, 0, vars.size() - 1)]);
    switch (want->kind) {
        case Type::Kind::Int: return e_const(Constant::of_int(pick_int(cx.rng, 0, 3)));
        case Type::Kind::Bool: return e_const(Constant::of_bool(chance(cx.rng, 0.5)));
        case Type::Kind::Unit: return e_const(Constant::unit());
        default: break;
    }
    // structural leaf
    switch (want->kind) {
        case Type::Kind::Prod:
            return e_pair(gen_expr(cx, want->a, 0), gen_expr(cx, want->b, 0));
        case Type::Kind::Sum:
            return chance(cx.rng, 0.5) ? e_inl(gen_expr(cx, want->a, 0), want)
                                       : e_inr(gen_expr(cx, want->b, 0), want);
        case Type::Kind::Mu:
            if (auto elem = list_elem_type(want))
                return e_roll(e_inl(e_const(Constant::unit()), mu_unfold(want)->kind ==
                                        Type::Kind::Sum ? mu_unfold(want) : nullptr),
                              want);
            return e_roll(gen_expr(cx, mu_unfold(want), 0), want);
        case Type::Kind::Arrow: {
            GenCtx inner{cx.rng, cx.env, cx.fresh};
            std::string f = cx.fresh_name("f");
            std::string x = cx.fresh_name("x");
            inner.env = inner.env.extend(f, want).extend(x, want->a);
            inner.fresh = cx.fresh;
            ExprPtr body = gen_expr(inner, want->b, 0);
            cx.fresh = inner.fresh;
            return e_fun(f, x, want->a, want->b, body);
        }
        default:
            throw Error("unreachable leaf type");
    }
}

inline ExprPtr gen_expr(GenCtx& cx, const TypePtr& want, int depth) {
    if (depth <= 0) return gen_base_leaf(cx, want);
    switch (pick_int(cx.rng, 0, 9)) {
        case 0: {  // let
            TypePtr bound_ty = gen_type(cx.rng, 1);
            std::string x = cx.fresh_name("v");
            ExprPtr bound = gen_expr(cx, bound_ty, depth - 1);
            GenCtx inner{cx.rng, cx.env.extend(x, bound_ty), cx.fresh};
            ExprPtr body = gen_expr(inner, want, depth - 1);
            cx.fresh = inner.fresh;
            return e_let(x, bound, body);
        }
        case 1: {  // if
            ExprPtr cond = gen_expr(cx, t_bool(), depth - 1);
            ExprPtr a = gen_expr(cx, want, depth - 1);
            ExprPtr b = gen_expr(cx, want, depth - 1);
            std::string w = cx.fresh_name("w");
            auto arms = std::make_shared<MatchArms>(MatchArms{w, w, a, b, true});
            return e_case(e_prim("b2s", {cond}), arms);
        }
        case 2: {  // case over a fresh sum
            TypePtr lt = gen_type(cx.rng, 1), rt = gen_type(cx.rng, 1);
            TypePtr sum = t_sum(lt, rt);
            ExprPtr scrut = gen_expr(cx, sum, depth - 1);
            std::string x1 = cx.fresh_name("a"), x2 = cx.fresh_name("b");
            GenCtx cl{cx.rng, cx.env.extend(x1, lt), cx.fresh};
            ExprPtr lb = gen_expr(cl, want, depth - 1);
            GenCtx cr{cx.rng, cx.env.extend(x2, rt), cl.fresh};
            ExprPtr rb = gen_expr(cr, want, depth - 1);
            cx.fresh = cr.fresh;
            auto arms = std::make_shared<MatchArms>(MatchArms{x1, x2, lb, rb, false});
            return e_case(scrut, arms);
        }
        case 3: {  // projection
            TypePtr other = gen_type(cx.rng, 1);
            if (chance(cx.rng, 0.5))
                return e_fst(gen_expr(cx, t_prod(want, other), depth - 1));
            return e_snd(gen_expr(cx, t_prod(other, want), depth - 1));
        }
        case 4: {  // application
            TypePtr argty = gen_type(cx.rng, 1);
            ExprPtr fn = gen_expr(cx, t_arrow(argty, want), depth - 1);
            ExprPtr arg = gen_expr(cx, argty, depth - 1);
            return e_app(fn, arg);
        }
        case 5: {  // primitive
            if (type_equal(want, t_int())) {
                const char* ops[] = {"+", "-", "*"};
                return e_prim(ops[pick_int(cx.rng, 0, 2)],
                              {gen_expr(cx, t_int(), depth - 1),
                               gen_expr(cx, t_int(), depth - 1)});
            }
            if (type_equal(want, t_bool())) {
                switch (pick_int(cx.rng, 0, 3)) {
                    case 0:
                        return e_prim("=", {gen_expr(cx, t_int(), depth - 1),
                                            gen_expr(cx, t_int(), depth - 1)});
                    case 1:
                        return e_prim("<", {gen_expr(cx, t_int(), depth - 1),
                                            gen_expr(cx, t_int(), depth - 1)});
                    case 2:
                        return e_prim("&&", {gen_expr(cx, t_bool(), depth - 1),
                                             gen_expr(cx, t_bool(), depth - 1)});
                    default:
                        return e_prim("not", {gen_expr(cx, t_bool(), depth - 1)});
                }
            }
            return gen_base_leaf(cx, want);
        }
        case 6: {  // structural constructor for the wanted type
            switch (want->kind) {
                case Type::Kind::Prod:
                    return e_pair(gen_expr(cx, want->a, depth - 1),
                                  gen_expr(cx, want->b, depth - 1));
                case Type::Kind::Sum:
                    return chance(cx.rng, 0.5)
                               ? e_inl(gen_expr(cx, want->a, depth - 1), want)
                               : e_inr(gen_expr(cx, want->b, depth - 1), want);
                case Type::Kind::Mu:
                    return e_roll(gen_expr(cx, mu_unfold(want), depth - 1), want);
                default:
                    return gen_base_leaf(cx, want);
            }
        }
        case 7: {  // unroll of a list
            if (type_equal(want, mu_unfold(t_list(t_int()))))
                return e_unroll(gen_expr(cx, t_list(t_int()), depth - 1));
            return gen_base_leaf(cx, want);
        }
        default:
            return gen_base_leaf(cx, want);
    }
}

// ---------------------------------------------------------------------------
// Corpus of well-typed programs with environments.
// ---------------------------------------------------------------------------

struct Program {
    TypeEnv tenv;
    Env env;
    ExprPtr expr;   // elaborated
    TypePtr type;
};

inline Program gen_program(Rng& rng, int depth = 6) {
    GenCtx cx{rng, {}, 0};
    int nvars = static_cast<int>(pick_int(rng, 1, 3));
    Env env;
    for (int i = 0; i < nvars; i++) {
        TypePtr ty = gen_type(rng, 2);
        std::string name = "g" + std::to_string(i);
        cx.env = cx.env.extend(name, ty);
        env = env.extend(name, gen_value(rng, ty, 3));
    }
    TypePtr want = gen_type(rng, 2);
    ExprPtr e = gen_expr(cx, want, depth);
    return {cx.env, env, e, want};
}

// Draws programs until `count` of them evaluate within the fuel bound.
inline std::vector<Program> corpus(std::uint64_t seed, int count, int depth = 6,
                                   long fuel = 200000) {
    Rng rng(seed);
    std::vector<Program> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > count * 40)
            throw Error("generator failed to produce enough terminating programs");
        Program p = gen_program(rng, depth);
        try {
            (void)eval(p.env, p.expr, fuel);
        } catch (const FuelExhausted&) {
            continue;
        }
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Perturbation of base-type leaves (for fidelity and dependency tests).
// ---------------------------------------------------------------------------

inline ValuePtr perturb_leaves(Rng& rng, const ValuePtr& v, double rate) {
    switch (v->kind) {
        case Value::Kind::Const:
            if (v->lit.kind == Constant::Kind::Int && chance(rng, rate))
                return v_int(pick_int(rng, 0, 3));
            if (v->lit.kind == Constant::Kind::Bool && chance(rng, rate))
                return v_bool(chance(rng, 0.5));
            return v;
        case Value::Kind::Pair:
            return v_pair(perturb_leaves(rng, v->a, rate),
                          perturb_leaves(rng, v->b, rate));
        case Value::Kind::Inl: return v_inl(perturb_leaves(rng, v->a, rate), v->ann);
        case Value::Kind::Inr: return v_inr(perturb_leaves(rng, v->a, rate), v->ann);
        case Value::Kind::Roll: return v_roll(perturb_leaves(rng, v->a, rate), v->ann);
        case Value::Kind::Closure:
            return v;  // closure environments stay fixed
    }
    return v;
}

inline Env perturb_env(Rng& rng, const Env& env, double rate) {
    Env out;
    for (const auto& [n, v] : env.items()) out = out.extend(n, perturb_leaves(rng, v, rate));
    return out;
}

// Random completion of a pattern into a value: holes become random values of
// the corresponding part's type (taken from a same-shaped reference value).
inline ValuePtr complete_pattern(Rng& rng, const PatternPtr& p, const ValuePtr& ref) {
    switch (p->kind) {
        case Pattern::Kind::Hole:
            return gen_value(rng, value_type(ref), 3);
        case Pattern::Kind::Diamond:
            return ref;
        case Pattern::Kind::Const:
            return v_const(p->lit);
        case Pattern::Kind::Pair:
            return v_pair(complete_pattern(rng, p->a, ref->a),
                          complete_pattern(rng, p->b, ref->b));
        case Pattern::Kind::Inl:
            return v_inl(complete_pattern(rng, p->a, ref->a), ref->ann);
        case Pattern::Kind::Inr:
            return v_inr(complete_pattern(rng, p->a, ref->a), ref->ann);
        case Pattern::Kind::Roll:
            return v_roll(complete_pattern(rng, p->a, ref->a), ref->ann);
        case Pattern::Kind::Closure: {
            Env env;
            for (const auto& [n, w] : ref->env.items()) {
                PatternPtr q = p->env.get(n);
                env = env.extend(n, complete_pattern(rng, q, w));
            }
            return v_closure(ref->kappa, env);
        }
    }
    throw Error("unreachable");
}

inline Env complete_pattern_env(Rng& rng, const PatternEnv& rho, const Env& ref) {
    Env out;
    for (const auto& [n, v] : ref.items())
        out = out.extend(n, complete_pattern(rng, rho.get(n), v));
    return out;
}

// Random sub-pattern of a value (diamond-free).
inline PatternPtr random_pattern_below(Rng& rng, const ValuePtr& v, double hole_rate) {
    if (chance(rng, hole_rate)) return p_hole();
    switch (v->kind) {
        case Value::Kind::Const: return p_const(v->lit);
        case Value::Kind::Pair:
            return p_pair(random_pattern_below(rng, v->a, hole_rate),
                          random_pattern_below(rng, v->b, hole_rate));
        case Value::Kind::Inl: return p_inl(random_pattern_below(rng, v->a, hole_rate));
        case Value::Kind::Inr: return p_inr(random_pattern_below(rng, v->a, hole_rate));
        case Value::Kind::Roll: return p_roll(random_pattern_below(rng, v->a, hole_rate));
        case Value::Kind::Closure: {
            PatternEnv env;
            for (const auto& [n, w] : v->env.items())
                if (chance(rng, 0.5))
                    env.items.emplace_back(n, random_pattern_below(rng, w, hole_rate));
            return p_closure(v->kappa, std::move(env));
        }
    }
    throw Error("unreachable");
}

inline PatternEnv random_pattern_env_below(Rng& rng, const Env& env, double hole_rate) {
    PatternEnv out;
    for (const auto& [n, v] : env.items()) {
        if (chance(rng, 0.3)) continue;  // absent means hole
        out.items.emplace_back(n, random_pattern_below(rng, v, hole_rate));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive pattern enumeration by type (for the lattice laws).
// ---------------------------------------------------------------------------

inline std::vector<PatternPtr> enumerate_patterns(const TypePtr& type,
                                                  const std::vector<std::int64_t>& dom,
                                                  int depth, bool with_diamond) {
    std::vector<PatternPtr> out{p_hole()};
    if (with_diamond) out.push_back(p_diamond());
    switch (type->kind) {
        case Type::Kind::Int:
            for (auto i : dom) out.push_back(p_int(i));
            break;
        case Type::Kind::Bool:
            out.push_back(p_const(Constant::of_bool(false)));
            out.push_back(p_const(Constant::of_bool(true)));
            break;
        case Type::Kind::Unit:
            out.push_back(p_const(Constant::unit()));
            break;
        case Type::Kind::Prod:
            for (const auto& a : enumerate_patterns(type->a, dom, depth, with_diamond))
                for (const auto& b : enumerate_patterns(type->b, dom, depth, with_diamond))
                    out.push_back(p_pair(a, b));
            break;
        case Type::Kind::Sum:
            for (const auto& a : enumerate_patterns(type->a, dom, depth, with_diamond))
                out.push_back(p_inl(a));
            for (const auto& b : enumerate_patterns(type->b, dom, depth, with_diamond))
                out.push_back(p_inr(b));
            break;
        case Type::Kind::Mu:
            if (depth > 0)
                for (const auto& a :
                     enumerate_patterns(mu_unfold(type), dom, depth - 1, with_diamond))
                    out.push_back(p_roll(a));
            break;
        default:
            break;
    }
    return out;
}

}  // namespace tmlgen

#endif
