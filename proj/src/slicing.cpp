#include "tml/slicing.hpp"

namespace tml {

bool slice_equal(const Slice& a, const Slice& b) {
    return pattern_env_equal(a.env_part, b.env_part) &&
           trace_equal(a.trace_part, b.trace_part);
}

// ---------------------------------------------------------------------------
// Backward disclosure slicing
// ---------------------------------------------------------------------------

DisclosureResult disclosure_slice(const PatternPtr& p, const TracePtr& t) {
    if (!t) throw IllFormedSlice("null trace");
    if (p->kind == Pattern::Kind::Hole) return {tr_hole(), {}};
    switch (t->kind) {
        case Trace::Kind::Hole:
            throw IllFormedSlice("cannot slice a partial trace");
        case Trace::Kind::Var: {
            PatternEnv rho;
            rho.items.emplace_back(t->name, p);
            return {tr_var(t->name), std::move(rho)};
        }
        case Trace::Kind::Const:
            return {tr_const(t->lit), {}};
        case Trace::Kind::Prim: {
            std::vector<TracePtr> slices;
            PatternEnv rho;
            for (const auto& k : t->kids) {
                DisclosureResult r = disclosure_slice(p_diamond(), k);
                slices.push_back(r.trace);
                rho = join_env_or_throw(rho, r.env);
            }
            return {tr_prim(t->name, std::move(slices)), std::move(rho)};
        }
        case Trace::Kind::Let: {
            DisclosureResult body = disclosure_slice(p, t->kids[1]);
            PatternPtr p1 = body.env.get(t->name);
            PatternEnv rho2 = body.env.without(t->name);
            DisclosureResult bound = disclosure_slice(p1, t->kids[0]);
            return {tr_let(t->name, bound.trace, body.trace),
                    join_env_or_throw(bound.env, rho2)};
        }
        case Trace::Kind::Pair: {
            PatternPtr p1, p2;
            if (p->kind == Pattern::Kind::Pair) {
                p1 = p->a;
                p2 = p->b;
            } else if (p->kind == Pattern::Kind::Diamond) {
                p1 = p2 = p_diamond();
            } else {
                throw IllFormedSlice("pair trace sliced against " + pretty_pattern(p));
            }
            DisclosureResult a = disclosure_slice(p1, t->kids[0]);
            DisclosureResult b = disclosure_slice(p2, t->kids[1]);
            return {tr_pair(a.trace, b.trace), join_env_or_throw(a.env, b.env)};
        }
        case Trace::Kind::Fst: {
            DisclosureResult r = disclosure_slice(p_pair(p, p_hole()), t->kids[0]);
            return {tr_fst(r.trace), std::move(r.env)};
        }
        case Trace::Kind::Snd: {
            DisclosureResult r = disclosure_slice(p_pair(p_hole(), p), t->kids[0]);
            return {tr_snd(r.trace), std::move(r.env)};
        }
        case Trace::Kind::Inl: {
            PatternPtr inner;
            if (p->kind == Pattern::Kind::Inl) inner = p->a;
            else if (p->kind == Pattern::Kind::Diamond) inner = p_diamond();
            else throw IllFormedSlice("inl trace sliced against " + pretty_pattern(p));
            DisclosureResult r = disclosure_slice(inner, t->kids[0]);
            return {tr_inl(r.trace, t->ann), std::move(r.env)};
        }
        case Trace::Kind::Inr: {
            PatternPtr inner;
            if (p->kind == Pattern::Kind::Inr) inner = p->a;
            else if (p->kind == Pattern::Kind::Diamond) inner = p_diamond();
            else throw IllFormedSlice("inr trace sliced against " + pretty_pattern(p));
            DisclosureResult r = disclosure_slice(inner, t->kids[0]);
            return {tr_inr(r.trace, t->ann), std::move(r.env)};
        }
        case Trace::Kind::Roll: {
            PatternPtr inner;
            if (p->kind == Pattern::Kind::Roll) inner = p->a;
            else if (p->kind == Pattern::Kind::Diamond) inner = p_diamond();
            else throw IllFormedSlice("roll trace sliced against " + pretty_pattern(p));
            DisclosureResult r = disclosure_slice(inner, t->kids[0]);
            return {tr_roll(r.trace, t->ann), std::move(r.env)};
        }
        case Trace::Kind::Unroll: {
            DisclosureResult r = disclosure_slice(p_roll(p), t->kids[0]);
            return {tr_unroll(r.trace), std::move(r.env)};
        }
        case Trace::Kind::CaseL: {
            DisclosureResult body = disclosure_slice(p, t->kids[1]);
            PatternPtr bound = body.env.get(t->name);
            PatternEnv rho1 = body.env.without(t->name);
            DisclosureResult scrut = disclosure_slice(p_inl(bound), t->kids[0]);
            return {tr_case_l(t->arms, scrut.trace, t->name, body.trace),
                    join_env_or_throw(scrut.env, rho1)};
        }
        case Trace::Kind::CaseR: {
            DisclosureResult body = disclosure_slice(p, t->kids[1]);
            PatternPtr bound = body.env.get(t->name);
            PatternEnv rho2 = body.env.without(t->name);
            DisclosureResult scrut = disclosure_slice(p_inr(bound), t->kids[0]);
            return {tr_case_r(t->arms, scrut.trace, t->name, body.trace),
                    join_env_or_throw(scrut.env, rho2)};
        }
        case Trace::Kind::Fun: {
            if (p->kind != Pattern::Kind::Closure)
                throw IllFormedSlice("fun trace sliced against " + pretty_pattern(p));
            if (!code_pointer_equal(p->kappa, t->kappa))
                throw IllFormedSlice("fun trace sliced against foreign code pointer");
            return {tr_fun(t->kappa), p->env};
        }
        case Trace::Kind::App: {
            DisclosureResult body = disclosure_slice(p, t->kids[2]);
            PatternPtr p1 = body.env.get(t->name);
            PatternPtr p2 = body.env.get(t->arg_name);
            PatternEnv rho = body.env.without(t->name).without(t->arg_name);
            PatternPtr fn_pattern =
                join_or_throw(p1, p_closure(t->kappa, std::move(rho)));
            DisclosureResult fn = disclosure_slice(fn_pattern, t->kids[0]);
            DisclosureResult arg = disclosure_slice(p2, t->kids[1]);
            return {tr_app(t->kappa, fn.trace, arg.trace, t->name, t->arg_name, body.trace),
                    join_env_or_throw(fn.env, arg.env)};
        }
    }
    throw IllFormedSlice("unreachable trace kind");
}

// ---------------------------------------------------------------------------
// Witness
// ---------------------------------------------------------------------------

static PatternPtr clash_witness(const ValuePtr& v) {
    // The toplevel constructor of v with hole children refutes any pattern
    // rooted at a different constructor.
    switch (v->kind) {
        case Value::Kind::Const: return p_const(v->lit);
        case Value::Kind::Pair: return p_pair(p_hole(), p_hole());
        case Value::Kind::Inl: return p_inl(p_hole());
        case Value::Kind::Inr: return p_inr(p_hole());
        case Value::Kind::Roll: return p_roll(p_hole());
        case Value::Kind::Closure: return p_closure(v->kappa, {});
    }
    throw Error("unreachable value kind");
}

PatternPtr witness(const PatternPtr& p, const ValuePtr& v) {
    if (!diamond_free(p)) throw Error("witness requires a diamond-free pattern");
    if (pattern_leq_value(p, v)) throw Error("witness requires p not below v");
    switch (p->kind) {
        case Pattern::Kind::Const:
            if (v->kind == Value::Kind::Const) return p_const(v->lit);
            return clash_witness(v);
        case Pattern::Kind::Pair:
            if (v->kind != Value::Kind::Pair) return clash_witness(v);
            if (!pattern_leq_value(p->a, v->a))
                return p_pair(witness(p->a, v->a), p_hole());
            return p_pair(p_hole(), witness(p->b, v->b));
        case Pattern::Kind::Inl:
            if (v->kind != Value::Kind::Inl) return clash_witness(v);
            return p_inl(witness(p->a, v->a));
        case Pattern::Kind::Inr:
            if (v->kind != Value::Kind::Inr) return clash_witness(v);
            return p_inr(witness(p->a, v->a));
        case Pattern::Kind::Roll:
            if (v->kind != Value::Kind::Roll) return clash_witness(v);
            return p_roll(witness(p->a, v->a));
        case Pattern::Kind::Closure: {
            if (v->kind != Value::Kind::Closure) return clash_witness(v);
            if (!code_pointer_equal(p->kappa, v->kappa)) return clash_witness(v);
            for (const auto& [n, q] : p->env.items) {
                const ValuePtr w = v->env.find_ptr(n);
                if (!w)
                    throw Error("witness: closure environment lacks " + n);
                if (!pattern_leq_value(q, w)) {
                    PatternEnv env;
                    env.items.emplace_back(n, witness(q, w));
                    return p_closure(v->kappa, std::move(env));
                }
            }
            throw Error("witness: no mismatching part found");
        }
        default:
            throw Error("witness: unexpected pattern " + pretty_pattern(p));
    }
}

Slice disc_view(const PatternPtr& p, const Env& env, const TracePtr& t, const ValuePtr& v) {
    if (!diamond_free(p)) throw Error("disc_view requires a diamond-free pattern");
    PatternPtr query = pattern_leq_value(p, v) ? p : witness(p, v);
    DisclosureResult r = disclosure_slice(query, t);
    return {restrict_env(env, r.env), r.trace};
}

// ---------------------------------------------------------------------------
// Forward obfuscation slicing
// ---------------------------------------------------------------------------

ObfuscationResult obfuscation_slice(const PatternEnv& rho, const TracePtr& t) {
    if (!t) throw IllFormedSlice("null trace");
    switch (t->kind) {
        case Trace::Kind::Hole:
            throw IllFormedSlice("cannot forward-slice a partial trace");
        case Trace::Kind::Var: {
            PatternPtr p = rho.get(t->name);
            if (p->kind == Pattern::Kind::Hole) return {p_hole(), tr_hole()};
            return {p, tr_var(t->name)};
        }
        case Trace::Kind::Const:
            return {p_const(t->lit), tr_const(t->lit)};
        case Trace::Kind::Prim: {
            std::vector<PatternPtr> ps;
            std::vector<TracePtr> ss;
            for (const auto& k : t->kids) {
                ObfuscationResult r = obfuscation_slice(rho, k);
                if (r.value->kind == Pattern::Kind::Hole) return {p_hole(), tr_hole()};
                ps.push_back(r.value);
                ss.push_back(r.trace);
            }
            std::vector<ValuePtr> args;
            for (const auto& q : ps) {
                auto v = value_of_pattern(q);
                if (!v)
                    throw IllFormedSlice("primitive argument is not a complete value");
                args.push_back(*v);
            }
            ValuePtr out = eval_primitive(t->name, args);
            return {pattern_of_value(out), tr_prim(t->name, std::move(ss))};
        }
        case Trace::Kind::Let: {
            ObfuscationResult bound = obfuscation_slice(rho, t->kids[0]);
            ObfuscationResult body =
                obfuscation_slice(rho.set(t->name, bound.value), t->kids[1]);
            return {body.value, tr_let(t->name, bound.trace, body.trace)};
        }
        case Trace::Kind::Pair: {
            ObfuscationResult a = obfuscation_slice(rho, t->kids[0]);
            ObfuscationResult b = obfuscation_slice(rho, t->kids[1]);
            return {p_pair(a.value, b.value), tr_pair(a.trace, b.trace)};
        }
        case Trace::Kind::Fst: {
            ObfuscationResult r = obfuscation_slice(rho, t->kids[0]);
            if (r.value->kind == Pattern::Kind::Hole) return {p_hole(), tr_hole()};
            if (r.value->kind != Pattern::Kind::Pair)
                throw IllFormedSlice("fst: forward slice is not a pair");
            return {r.value->a, tr_fst(r.trace)};
        }
        case Trace::Kind::Snd: {
            ObfuscationResult r = obfuscation_slice(rho, t->kids[0]);
            if (r.value->kind == Pattern::Kind::Hole) return {p_hole(), tr_hole()};
            if (r.value->kind != Pattern::Kind::Pair)
                throw IllFormedSlice("snd: forward slice is not a pair");
            return {r.value->b, tr_snd(r.trace)};
        }
        case Trace::Kind::Inl: {
            ObfuscationResult r = obfuscation_slice(rho, t->kids[0]);
            return {p_inl(r.value), tr_inl(r.trace, t->ann)};
        }
        case Trace::Kind::Inr: {
            ObfuscationResult r = obfuscation_slice(rho, t->kids[0]);
            return {p_inr(r.value), tr_inr(r.trace, t->ann)};
        }
        case Trace::Kind::Roll: {
            ObfuscationResult r = obfuscation_slice(rho, t->kids[0]);
            return {p_roll(r.value), tr_roll(r.trace, t->ann)};
        }
        case Trace::Kind::Unroll: {
            ObfuscationResult r = obfuscation_slice(rho, t->kids[0]);
            if (r.value->kind == Pattern::Kind::Hole) return {p_hole(), tr_hole()};
            if (r.value->kind != Pattern::Kind::Roll)
                throw IllFormedSlice("unroll: forward slice is not a rolled value");
            return {r.value->a, tr_unroll(r.trace)};
        }
        case Trace::Kind::CaseL: {
            ObfuscationResult s = obfuscation_slice(rho, t->kids[0]);
            if (s.value->kind == Pattern::Kind::Hole) return {p_hole(), tr_hole()};
            if (s.value->kind != Pattern::Kind::Inl)
                throw IllFormedSlice("case: forward slice disagrees with recorded branch");
            ObfuscationResult body =
                obfuscation_slice(rho.set(t->name, s.value->a), t->kids[1]);
            return {body.value, tr_case_l(t->arms, s.trace, t->name, body.trace)};
        }
        case Trace::Kind::CaseR: {
            ObfuscationResult s = obfuscation_slice(rho, t->kids[0]);
            if (s.value->kind == Pattern::Kind::Hole) return {p_hole(), tr_hole()};
            if (s.value->kind != Pattern::Kind::Inr)
                throw IllFormedSlice("case: forward slice disagrees with recorded branch");
            ObfuscationResult body =
                obfuscation_slice(rho.set(t->name, s.value->a), t->kids[1]);
            return {body.value, tr_case_r(t->arms, s.trace, t->name, body.trace)};
        }
        case Trace::Kind::Fun:
            return {p_closure(t->kappa, rho), tr_fun(t->kappa)};
        case Trace::Kind::App: {
            ObfuscationResult fn = obfuscation_slice(rho, t->kids[0]);
            if (fn.value->kind == Pattern::Kind::Hole) return {p_hole(), tr_hole()};
            if (fn.value->kind != Pattern::Kind::Closure)
                throw IllFormedSlice("application: forward slice is not a closure");
            if (!code_pointer_equal(fn.value->kappa, t->kappa))
                throw IllFormedSlice("application: forward slice has a foreign code pointer");
            ObfuscationResult arg = obfuscation_slice(rho, t->kids[1]);
            PatternEnv inner = fn.value->env.set(t->name, fn.value)
                                   .set(t->arg_name, arg.value);
            ObfuscationResult body = obfuscation_slice(inner, t->kids[2]);
            return {body.value, tr_app(t->kappa, fn.trace, arg.trace, t->name,
                                       t->arg_name, body.trace)};
        }
    }
    throw IllFormedSlice("unreachable trace kind");
}

ObfuscationResult obf_view(const PatternEnv& rho, const Env& env, const TracePtr& t,
                           const ValuePtr& v) {
    if (!diamond_free(rho)) throw Error("obf_view requires a diamond-free environment");
    if (!pattern_env_leq(rho, env)) throw Error("obf_view requires rho below gamma");
    ObfuscationResult r = obfuscation_slice(rho, t);
    if (!pattern_leq_value(r.value, v))
        throw Error("obf_view: sliced value does not match the recorded result");
    return r;
}

}  // namespace tml
