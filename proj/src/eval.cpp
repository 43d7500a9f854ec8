#include "tml/eval.hpp"

#include "tml/typecheck.hpp"

namespace tml {

ValuePtr eval_primitive(const std::string& op, const std::vector<ValuePtr>& args) {
    auto want_int = [&](std::size_t i) -> std::int64_t {
        if (args[i]->kind != Value::Kind::Const ||
            args[i]->lit.kind != Constant::Kind::Int)
            throw EvalError("primitive " + op + " applied to non-integer");
        return args[i]->lit.i;
    };
    auto want_bool = [&](std::size_t i) -> bool {
        if (args[i]->kind != Value::Kind::Const ||
            args[i]->lit.kind != Constant::Kind::Bool)
            throw EvalError("primitive " + op + " applied to non-boolean");
        return args[i]->lit.b;
    };
    auto arity = [&](std::size_t n) {
        if (args.size() != n)
            throw EvalError("primitive " + op + " expects " + std::to_string(n) +
                            " arguments, got " + std::to_string(args.size()));
    };
    if (op == "+") { arity(2); return v_int(want_int(0) + want_int(1)); }
    if (op == "-") { arity(2); return v_int(want_int(0) - want_int(1)); }
    if (op == "*") { arity(2); return v_int(want_int(0) * want_int(1)); }
    if (op == "=") { arity(2); return v_bool(want_int(0) == want_int(1)); }
    if (op == "<") { arity(2); return v_bool(want_int(0) < want_int(1)); }
    if (op == "&&") { arity(2); return v_bool(want_bool(0) && want_bool(1)); }
    if (op == "||") { arity(2); return v_bool(want_bool(0) || want_bool(1)); }
    if (op == "not") { arity(1); return v_bool(!want_bool(0)); }
    if (op == "b2s") {
        arity(1);
        TypePtr two = t_sum(t_unit(), t_unit());
        return want_bool(0) ? v_inl(v_unit(), two) : v_inr(v_unit(), two);
    }
    throw EvalError("unknown primitive: " + op);
}

namespace {

struct Evaluator {
    long fuel;

    void burn() {
        if (--fuel < 0) throw FuelExhausted();
    }

    EvalResult run(const Env& env, const ExprPtr& e) {
        burn();
        switch (e->kind) {
            case Expr::Kind::Var:
                return {env.lookup(e->name), tr_var(e->name)};
            case Expr::Kind::Const:
                return {v_const(e->lit), tr_const(e->lit)};
            case Expr::Kind::Prim: {
                std::vector<ValuePtr> vals;
                std::vector<TracePtr> traces;
                for (const auto& k : e->kids) {
                    EvalResult r = run(env, k);
                    vals.push_back(std::move(r.value));
                    traces.push_back(std::move(r.trace));
                }
                return {eval_primitive(e->name, vals), tr_prim(e->name, std::move(traces))};
            }
            case Expr::Kind::Let: {
                EvalResult r1 = run(env, e->kids[0]);
                EvalResult r2 = run(env.extend(e->name, r1.value), e->kids[1]);
                return {r2.value, tr_let(e->name, r1.trace, r2.trace)};
            }
            case Expr::Kind::Pair: {
                EvalResult a = run(env, e->kids[0]);
                EvalResult b = run(env, e->kids[1]);
                return {v_pair(a.value, b.value), tr_pair(a.trace, b.trace)};
            }
            case Expr::Kind::Fst: {
                EvalResult r = run(env, e->kids[0]);
                if (r.value->kind != Value::Kind::Pair)
                    throw EvalError("fst of non-pair value");
                return {r.value->a, tr_fst(r.trace)};
            }
            case Expr::Kind::Snd: {
                EvalResult r = run(env, e->kids[0]);
                if (r.value->kind != Value::Kind::Pair)
                    throw EvalError("snd of non-pair value");
                return {r.value->b, tr_snd(r.trace)};
            }
            case Expr::Kind::Inl: {
                EvalResult r = run(env, e->kids[0]);
                return {v_inl(r.value, e->ann), tr_inl(r.trace, e->ann)};
            }
            case Expr::Kind::Inr: {
                EvalResult r = run(env, e->kids[0]);
                return {v_inr(r.value, e->ann), tr_inr(r.trace, e->ann)};
            }
            case Expr::Kind::Case: {
                EvalResult s = run(env, e->kids[0]);
                if (s.value->kind == Value::Kind::Inl) {
                    EvalResult b = run(env.extend(e->arms->left_var, s.value->a),
                                       e->arms->left_body);
                    return {b.value, tr_case_l(e->arms, s.trace, e->arms->left_var, b.trace)};
                }
                if (s.value->kind == Value::Kind::Inr) {
                    EvalResult b = run(env.extend(e->arms->right_var, s.value->a),
                                       e->arms->right_body);
                    return {b.value, tr_case_r(e->arms, s.trace, e->arms->right_var, b.trace)};
                }
                throw EvalError("case of non-sum value");
            }
            case Expr::Kind::Fun: {
                CodePointer kappa{e, std::make_shared<TypeEnv>(env_types(env))};
                return {v_closure(kappa, env), tr_fun(kappa)};
            }
            case Expr::Kind::App: {
                EvalResult f = run(env, e->kids[0]);
                if (f.value->kind != Value::Kind::Closure)
                    throw EvalError("application of non-function value");
                EvalResult a = run(env, e->kids[1]);
                const CodePointer& kappa = f.value->kappa;
                Env inner = f.value->env.extend(kappa.fun->name, f.value)
                                .extend(kappa.fun->arg_name, a.value);
                EvalResult b = run(inner, kappa.fun->kids[0]);
                return {b.value, tr_app(kappa, f.trace, a.trace, kappa.fun->name,
                                        kappa.fun->arg_name, b.trace)};
            }
            case Expr::Kind::Roll: {
                EvalResult r = run(env, e->kids[0]);
                return {v_roll(r.value, e->ann), tr_roll(r.trace, e->ann)};
            }
            case Expr::Kind::Unroll: {
                EvalResult r = run(env, e->kids[0]);
                if (r.value->kind != Value::Kind::Roll)
                    throw EvalError("unroll of non-rolled value");
                return {r.value->a, tr_unroll(r.trace)};
            }
            case Expr::Kind::Labeled:
                throw EvalError("label marker reached the evaluator; hoist labels first");
            case Expr::Kind::Ascribe:
                throw EvalError("ascription reached the evaluator; elaborate first");
        }
        throw EvalError("unreachable expression kind");
    }
};

}  // namespace

EvalResult eval(const Env& env, const ExprPtr& e, long fuel) {
    Evaluator ev{fuel};
    return ev.run(env, e);
}

}  // namespace tml
