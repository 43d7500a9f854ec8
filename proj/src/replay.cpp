#include "tml/replay.hpp"

#include "tml/eval.hpp"

namespace tml {

namespace {

struct Replayer {
    long fuel;

    void burn() {
        if (--fuel < 0) throw FuelExhausted();
    }

    ValuePtr run(const Env& env, const TracePtr& t) {
        burn();
        switch (t->kind) {
            case Trace::Kind::Hole:
                throw ReplayInconsistent("trace has a hole");
            case Trace::Kind::Var: {
                const ValuePtr v = env.find_ptr(t->name);
                if (!v) throw ReplayInconsistent("unbound variable: " + t->name);
                return v;
            }
            case Trace::Kind::Const:
                return v_const(t->lit);
            case Trace::Kind::Prim: {
                std::vector<ValuePtr> vals;
                for (const auto& k : t->kids) vals.push_back(run(env, k));
                try {
                    return eval_primitive(t->name, vals);
                } catch (const EvalError& e) {
                    throw ReplayInconsistent(e.what());
                }
            }
            case Trace::Kind::Let: {
                ValuePtr v1 = run(env, t->kids[0]);
                return run(env.extend(t->name, v1), t->kids[1]);
            }
            case Trace::Kind::Pair:
                return v_pair(run(env, t->kids[0]), run(env, t->kids[1]));
            case Trace::Kind::Fst: {
                ValuePtr v = run(env, t->kids[0]);
                if (v->kind != Value::Kind::Pair)
                    throw ReplayInconsistent("fst: trace subject is not a pair");
                return v->a;
            }
            case Trace::Kind::Snd: {
                ValuePtr v = run(env, t->kids[0]);
                if (v->kind != Value::Kind::Pair)
                    throw ReplayInconsistent("snd: trace subject is not a pair");
                return v->b;
            }
            case Trace::Kind::Inl:
                return v_inl(run(env, t->kids[0]), t->ann);
            case Trace::Kind::Inr:
                return v_inr(run(env, t->kids[0]), t->ann);
            case Trace::Kind::CaseL: {
                ValuePtr s = run(env, t->kids[0]);
                if (s->kind != Value::Kind::Inl)
                    throw ReplayInconsistent(
                        "trace records inl branch, replay produced " +
                        std::string(s->kind == Value::Kind::Inr ? "inr" : "a non-sum value"));
                return run(env.extend(t->name, s->a), t->kids[1]);
            }
            case Trace::Kind::CaseR: {
                ValuePtr s = run(env, t->kids[0]);
                if (s->kind != Value::Kind::Inr)
                    throw ReplayInconsistent(
                        "trace records inr branch, replay produced " +
                        std::string(s->kind == Value::Kind::Inl ? "inl" : "a non-sum value"));
                return run(env.extend(t->name, s->a), t->kids[1]);
            }
            case Trace::Kind::Fun:
                return v_closure(t->kappa, env);
            case Trace::Kind::App: {
                ValuePtr f = run(env, t->kids[0]);
                if (f->kind != Value::Kind::Closure)
                    throw ReplayInconsistent("application: trace subject is not a closure");
                if (!code_pointer_equal(f->kappa, t->kappa))
                    throw ReplayInconsistent(
                        "application: replayed closure does not match recorded code pointer");
                ValuePtr a = run(env, t->kids[1]);
                // The body trace is replayed as recorded; it is not checked
                // against the code pointer's source.
                Env inner = f->env.extend(t->name, f).extend(t->arg_name, a);
                return run(inner, t->kids[2]);
            }
            case Trace::Kind::Roll:
                return v_roll(run(env, t->kids[0]), t->ann);
            case Trace::Kind::Unroll: {
                ValuePtr v = run(env, t->kids[0]);
                if (v->kind != Value::Kind::Roll)
                    throw ReplayInconsistent("unroll: trace subject is not a rolled value");
                return v->a;
            }
        }
        throw ReplayInconsistent("unreachable trace kind");
    }
};

}  // namespace

ValuePtr replay(const Env& env, const TracePtr& t, long fuel) {
    Replayer r{fuel};
    return r.run(env, t);
}

bool is_consistent(const Env& env, const TracePtr& t, long fuel) {
    try {
        replay(env, t, fuel);
        return true;
    } catch (const ReplayInconsistent&) {
        return false;
    } catch (const UnboundVariable&) {
        return false;
    }
}

}  // namespace tml
