#ifndef TML_EXTRACT_HPP
#define TML_EXTRACT_HPP

#include <functional>
#include <map>

#include "tml/annot.hpp"
#include "tml/eval.hpp"
#include "tml/replay.hpp"

namespace tml {

// Annotation-propagation algebra parameterizing generic extraction.  The
// binary functions receive (container annotation, component annotation);
// pair/inl/inr/roll/let results are hard-wired to bottom.
template <class A>
struct AnnotationStructure {
    A bottom;
    std::function<A(const Constant&)> f_const;  // schematic in the constant
    A f_kappa;
    std::function<A(const A&, const A&)> f_fst, f_snd, f_left, f_right, f_app, f_unroll;
    std::function<A(const std::string&, const std::vector<A>&)> f_prim;
};

template <class A>
AnnPtr<A> extract(const AnnotationStructure<A>& st, const TracePtr& t,
                  const AnnotatedEnv<A>& env, long fuel = 1000000);

// ---------------------------------------------------------------------------
// Where-provenance: copied data keeps its source path, computed data is blank.
// ---------------------------------------------------------------------------

using WhereAnn = PathAnn;  // std::optional<Path>

AnnotationStructure<WhereAnn> where_structure();

// ---------------------------------------------------------------------------
// Expression provenance: terms over paths, constants and primitives.
// ---------------------------------------------------------------------------

struct ExprAnnotation;
using TermPtr = std::shared_ptr<const ExprAnnotation>;

struct ExprAnnotation {
    enum class Kind { Bottom, Loc, Const, Op };
    Kind kind = Kind::Bottom;
    Path loc;
    Constant lit;
    std::string op;
    std::vector<TermPtr> args;
};

TermPtr term_bottom();
TermPtr term_loc(Path p);
TermPtr term_const(Constant c);
TermPtr term_op(std::string op, std::vector<TermPtr> args);

bool term_equal(const TermPtr& a, const TermPtr& b);
inline bool operator==(const TermPtr& a, const TermPtr& b) { return term_equal(a, b); }
std::string pretty_term(const TermPtr& t);

AnnotationStructure<TermPtr> expr_structure();

// Evaluates a term with paths resolved through `resolve`; throws on bottom
// or unresolvable paths.
ValuePtr eval_annotation_term(const std::function<ValuePtr(const Path&)>& resolve,
                              const TermPtr& t);
ValuePtr eval_annotation_term(const Env& env, const TermPtr& t);

// ---------------------------------------------------------------------------
// Dependency provenance: sets of paths.  Union keeps first-occurrence order
// (rendering is deterministic); equality is as sets.
// ---------------------------------------------------------------------------

struct DepAnn {
    std::vector<Path> paths;  // duplicate-free, insertion-ordered

    bool contains(const Path& p) const;
    bool empty() const { return paths.empty(); }
};

bool operator==(const DepAnn& a, const DepAnn& b);  // set equality
DepAnn dep_union(const DepAnn& a, const DepAnn& b);
DepAnn dep_singleton(Path p);

AnnotationStructure<DepAnn> dep_structure();

// ---------------------------------------------------------------------------
// Trivial instance over the one-point annotation set.
// ---------------------------------------------------------------------------

struct TrivAnn {};
inline bool operator==(TrivAnn, TrivAnn) { return true; }

AnnotationStructure<TrivAnn> triv_structure();

// ---------------------------------------------------------------------------
// eq-except-at: equal except (possibly) at parts labeled by l.
// ---------------------------------------------------------------------------

bool eq_except_at(const Path& l, const AnnPtr<DepAnn>& a, const AnnPtr<DepAnn>& b);
bool eq_except_at(const Path& l, const AnnotatedEnv<DepAnn>& a, const AnnotatedEnv<DepAnn>& b);

// Conversions from initial (label-path or blank) annotations to each
// instance's annotation set.
AnnotatedEnv<TermPtr> to_expr_annotations(const AnnotatedEnv<PathAnn>& env);
AnnotatedEnv<DepAnn> to_dep_annotations(const AnnotatedEnv<PathAnn>& env);
AnnotatedEnv<TrivAnn> to_triv_annotations(const AnnotatedEnv<PathAnn>& env);
AnnotatedEnv<PathAnn> blank_annotations(const Env& env);

// Where-provenance is computable from expression-provenance: keep locations,
// blank everything else.
WhereAnn where_of_term(const TermPtr& t);

// ---------------------------------------------------------------------------
// Generic engine
// ---------------------------------------------------------------------------

template <class A>
struct Extractor {
    const AnnotationStructure<A>& st;
    long fuel;

    void burn() {
        if (--fuel < 0) throw FuelExhausted();
    }

    AnnPtr<A> run(const TracePtr& t, const AnnotatedEnv<A>& env) {
        using K = typename AnnotatedValue<A>::Kind;
        burn();
        switch (t->kind) {
            case Trace::Kind::Hole:
                throw ReplayInconsistent("trace has a hole");
            case Trace::Kind::Var: {
                if (auto v = env.find(t->name)) return v;
                throw ReplayInconsistent("unbound variable: " + t->name);
            }
            case Trace::Kind::Const:
                return an_const<A>(t->lit, st.f_const(t->lit));
            case Trace::Kind::Prim: {
                std::vector<ValuePtr> vals;
                std::vector<A> anns;
                for (const auto& k : t->kids) {
                    AnnPtr<A> r = run(k, env);
                    vals.push_back(erase<A>(r));
                    anns.push_back(r->ann);
                }
                ValuePtr out;
                try {
                    out = eval_primitive(t->name, vals);
                } catch (const Error& e) {
                    throw ReplayInconsistent(e.what());
                }
                A ann = st.f_prim(t->name, anns);
                if (out->kind == Value::Kind::Const) return an_const<A>(out->lit, ann);
                // b2s returns a sum; its payload is freshly constructed
                if (out->kind == Value::Kind::Inl)
                    return an_inl<A>(an_const<A>(Constant::unit(), st.bottom), ann, out->ann);
                return an_inr<A>(an_const<A>(Constant::unit(), st.bottom), ann, out->ann);
            }
            case Trace::Kind::Let: {
                AnnPtr<A> v1 = run(t->kids[0], env);
                return run(t->kids[1], env.extend(t->name, v1));
            }
            case Trace::Kind::Pair:
                return an_pair<A>(run(t->kids[0], env), run(t->kids[1], env), st.bottom);
            case Trace::Kind::Fst: {
                AnnPtr<A> v = run(t->kids[0], env);
                if (v->kind != K::Pair)
                    throw ReplayInconsistent("fst: trace subject is not a pair");
                return with_ann<A>(v->a, st.f_fst(v->ann, v->a->ann));
            }
            case Trace::Kind::Snd: {
                AnnPtr<A> v = run(t->kids[0], env);
                if (v->kind != K::Pair)
                    throw ReplayInconsistent("snd: trace subject is not a pair");
                return with_ann<A>(v->b, st.f_snd(v->ann, v->b->ann));
            }
            case Trace::Kind::Inl:
                return an_inl<A>(run(t->kids[0], env), st.bottom, t->ann);
            case Trace::Kind::Inr:
                return an_inr<A>(run(t->kids[0], env), st.bottom, t->ann);
            case Trace::Kind::CaseL: {
                AnnPtr<A> s = run(t->kids[0], env);
                if (s->kind != K::Inl)
                    throw ReplayInconsistent("trace records inl branch, extraction disagrees");
                AnnPtr<A> body = run(t->kids[1], env.extend(t->name, s->a));
                return with_ann<A>(body, st.f_left(s->ann, body->ann));
            }
            case Trace::Kind::CaseR: {
                AnnPtr<A> s = run(t->kids[0], env);
                if (s->kind != K::Inr)
                    throw ReplayInconsistent("trace records inr branch, extraction disagrees");
                AnnPtr<A> body = run(t->kids[1], env.extend(t->name, s->a));
                return with_ann<A>(body, st.f_right(s->ann, body->ann));
            }
            case Trace::Kind::Fun:
                return an_closure<A>(t->kappa, env, st.f_kappa);
            case Trace::Kind::App: {
                AnnPtr<A> f = run(t->kids[0], env);
                if (f->kind != K::Closure)
                    throw ReplayInconsistent("application: trace subject is not a closure");
                if (!code_pointer_equal(f->kappa, t->kappa))
                    throw ReplayInconsistent(
                        "application: closure does not match recorded code pointer");
                AnnPtr<A> arg = run(t->kids[1], env);
                AnnotatedEnv<A> inner =
                    f->env.extend(t->name, f).extend(t->arg_name, arg);
                AnnPtr<A> body = run(t->kids[2], inner);
                return with_ann<A>(body, st.f_app(f->ann, body->ann));
            }
            case Trace::Kind::Roll:
                return an_roll<A>(run(t->kids[0], env), st.bottom, t->ann);
            case Trace::Kind::Unroll: {
                AnnPtr<A> v = run(t->kids[0], env);
                if (v->kind != K::Roll)
                    throw ReplayInconsistent("unroll: trace subject is not a rolled value");
                return with_ann<A>(v->a, st.f_unroll(v->ann, v->a->ann));
            }
        }
        throw ReplayInconsistent("unreachable trace kind");
    }
};

template <class A>
AnnPtr<A> extract(const AnnotationStructure<A>& st, const TracePtr& t,
                  const AnnotatedEnv<A>& env, long fuel) {
    Extractor<A> ex{st, fuel};
    return ex.run(t, env);
}

}  // namespace tml

#endif
