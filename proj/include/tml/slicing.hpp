#ifndef TML_SLICING_HPP
#define TML_SLICING_HPP

#include "tml/extract.hpp"
#include "tml/patterns.hpp"

namespace tml {

// A trace that could not have been produced by evaluation (join failure or a
// shape mismatch during slicing).
struct IllFormedSlice : Error {
    using Error::Error;
};

struct Slice {
    PatternEnv env_part;
    PartialTrace trace_part;
};

bool slice_equal(const Slice& a, const Slice& b);

struct DisclosureResult {
    PartialTrace trace;
    PatternEnv env;
};

// Backward disclosure slicing p,T -> S,rho.  Requires p `leq` v for the value
// v the trace replays to.
DisclosureResult disclosure_slice(const PatternPtr& p, const TracePtr& t);

// Witness(p, v): requires p not `leq` v and p diamond-free; the result is
// below v, still fails p, and so does every extension of it.
PatternPtr witness(const PatternPtr& p, const ValuePtr& v);

// Disc_p over a consistent triple; the environment part is diamond-free.
Slice disc_view(const PatternPtr& p, const Env& env, const TracePtr& t, const ValuePtr& v);

struct ObfuscationResult {
    PatternPtr value;
    PartialTrace trace;
};

// Forward obfuscation slicing rho,T -> p,S: re-evaluates the trace on a
// partial environment, holing every node whose scrutinee is unknown.
ObfuscationResult obfuscation_slice(const PatternEnv& rho, const TracePtr& t);

// Obf_rho over a consistent triple; checks the preconditions.
ObfuscationResult obf_view(const PatternEnv& rho, const Env& env, const TracePtr& t,
                           const ValuePtr& v);

// ---------------------------------------------------------------------------
// Matching-modulo lifted to annotated values: non-hole positions must agree
// on annotations, diamonds require identity.
// ---------------------------------------------------------------------------

template <class A>
bool ann_matches_mod(const PatternPtr& p, const AnnPtr<A>& x, const AnnPtr<A>& y) {
    using K = typename AnnotatedValue<A>::Kind;
    if (p->kind == Pattern::Kind::Hole) return true;
    if (p->kind == Pattern::Kind::Diamond) return ann_value_equal<A>(x, y);
    if (!(x->ann == y->ann)) return false;
    switch (p->kind) {
        case Pattern::Kind::Const:
            return x->kind == K::Const && y->kind == K::Const && x->lit == p->lit &&
                   y->lit == p->lit;
        case Pattern::Kind::Pair:
            return x->kind == K::Pair && y->kind == K::Pair &&
                   ann_matches_mod<A>(p->a, x->a, y->a) &&
                   ann_matches_mod<A>(p->b, x->b, y->b);
        case Pattern::Kind::Inl:
            return x->kind == K::Inl && y->kind == K::Inl &&
                   ann_matches_mod<A>(p->a, x->a, y->a);
        case Pattern::Kind::Inr:
            return x->kind == K::Inr && y->kind == K::Inr &&
                   ann_matches_mod<A>(p->a, x->a, y->a);
        case Pattern::Kind::Roll:
            return x->kind == K::Roll && y->kind == K::Roll &&
                   ann_matches_mod<A>(p->a, x->a, y->a);
        case Pattern::Kind::Closure: {
            if (x->kind != K::Closure || y->kind != K::Closure) return false;
            if (!code_pointer_equal(p->kappa, x->kappa) ||
                !code_pointer_equal(p->kappa, y->kappa))
                return false;
            for (const auto& [n, q] : p->env.items) {
                auto a = x->env.find(n);
                auto b = y->env.find(n);
                if (!a || !b || !ann_matches_mod<A>(q, a, b)) return false;
            }
            return true;
        }
        default:
            return false;
    }
}

template <class A>
bool ann_matches_mod(const PatternEnv& rho, const AnnotatedEnv<A>& x,
                     const AnnotatedEnv<A>& y) {
    for (const auto& [n, p] : rho.items) {
        auto a = x.find(n);
        auto b = y.find(n);
        if (!a || !b || !ann_matches_mod<A>(p, a, b)) return false;
    }
    return true;
}

// Oracle for the extraction-from-slices theorem: slices T by p, checks the
// hypotheses, and compares the two extractions modulo p.
template <class A>
bool extraction_from_slice_check(const AnnotationStructure<A>& st, const PatternPtr& p,
                                 const TracePtr& t, const AnnotatedEnv<A>& env,
                                 const TracePtr& t2, const AnnotatedEnv<A>& env2) {
    DisclosureResult d = disclosure_slice(p, t);
    if (!ann_matches_mod<A>(d.env, env, env2))
        throw Error("extraction_from_slice_check: environments differ outside rho");
    if (!trace_leq(d.trace, t2))
        throw Error("extraction_from_slice_check: second trace does not extend the slice");
    AnnPtr<A> a = extract<A>(st, t, env);
    AnnPtr<A> b = extract<A>(st, t2, env2);
    return ann_matches_mod<A>(p, a, b);
}

}  // namespace tml

#endif
