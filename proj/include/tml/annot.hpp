#ifndef TML_ANNOT_HPP
#define TML_ANNOT_HPP

#include <functional>
#include <string>
#include <vector>

#include "tml/syntax.hpp"

namespace tml {

struct PathError : Error {
    using Error::Error;
};

// pi ::= eps | x.pi | 1.pi | 2.pi ; concatenation associative with unit eps.
// A leading variable step addresses an environment component.
struct PathStep {
    enum class Kind { Var, One, Two };
    Kind kind = Kind::One;
    std::string var;

    static PathStep v(std::string x) { return {Kind::Var, std::move(x)}; }
    static PathStep one() { return {Kind::One, ""}; }
    static PathStep two() { return {Kind::Two, ""}; }
};

struct Path {
    std::vector<PathStep> steps;

    Path dot_var(const std::string& x) const;
    Path dot1() const;
    Path dot2() const;
    Path concat(const Path& rhs) const;
    bool empty() const { return steps.empty(); }
};

bool operator==(const Path& a, const Path& b);
inline bool operator!=(const Path& a, const Path& b) { return !(a == b); }
bool operator<(const Path& a, const Path& b);
std::string pretty_path(const Path& p);

ValuePtr path_lookup(const ValuePtr& v, const Path& p);
ValuePtr path_lookup(const Env& env, const Path& p);

// ---------------------------------------------------------------------------
// Annotated values w^a over a pluggable annotation set A.  Every node carries
// exactly one annotation.
// ---------------------------------------------------------------------------

template <class A>
struct AnnotatedValue;
template <class A>
using AnnPtr = std::shared_ptr<const AnnotatedValue<A>>;

template <class A>
struct AnnotatedEnv {
    std::vector<std::pair<std::string, AnnPtr<A>>> items;

    AnnPtr<A> find(const std::string& x) const {
        for (const auto& [n, v] : items)
            if (n == x) return v;
        return nullptr;
    }
    AnnPtr<A> lookup(const std::string& x) const {
        if (auto v = find(x)) return v;
        throw UnboundVariable(x);
    }
    AnnotatedEnv extend(const std::string& x, AnnPtr<A> v) const {
        AnnotatedEnv next = *this;
        for (auto& [n, old] : next.items) {
            if (n == x) {
                old = std::move(v);
                return next;
            }
        }
        next.items.emplace_back(x, std::move(v));
        return next;
    }
};

template <class A>
struct AnnotatedValue {
    enum class Kind { Const, Pair, Inl, Inr, Roll, Closure };
    Kind kind;
    A ann;
    Constant lit;
    AnnPtr<A> a, b;
    TypePtr type_ann;  // carried through from the underlying value
    CodePointer kappa;
    AnnotatedEnv<A> env;
};

template <class A>
AnnPtr<A> an_const(Constant c, A ann) {
    AnnotatedValue<A> v{};
    v.kind = AnnotatedValue<A>::Kind::Const;
    v.lit = c;
    v.ann = std::move(ann);
    return std::make_shared<AnnotatedValue<A>>(std::move(v));
}
template <class A>
AnnPtr<A> an_pair(AnnPtr<A> x, AnnPtr<A> y, A ann) {
    AnnotatedValue<A> v{};
    v.kind = AnnotatedValue<A>::Kind::Pair;
    v.a = std::move(x);
    v.b = std::move(y);
    v.ann = std::move(ann);
    return std::make_shared<AnnotatedValue<A>>(std::move(v));
}
template <class A>
AnnPtr<A> an_inl(AnnPtr<A> x, A ann, TypePtr t = nullptr) {
    AnnotatedValue<A> v{};
    v.kind = AnnotatedValue<A>::Kind::Inl;
    v.a = std::move(x);
    v.ann = std::move(ann);
    v.type_ann = std::move(t);
    return std::make_shared<AnnotatedValue<A>>(std::move(v));
}
template <class A>
AnnPtr<A> an_inr(AnnPtr<A> x, A ann, TypePtr t = nullptr) {
    AnnotatedValue<A> v{};
    v.kind = AnnotatedValue<A>::Kind::Inr;
    v.a = std::move(x);
    v.ann = std::move(ann);
    v.type_ann = std::move(t);
    return std::make_shared<AnnotatedValue<A>>(std::move(v));
}
template <class A>
AnnPtr<A> an_roll(AnnPtr<A> x, A ann, TypePtr t = nullptr) {
    AnnotatedValue<A> v{};
    v.kind = AnnotatedValue<A>::Kind::Roll;
    v.a = std::move(x);
    v.ann = std::move(ann);
    v.type_ann = std::move(t);
    return std::make_shared<AnnotatedValue<A>>(std::move(v));
}
template <class A>
AnnPtr<A> an_closure(CodePointer kappa, AnnotatedEnv<A> env, A ann) {
    AnnotatedValue<A> v{};
    v.kind = AnnotatedValue<A>::Kind::Closure;
    v.kappa = std::move(kappa);
    v.env = std::move(env);
    v.ann = std::move(ann);
    return std::make_shared<AnnotatedValue<A>>(std::move(v));
}

template <class A>
AnnPtr<A> with_ann(const AnnPtr<A>& v, A ann) {
    AnnotatedValue<A> copy = *v;
    copy.ann = std::move(ann);
    return std::make_shared<AnnotatedValue<A>>(std::move(copy));
}

// ---------------------------------------------------------------------------
// Erasure |v^a| = v
// ---------------------------------------------------------------------------

template <class A>
Env erase(const AnnotatedEnv<A>& env);

template <class A>
ValuePtr erase(const AnnPtr<A>& v) {
    using K = typename AnnotatedValue<A>::Kind;
    switch (v->kind) {
        case K::Const: return v_const(v->lit);
        case K::Pair: return v_pair(erase<A>(v->a), erase<A>(v->b));
        case K::Inl: return v_inl(erase<A>(v->a), v->type_ann);
        case K::Inr: return v_inr(erase<A>(v->a), v->type_ann);
        case K::Roll: return v_roll(erase<A>(v->a), v->type_ann);
        case K::Closure: return v_closure(v->kappa, erase<A>(v->env));
    }
    throw Error("unreachable annotated value kind");
}

template <class A>
Env erase(const AnnotatedEnv<A>& env) {
    Env out;
    for (const auto& [n, v] : env.items) out = out.extend(n, erase<A>(v));
    return out;
}

// ---------------------------------------------------------------------------
// occ: all annotated subvalues (closures contribute their environments)
// ---------------------------------------------------------------------------

template <class A>
void occ_into(const AnnPtr<A>& v, std::vector<AnnPtr<A>>& out) {
    using K = typename AnnotatedValue<A>::Kind;
    out.push_back(v);
    switch (v->kind) {
        case K::Const: return;
        case K::Pair:
            occ_into<A>(v->a, out);
            occ_into<A>(v->b, out);
            return;
        case K::Inl:
        case K::Inr:
        case K::Roll:
            occ_into<A>(v->a, out);
            return;
        case K::Closure:
            for (const auto& [n, bound] : v->env.items) occ_into<A>(bound, out);
            return;
    }
}

template <class A>
std::vector<AnnPtr<A>> occ(const AnnPtr<A>& v) {
    std::vector<AnnPtr<A>> out;
    occ_into<A>(v, out);
    return out;
}

template <class A>
std::vector<AnnPtr<A>> occ(const AnnotatedEnv<A>& env) {
    std::vector<AnnPtr<A>> out;
    for (const auto& [n, v] : env.items) occ_into<A>(v, out);
    return out;
}

template <class A, class Pred>
std::vector<AnnPtr<A>> occ_filter(std::vector<AnnPtr<A>> xs, Pred keep) {
    std::vector<AnnPtr<A>> out;
    for (auto& x : xs)
        if (keep(x->ann)) out.push_back(std::move(x));
    return out;
}

// ---------------------------------------------------------------------------
// Path annotation: every node annotated with its own address.  Rolls are
// traversed with step 1, mirroring path lookup.
// ---------------------------------------------------------------------------

using PathAnn = std::optional<Path>;  // nullopt is the blank annotation

AnnPtr<PathAnn> path_annotate(const ValuePtr& v, const Path& at);
AnnotatedEnv<PathAnn> path_annotate(const Env& env, const Path& at = {});

// Structural equality of annotated values; annotations compared with ==.
template <class A>
bool ann_value_equal(const AnnPtr<A>& x, const AnnPtr<A>& y) {
    using K = typename AnnotatedValue<A>::Kind;
    if (x.get() == y.get()) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind) return false;
    if (!(x->ann == y->ann)) return false;
    switch (x->kind) {
        case K::Const: return x->lit == y->lit;
        case K::Pair: return ann_value_equal<A>(x->a, y->a) && ann_value_equal<A>(x->b, y->b);
        case K::Inl:
        case K::Inr:
        case K::Roll: return ann_value_equal<A>(x->a, y->a);
        case K::Closure: {
            if (!code_pointer_equal(x->kappa, y->kappa)) return false;
            if (x->env.items.size() != y->env.items.size()) return false;
            for (const auto& [n, v] : x->env.items) {
                auto w = y->env.find(n);
                if (!w || !ann_value_equal<A>(v, w)) return false;
            }
            return true;
        }
    }
    return false;
}

// Functorial action on annotations.
template <class B, class A, class F>
AnnPtr<B> map_annotations(const AnnPtr<A>& v, F f) {
    using K = typename AnnotatedValue<A>::Kind;
    switch (v->kind) {
        case K::Const: return an_const<B>(v->lit, f(v->ann));
        case K::Pair:
            return an_pair<B>(map_annotations<B, A, F>(v->a, f),
                              map_annotations<B, A, F>(v->b, f), f(v->ann));
        case K::Inl:
            return an_inl<B>(map_annotations<B, A, F>(v->a, f), f(v->ann), v->type_ann);
        case K::Inr:
            return an_inr<B>(map_annotations<B, A, F>(v->a, f), f(v->ann), v->type_ann);
        case K::Roll:
            return an_roll<B>(map_annotations<B, A, F>(v->a, f), f(v->ann), v->type_ann);
        case K::Closure: {
            AnnotatedEnv<B> env;
            for (const auto& [n, bound] : v->env.items)
                env.items.emplace_back(n, map_annotations<B, A, F>(bound, f));
            return an_closure<B>(v->kappa, std::move(env), f(v->ann));
        }
    }
    throw Error("unreachable annotated value kind");
}

template <class B, class A, class F>
AnnotatedEnv<B> map_annotations_env(const AnnotatedEnv<A>& env, F f) {
    AnnotatedEnv<B> out;
    for (const auto& [n, v] : env.items)
        out.items.emplace_back(n, map_annotations<B, A, F>(v, f));
    return out;
}

}  // namespace tml

#endif
