#include "tml/extract.hpp"

#include <algorithm>

namespace tml {

// ---------------------------------------------------------------------------
// Where-provenance
// ---------------------------------------------------------------------------

AnnotationStructure<WhereAnn> where_structure() {
    AnnotationStructure<WhereAnn> st;
    st.bottom = std::nullopt;
    st.f_const = [](const Constant&) -> WhereAnn { return std::nullopt; };
    st.f_kappa = std::nullopt;
    auto copy = [](const WhereAnn&, const WhereAnn& component) { return component; };
    st.f_fst = st.f_snd = st.f_left = st.f_right = st.f_app = st.f_unroll = copy;
    st.f_prim = [](const std::string&, const std::vector<WhereAnn>&) -> WhereAnn {
        return std::nullopt;
    };
    return st;
}

// ---------------------------------------------------------------------------
// Expression provenance terms
// ---------------------------------------------------------------------------

static TermPtr mk_term(ExprAnnotation t) {
    return std::make_shared<ExprAnnotation>(std::move(t));
}

TermPtr term_bottom() {
    static TermPtr t = mk_term({ExprAnnotation::Kind::Bottom, {}, {}, "", {}});
    return t;
}
TermPtr term_loc(Path p) {
    ExprAnnotation t{};
    t.kind = ExprAnnotation::Kind::Loc;
    t.loc = std::move(p);
    return mk_term(std::move(t));
}
TermPtr term_const(Constant c) {
    ExprAnnotation t{};
    t.kind = ExprAnnotation::Kind::Const;
    t.lit = c;
    return mk_term(std::move(t));
}
TermPtr term_op(std::string op, std::vector<TermPtr> args) {
    ExprAnnotation t{};
    t.kind = ExprAnnotation::Kind::Op;
    t.op = std::move(op);
    t.args = std::move(args);
    return mk_term(std::move(t));
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprAnnotation::Kind::Bottom: return true;
        case ExprAnnotation::Kind::Loc: return a->loc == b->loc;
        case ExprAnnotation::Kind::Const: return a->lit == b->lit;
        case ExprAnnotation::Kind::Op: {
            if (a->op != b->op || a->args.size() != b->args.size()) return false;
            for (std::size_t i = 0; i < a->args.size(); i++)
                if (!term_equal(a->args[i], b->args[i])) return false;
            return true;
        }
    }
    return false;
}

static int op_prec(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "=" || op == "<") return 3;
    if (op == "+" || op == "-") return 4;
    if (op == "*") return 5;
    return 6;
}
static bool op_assoc(const std::string& op) {
    return op == "*" || op == "+" || op == "&&" || op == "||";
}

static void pretty_term_rec(const TermPtr& t, std::string& out, int prec) {
    switch (t->kind) {
        case ExprAnnotation::Kind::Bottom: out += "_|_"; return;
        case ExprAnnotation::Kind::Loc: out += pretty_path(t->loc); return;
        case ExprAnnotation::Kind::Const: out += pretty_constant(t->lit); return;
        case ExprAnnotation::Kind::Op: {
            if (t->args.size() == 1) {
                out += t->op + "(";
                pretty_term_rec(t->args[0], out, 0);
                out += ")";
                return;
            }
            int p = op_prec(t->op);
            bool paren = prec > p || (prec == p && !op_assoc(t->op));
            if (paren) out += "(";
            pretty_term_rec(t->args[0], out, p);
            out += t->op;
            // associative chains print flat
            pretty_term_rec(t->args[1], out, op_assoc(t->op) ? p : p + 1);
            if (paren) out += ")";
            return;
        }
    }
}

std::string pretty_term(const TermPtr& t) {
    std::string out;
    pretty_term_rec(t, out, 0);
    return out;
}

// Nested constant decrements collapse: (t-c1)-c2 becomes t-(c1+c2).
static TermPtr normalize_term(const std::string& op, std::vector<TermPtr> args) {
    if (op == "-" && args.size() == 2 &&
        args[1]->kind == ExprAnnotation::Kind::Const &&
        args[1]->lit.kind == Constant::Kind::Int &&
        args[0]->kind == ExprAnnotation::Kind::Op && args[0]->op == "-" &&
        args[0]->args[1]->kind == ExprAnnotation::Kind::Const &&
        args[0]->args[1]->lit.kind == Constant::Kind::Int) {
        Constant sum = Constant::of_int(args[0]->args[1]->lit.i + args[1]->lit.i);
        return term_op("-", {args[0]->args[0], term_const(sum)});
    }
    return term_op(op, std::move(args));
}

AnnotationStructure<TermPtr> expr_structure() {
    AnnotationStructure<TermPtr> st;
    st.bottom = term_bottom();
    st.f_kappa = term_bottom();
    st.f_const = [](const Constant& c) { return term_const(c); };
    auto copy = [](const TermPtr&, const TermPtr& component) { return component; };
    st.f_fst = st.f_snd = st.f_left = st.f_right = st.f_app = st.f_unroll = copy;
    st.f_prim = [](const std::string& op, const std::vector<TermPtr>& args) {
        return normalize_term(op, args);
    };
    return st;
}

ValuePtr eval_annotation_term(const std::function<ValuePtr(const Path&)>& resolve,
                              const TermPtr& t) {
    switch (t->kind) {
        case ExprAnnotation::Kind::Bottom:
            throw Error("cannot evaluate the blank annotation term");
        case ExprAnnotation::Kind::Loc: {
            ValuePtr v = resolve(t->loc);
            if (!v) throw PathError("unresolvable path " + pretty_path(t->loc));
            return v;
        }
        case ExprAnnotation::Kind::Const:
            return v_const(t->lit);
        case ExprAnnotation::Kind::Op: {
            std::vector<ValuePtr> args;
            for (const auto& a : t->args) args.push_back(eval_annotation_term(resolve, a));
            return eval_primitive(t->op, args);
        }
    }
    throw Error("unreachable term kind");
}

ValuePtr eval_annotation_term(const Env& env, const TermPtr& t) {
    return eval_annotation_term(
        [&env](const Path& p) { return path_lookup(env, p); }, t);
}

// ---------------------------------------------------------------------------
// Dependency provenance
// ---------------------------------------------------------------------------

bool DepAnn::contains(const Path& p) const {
    return std::find(paths.begin(), paths.end(), p) != paths.end();
}

bool operator==(const DepAnn& a, const DepAnn& b) {
    if (a.paths.size() != b.paths.size()) return false;
    for (const auto& p : a.paths)
        if (!b.contains(p)) return false;
    return true;
}

DepAnn dep_union(const DepAnn& a, const DepAnn& b) {
    DepAnn out = a;
    for (const auto& p : b.paths)
        if (!out.contains(p)) out.paths.push_back(p);
    return out;
}

DepAnn dep_singleton(Path p) {
    DepAnn out;
    out.paths.push_back(std::move(p));
    return out;
}

AnnotationStructure<DepAnn> dep_structure() {
    AnnotationStructure<DepAnn> st;
    st.bottom = DepAnn{};
    st.f_const = [](const Constant&) { return DepAnn{}; };
    st.f_kappa = DepAnn{};
    auto both = [](const DepAnn& a, const DepAnn& b) { return dep_union(a, b); };
    st.f_fst = st.f_snd = st.f_left = st.f_right = st.f_app = st.f_unroll = both;
    st.f_prim = [](const std::string&, const std::vector<DepAnn>& args) {
        DepAnn out;
        for (const auto& a : args) out = dep_union(out, a);
        return out;
    };
    return st;
}

AnnotationStructure<TrivAnn> triv_structure() {
    AnnotationStructure<TrivAnn> st;
    st.bottom = {};
    st.f_const = [](const Constant&) { return TrivAnn{}; };
    st.f_kappa = {};
    auto unit = [](const TrivAnn&, const TrivAnn&) { return TrivAnn{}; };
    st.f_fst = st.f_snd = st.f_left = st.f_right = st.f_app = st.f_unroll = unit;
    st.f_prim = [](const std::string&, const std::vector<TrivAnn>&) { return TrivAnn{}; };
    return st;
}

// ---------------------------------------------------------------------------
// eq-except-at
// ---------------------------------------------------------------------------

bool eq_except_at(const Path& l, const AnnPtr<DepAnn>& a, const AnnPtr<DepAnn>& b) {
    using K = AnnotatedValue<DepAnn>::Kind;
    if (a->ann.contains(l) && b->ann.contains(l)) return true;
    if (!(a->ann == b->ann)) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case K::Const: return a->lit == b->lit;
        case K::Pair:
            return eq_except_at(l, a->a, b->a) && eq_except_at(l, a->b, b->b);
        case K::Inl:
        case K::Inr:
        case K::Roll:
            return eq_except_at(l, a->a, b->a);
        case K::Closure: {
            if (!code_pointer_equal(a->kappa, b->kappa)) return false;
            return eq_except_at(l, a->env, b->env);
        }
    }
    return false;
}

bool eq_except_at(const Path& l, const AnnotatedEnv<DepAnn>& a,
                  const AnnotatedEnv<DepAnn>& b) {
    if (a.items.size() != b.items.size()) return false;
    for (const auto& [n, v] : a.items) {
        auto w = b.find(n);
        if (!w || !eq_except_at(l, v, w)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Annotation conversions
// ---------------------------------------------------------------------------

AnnotatedEnv<TermPtr> to_expr_annotations(const AnnotatedEnv<PathAnn>& env) {
    return map_annotations_env<TermPtr>(env, [](const PathAnn& a) {
        return a ? term_loc(*a) : term_bottom();
    });
}

AnnotatedEnv<DepAnn> to_dep_annotations(const AnnotatedEnv<PathAnn>& env) {
    return map_annotations_env<DepAnn>(env, [](const PathAnn& a) {
        return a ? dep_singleton(*a) : DepAnn{};
    });
}

AnnotatedEnv<TrivAnn> to_triv_annotations(const AnnotatedEnv<PathAnn>& env) {
    return map_annotations_env<TrivAnn>(env, [](const PathAnn&) { return TrivAnn{}; });
}

AnnotatedEnv<PathAnn> blank_annotations(const Env& env) {
    AnnotatedEnv<PathAnn> out;
    for (const auto& [n, v] : env.items()) {
        std::function<AnnPtr<PathAnn>(const ValuePtr&)> go =
            [&go](const ValuePtr& v0) -> AnnPtr<PathAnn> {
            switch (v0->kind) {
                case Value::Kind::Const: return an_const<PathAnn>(v0->lit, std::nullopt);
                case Value::Kind::Pair:
                    return an_pair<PathAnn>(go(v0->a), go(v0->b), std::nullopt);
                case Value::Kind::Inl:
                    return an_inl<PathAnn>(go(v0->a), std::nullopt, v0->ann);
                case Value::Kind::Inr:
                    return an_inr<PathAnn>(go(v0->a), std::nullopt, v0->ann);
                case Value::Kind::Roll:
                    return an_roll<PathAnn>(go(v0->a), std::nullopt, v0->ann);
                case Value::Kind::Closure: {
                    AnnotatedEnv<PathAnn> inner;
                    for (const auto& [m, w] : v0->env.items())
                        inner.items.emplace_back(m, go(w));
                    return an_closure<PathAnn>(v0->kappa, std::move(inner), std::nullopt);
                }
            }
            throw Error("unreachable value kind");
        };
        out.items.emplace_back(n, go(v));
    }
    return out;
}

WhereAnn where_of_term(const TermPtr& t) {
    if (t->kind == ExprAnnotation::Kind::Loc) return t->loc;
    return std::nullopt;
}

}  // namespace tml
