#include <doctest.h>

#include "gen.hpp"
#include "tml/parser.hpp"
#include "tml/replay.hpp"
#include "tml/session.hpp"
#include "tml/slicing.hpp"
#include "tml/typecheck.hpp"

using namespace tml;

namespace {

Path pvar(const std::string& x) {
    Path p;
    p.steps.push_back(PathStep::v(x));
    return p;
}

}  // namespace

TEST_CASE("the first argument of the binary functions is not always blank") {
    // fst(x) in [x -> (1^pb, 2^pc)^pa]: dependency result is 1^{pa,pb}
    Env env;
    env = env.extend("x", v_pair(v_int(1), v_int(2)));
    AnnotatedEnv<DepAnn> annotated;
    annotated.items.emplace_back(
        "x", an_pair<DepAnn>(an_const<DepAnn>(Constant::of_int(1), dep_singleton(pvar("pb"))),
                             an_const<DepAnn>(Constant::of_int(2), dep_singleton(pvar("pc"))),
                             dep_singleton(pvar("pa"))));
    TracePtr t = tr_fst(tr_var("x"));
    auto out = extract<DepAnn>(dep_structure(), t, annotated);
    CHECK(value_equal(erase<DepAnn>(out), v_int(1)));
    DepAnn want = dep_union(dep_singleton(pvar("pa")), dep_singleton(pvar("pb")));
    CHECK(out->ann == want);
    CHECK_FALSE(out->ann.contains(pvar("pc")));
}

TEST_CASE("where copies variables and blanks computed data") {
    AnnotatedEnv<WhereAnn> env;
    env.items.emplace_back("x", an_const<WhereAnn>(Constant::of_int(2), pvar("L")));
    CHECK(extract<WhereAnn>(where_structure(), tr_var("x"), env)->ann == WhereAnn{pvar("L")});
    auto sum = extract<WhereAnn>(where_structure(),
                                 tr_prim("+", {tr_var("x"), tr_var("x")}), env);
    CHECK(sum->ann == WhereAnn{});
    CHECK(value_equal(erase<WhereAnn>(sum), v_int(4)));
}

TEST_CASE("expression provenance of a constant is the constant term") {
    AnnotatedEnv<TermPtr> env;
    auto out = extract<TermPtr>(expr_structure(), tr_const(Constant::of_int(5)), env);
    CHECK(term_equal(out->ann, term_const(Constant::of_int(5))));
    CHECK(pretty_term(out->ann) == "5");
}

TEST_CASE("dependency of a constant is empty") {
    AnnotatedEnv<DepAnn> env;
    auto out = extract<DepAnn>(dep_structure(), tr_const(Constant::of_int(1)), env);
    CHECK(out->ann.empty());
}

TEST_CASE("eval_annotation_term") {
    Env env;
    env = env.extend("x", v_pair(v_int(1), v_int(2)))
              .extend("y", v_pair(v_int(2), v_int(3)));
    // x.1 + y.2 evaluates to 4
    Path x1 = pvar("x").dot1(), y2 = pvar("y").dot2();
    TermPtr t = term_op("+", {term_loc(x1), term_loc(y2)});
    CHECK(value_equal(eval_annotation_term(env, t), v_int(4)));
    CHECK(value_equal(eval_annotation_term(env, term_const(Constant::of_int(7))), v_int(7)));
    CHECK_THROWS(eval_annotation_term(env, term_bottom()));
    CHECK_THROWS_AS(eval_annotation_term(env, term_loc(pvar("zz"))), PathError);
}

TEST_CASE("eq_except_at") {
    Path l = pvar("l");
    auto c_plain = an_const<DepAnn>(Constant::of_int(1), DepAnn{});
    CHECK(eq_except_at(l, c_plain, c_plain));

    auto c1 = an_const<DepAnn>(Constant::of_int(1), dep_singleton(l));
    auto c2 = an_const<DepAnn>(Constant::of_int(2), dep_singleton(l));
    CHECK(eq_except_at(l, c1, c2));  // both labeled by l, values differ

    auto u1 = an_const<DepAnn>(Constant::of_int(1), DepAnn{});
    auto u2 = an_const<DepAnn>(Constant::of_int(2), DepAnn{});
    CHECK_FALSE(eq_except_at(l, u1, u2));
}

TEST_CASE("eq_except_at is a congruence-friendly equivalence") {
    tmlgen::Rng rng(5);
    Path l = pvar("l");
    auto gen_ann = [&](auto&& self, int depth) -> AnnPtr<DepAnn> {
        DepAnn ann;
        if (tmlgen::chance(rng, 0.4)) ann = dep_singleton(l);
        if (depth <= 0 || tmlgen::chance(rng, 0.4))
            return an_const<DepAnn>(Constant::of_int(tmlgen::pick_int(rng, 0, 2)), ann);
        return an_pair<DepAnn>(self(self, depth - 1), self(self, depth - 1), ann);
    };
    for (int i = 0; i < 300; i++) {
        auto a = gen_ann(gen_ann, 2);
        auto b = gen_ann(gen_ann, 2);
        auto c = gen_ann(gen_ann, 2);
        CHECK(eq_except_at(l, a, a));  // reflexive
        if (eq_except_at(l, a, b)) CHECK(eq_except_at(l, b, a));
        if (eq_except_at(l, a, b) && eq_except_at(l, b, c)) CHECK(eq_except_at(l, a, c));
    }
}

TEST_CASE("corpus: erasure compatibility for all four instances") {
    auto programs = tmlgen::corpus(21, 60, 5);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        auto base = path_annotate(p.env);
        auto w = extract<WhereAnn>(where_structure(), r.trace, base);
        CHECK(value_equal(erase<WhereAnn>(w), r.value));
        auto e = extract<TermPtr>(expr_structure(), r.trace, to_expr_annotations(base));
        CHECK(value_equal(erase<TermPtr>(e), r.value));
        auto d = extract<DepAnn>(dep_structure(), r.trace, to_dep_annotations(base));
        CHECK(value_equal(erase<DepAnn>(d), r.value));
        auto t = extract<TrivAnn>(triv_structure(), r.trace, to_triv_annotations(base));
        CHECK(value_equal(erase<TrivAnn>(t), r.value));
    }
}

TEST_CASE("corpus: where-provenance is a copy (occ inclusion)") {
    auto programs = tmlgen::corpus(23, 60, 5);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        auto base = path_annotate(p.env);
        auto w = extract<WhereAnn>(where_structure(), r.trace, base);
        auto out = occ_filter<WhereAnn>(
            occ<WhereAnn>(w), [](const WhereAnn& a) { return a.has_value(); });
        auto in = occ_filter<WhereAnn>(
            occ<WhereAnn>(base), [](const WhereAnn& a) { return a.has_value(); });
        for (const auto& node : out) {
            bool found = false;
            for (const auto& src : in)
                if (ann_value_equal<WhereAnn>(node, src)) {
                    found = true;
                    break;
                }
            CHECK(found);
        }
    }
}

TEST_CASE("corpus: expression annotations recompute their values") {
    auto programs = tmlgen::corpus(29, 60, 5);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        auto base = path_annotate(p.env);
        auto e = extract<TermPtr>(expr_structure(), r.trace, to_expr_annotations(base));
        // h built from path(gamma): h(pi) = gamma[pi]
        auto h = [&](const Path& pi) { return path_lookup(p.env, pi); };
        for (const auto& node : occ<TermPtr>(e)) {
            if (node->ann->kind == ExprAnnotation::Kind::Bottom) continue;
            CHECK(value_equal(eval_annotation_term(h, node->ann),
                              erase<TermPtr>(node)));
        }
    }
}

TEST_CASE("corpus: where-provenance is the erasure of expression-provenance") {
    auto programs = tmlgen::corpus(31, 60, 5);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        auto base = path_annotate(p.env);
        auto w = extract<WhereAnn>(where_structure(), r.trace, base);
        auto e = extract<TermPtr>(expr_structure(), r.trace, to_expr_annotations(base));
        auto w2 = map_annotations<WhereAnn>(
            e, [](const TermPtr& t) { return where_of_term(t); });
        CHECK(ann_value_equal<WhereAnn>(w, w2));
    }
}

TEST_CASE("corpus: dependency correctness under single-label perturbation") {
    tmlgen::Rng rng(37);
    auto programs = tmlgen::corpus(41, 120, 5);
    int checked = 0;
    for (const auto& p : programs) {
        auto base = to_dep_annotations(path_annotate(p.env));
        // pick a random base-typed leaf address
        std::vector<AnnPtr<PathAnn>> occs = occ<PathAnn>(path_annotate(p.env));
        std::vector<Path> leaves;
        for (const auto& node : occs)
            if (node->kind == AnnotatedValue<PathAnn>::Kind::Const &&
                node->lit.kind != Constant::Kind::Unit)
                leaves.push_back(*node->ann);
        if (leaves.empty()) continue;
        Path l = leaves[tmlgen::pick_int(rng, 0, leaves.size() - 1)];

        // perturb exactly that leaf
        ValuePtr old = path_lookup(p.env, l);
        ValuePtr fresh = old->lit.kind == Constant::Kind::Int
                             ? v_int(tmlgen::pick_int(rng, 0, 3))
                             : v_bool(tmlgen::chance(rng, 0.5));
        std::function<ValuePtr(const ValuePtr&, const Path&, std::size_t)> set_at =
            [&](const ValuePtr& v, const Path& path, std::size_t i) -> ValuePtr {
            if (i == path.steps.size()) return fresh;
            Value copy = *v;
            bool left = path.steps[i].kind != PathStep::Kind::Two;
            if (v->kind == Value::Kind::Pair && !left)
                copy.b = set_at(v->b, path, i + 1);
            else
                copy.a = set_at(v->a, path, i + 1);
            return std::make_shared<Value>(std::move(copy));
        };
        Env env2;
        for (const auto& [n, v] : p.env.items()) {
            if (n == l.steps[0].var) {
                Path inner;
                inner.steps.assign(l.steps.begin() + 1, l.steps.end());
                env2 = env2.extend(n, set_at(v, inner, 0));
            } else {
                env2 = env2.extend(n, v);
            }
        }
        auto base2 = to_dep_annotations(path_annotate(env2));
        REQUIRE(eq_except_at(l, base, base2));

        EvalResult r1 = eval(p.env, p.expr);
        EvalResult r2;
        try {
            r2 = eval(env2, p.expr);
        } catch (const FuelExhausted&) {
            continue;
        }
        auto d1 = extract<DepAnn>(dep_structure(), r1.trace, base);
        auto d2 = extract<DepAnn>(dep_structure(), r2.trace, base2);
        CHECK(eq_except_at(l, d1, d2));
        checked++;
    }
    CHECK(checked >= 60);
}
