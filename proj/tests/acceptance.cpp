// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances and bounds are fixed here, not configurable.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gen.hpp"
#include "tml/parser.hpp"
#include "tml/replay.hpp"
#include "tml/security.hpp"
#include "tml/serialize.hpp"
#include "tml/session.hpp"
#include "tml/slicing.hpp"
#include "tml/typecheck.hpp"

using namespace tml;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, const std::function<bool()>& body) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string what;
    try {
        ok = body();
    } catch (const std::exception& e) {
        what = e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::printf("criterion %2d %-34s %s (%lld ms)%s%s\n", number, name.c_str(),
                ok ? "PASS" : "FAIL", static_cast<long long>(ms),
                what.empty() ? "" : " — ", what.c_str());
    if (!ok) failures++;
}

bool expect(bool cond, const char* msg) {
    if (!cond) {
        std::printf("    check failed: %s\n", msg);
        return false;
    }
    return true;
}

#define REQUIRE_OK(cond)                         \
    do {                                         \
        if (!expect((cond), #cond)) return false; \
    } while (0)

// -- criterion 1 -------------------------------------------------------------

bool golden_sessions() {
    {
        Session s;
        s.run_line("val y = 2@L");
        s.run_line("fun f (x:int) : int = if x = y then y else x+1");
        s.run_line("val xs = [1@L1,2@L2,3@L3]");
        s.run_line("val t = trace (map f xs)");
        REQUIRE_OK(s.run_line("where t") == "val it = [2@{},2@{L},4@{}]");
        REQUIRE_OK(s.run_line("dependency t") ==
                   "val it = [2@{L1,L},2@{L2,L},4@{L3,L}]");
        REQUIRE_OK(s.run_line("expression t") ==
                   "val it = [2@{L1+1},2@{L},4@{L3+1}]");
    }
    {
        Session s;
        s.run_line(
            "fun f (ps:(int*int) list) : (int*int) list = "
            "let go = fun go(args:((int*int) list)*((int*int) list)):(int*int) list. "
            "case unroll (fst args) of {inl(u). snd args; inr(c). "
            "let p = fst c in "
            "let m = if fst p < snd p then (fst p, fst p + 1) else (snd p, snd p + 1) in "
            "go (snd c, m :: snd args)} in go (ps, ([] : (int*int) list))");
        s.run_line("trace (f [(1@L1,2@L2),(4@L3,3@L4),(5@L5,6@L6)])");
        REQUIRE_OK(s.run_line("where it") ==
                   "val it = [(5@L5,6),(3@L4,4),(1@L1,2)]");
    }
    {
        Session s;
        s.run_line("val h = fun h(x:int):int. if x = 0 then 1 else x * (h (x-1))");
        s.run_line("trace (h (4@L))");
        REQUIRE_OK(s.run_line("expression it") ==
                   "val it = 24@{L*(L-1)*(L-2)*(L-3)*1}");
    }
    {
        Session s;
        s.run_line(
            "fun g (xs:(int*int*int) list) : int list = "
            "case unroll xs of {inl(u). ([] : int list); inr(c). "
            "let t = fst c in "
            "let s = fst t + fst (snd t) + snd (snd t) in "
            "let rep = fun rep(ys:(int*int*int) list):int list. "
            "case unroll ys of {inl(u2). ([] : int list); inr(c2). s :: (rep (snd c2))} "
            "in rep xs}");
        s.run_line("trace (g [(1@L1,2@L2,3@L3),(4@L4,5@L5,6@L6)])");
        REQUIRE_OK(s.run_line("dependency it") ==
                   "val it = [6@{L1,L2,L3},6@{L1,L2,L3}]");
    }
    return true;
}

// -- criterion 2 -------------------------------------------------------------

bool factorial_shape() {
    Elaborated el = check_expr(
        TypeEnv{},
        parse_expr("let f = fun f(x:int):int. if x = 0 then 1 else x*(f (x-1)) in f 4"));
    EvalResult r = eval(Env{}, el.expr);
    REQUIRE_OK(value_equal(r.value, v_int(24)));
    REQUIRE_OK(trace_count(r.trace, Trace::Kind::App) == 5);
    REQUIRE_OK(trace_count(r.trace, Trace::Kind::CaseR) == 4);
    REQUIRE_OK(trace_count(r.trace, Trace::Kind::CaseL) == 1);
    return true;
}

// -- criterion 3 -------------------------------------------------------------

bool theorem_suites() {
    tmlgen::Rng rng(1001);
    auto programs = tmlgen::corpus(1002, 500, 6);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        // consistency
        REQUIRE_OK(value_equal(replay(p.env, r.trace), r.value));
        // determinacy of replay and evaluation
        REQUIRE_OK(value_equal(replay(p.env, r.trace), replay(p.env, r.trace)));
        EvalResult again = eval(p.env, p.expr);
        REQUIRE_OK(value_equal(again.value, r.value));
        REQUIRE_OK(trace_equal(again.trace, r.trace));
        // type safety of the result and the trace
        REQUIRE_OK(type_equal(check_value(r.value), p.type));
        REQUIRE_OK(type_equal(check_trace(p.tenv, r.trace), p.type));
        // fidelity under perturbed environments
        for (int k = 0; k < 3; k++) {
            Env env2 = tmlgen::perturb_env(rng, p.env, 0.5);
            ValuePtr v2;
            try {
                v2 = replay(env2, r.trace);
            } catch (const ReplayInconsistent&) {
                continue;
            }
            EvalResult r2 = eval(env2, p.expr);
            REQUIRE_OK(value_equal(r2.value, v2));
            REQUIRE_OK(trace_equal(r2.trace, r.trace));
        }
    }
    return true;
}

// -- criterion 4 -------------------------------------------------------------

bool extraction_correctness() {
    auto programs = tmlgen::corpus(1002, 500, 6);  // the same corpus seed
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        auto base = path_annotate(p.env);
        auto w = extract<WhereAnn>(where_structure(), r.trace, base);
        auto e = extract<TermPtr>(expr_structure(), r.trace, to_expr_annotations(base));
        auto d = extract<DepAnn>(dep_structure(), r.trace, to_dep_annotations(base));
        auto t = extract<TrivAnn>(triv_structure(), r.trace, to_triv_annotations(base));
        REQUIRE_OK(value_equal(erase<WhereAnn>(w), r.value));
        REQUIRE_OK(value_equal(erase<TermPtr>(e), r.value));
        REQUIRE_OK(value_equal(erase<DepAnn>(d), r.value));
        REQUIRE_OK(value_equal(erase<TrivAnn>(t), r.value));

        // the copying property of where-provenance
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
            REQUIRE_OK(found);
        }

        // expression annotations recompute their values
        auto h = [&](const Path& pi) { return path_lookup(p.env, pi); };
        for (const auto& node : occ<TermPtr>(e)) {
            if (node->ann->kind == ExprAnnotation::Kind::Bottom) continue;
            REQUIRE_OK(value_equal(eval_annotation_term(h, node->ann),
                                   erase<TermPtr>(node)));
        }

        // where-provenance is the erasure of expression-provenance
        auto w2 = map_annotations<WhereAnn>(
            e, [](const TermPtr& term) { return where_of_term(term); });
        REQUIRE_OK(ann_value_equal<WhereAnn>(w, w2));
    }
    return true;
}

// -- criterion 5 -------------------------------------------------------------

bool dependency_correctness() {
    tmlgen::Rng rng(1005);
    auto programs = tmlgen::corpus(1006, 400, 5);
    int checked = 0;
    for (const auto& p : programs) {
        if (checked >= 250) break;
        auto annotated = path_annotate(p.env);
        std::vector<Path> leaves;
        for (const auto& node : occ<PathAnn>(annotated))
            if (node->kind == AnnotatedValue<PathAnn>::Kind::Const &&
                node->lit.kind != Constant::Kind::Unit)
                leaves.push_back(*node->ann);
        if (leaves.empty()) continue;
        Path l = leaves[tmlgen::pick_int(rng, 0, leaves.size() - 1)];
        ValuePtr old = path_lookup(p.env, l);
        ValuePtr fresh = old->lit.kind == Constant::Kind::Int
                             ? v_int(tmlgen::pick_int(rng, 0, 3))
                             : v_bool(tmlgen::chance(rng, 0.5));
        std::function<ValuePtr(const ValuePtr&, std::size_t)> set_at;
        Path inner;
        inner.steps.assign(l.steps.begin() + 1, l.steps.end());
        set_at = [&](const ValuePtr& v, std::size_t i) -> ValuePtr {
            if (i == inner.steps.size()) return fresh;
            Value copy = *v;
            if (v->kind == Value::Kind::Pair &&
                inner.steps[i].kind == PathStep::Kind::Two)
                copy.b = set_at(v->b, i + 1);
            else
                copy.a = set_at(v->a, i + 1);
            return std::make_shared<Value>(std::move(copy));
        };
        Env env2;
        for (const auto& [n, v] : p.env.items())
            env2 = env2.extend(n, n == l.steps[0].var ? set_at(v, 0) : v);

        auto base = to_dep_annotations(annotated);
        auto base2 = to_dep_annotations(path_annotate(env2));
        REQUIRE_OK(eq_except_at(l, base, base2));
        EvalResult r1 = eval(p.env, p.expr);
        EvalResult r2;
        try {
            r2 = eval(env2, p.expr);
        } catch (const FuelExhausted&) {
            continue;
        }
        auto d1 = extract<DepAnn>(dep_structure(), r1.trace, base);
        auto d2 = extract<DepAnn>(dep_structure(), r2.trace, base2);
        REQUIRE_OK(eq_except_at(l, d1, d2));
        checked++;
    }
    REQUIRE_OK(checked >= 200);
    return true;
}

// -- criterion 6 -------------------------------------------------------------

bool pattern_lattice_laws() {
    std::vector<TypePtr> types = {
        t_int(), t_bool(), t_prod(t_int(), t_int()), t_sum(t_int(), t_bool()),
        t_prod(t_sum(t_unit(), t_int()), t_int()), t_list(t_int())};
    for (const TypePtr& ty : types) {
        auto values = enumerate_values(ty, {0, 1}, 2);
        auto patterns = tmlgen::enumerate_patterns(ty, {0, 1}, 2, true);
        std::size_t n = values.size();
        auto relation = [&](const PatternPtr& p) {
            std::vector<bool> m(n * n);
            for (std::size_t i = 0; i < n; i++)
                for (std::size_t j = 0; j < n; j++)
                    m[i * n + j] = matches_mod(p, values[i], values[j]);
            return m;
        };
        std::vector<std::vector<bool>> rels;
        for (const auto& p : patterns) rels.push_back(relation(p));
        std::vector<bool> dia = relation(p_diamond());

        for (std::size_t pi = 0; pi < patterns.size(); pi++) {
            const auto& p = patterns[pi];
            const auto& r = rels[pi];
            for (std::size_t i = 0; i < n; i++)
                for (std::size_t j = 0; j < n; j++) {
                    if (r[i * n + j]) {
                        REQUIRE_OK(r[j * n + i]);  // symmetry
                        REQUIRE_OK(pattern_leq_value(p, values[i]));  // eqat-and
                        REQUIRE_OK(pattern_leq_value(p, values[j]));
                        for (std::size_t k = 0; k < n; k++)
                            if (r[j * n + k]) REQUIRE_OK(r[i * n + k]);  // transitivity
                    }
                }
            for (std::size_t i = 0; i < n; i++)
                if (pattern_leq_value(p, values[i])) REQUIRE_OK(r[i * n + i]);
            // diamond substitution law
            std::vector<bool> got = relation(diamond_subst(p));
            for (std::size_t i = 0; i < n * n; i++)
                REQUIRE_OK(got[i] == (dia[i] && r[i]));
            // restriction law: v eq_p (every completion of v|p)
            for (std::size_t i = 0; i < n; i++) {
                if (!pattern_leq_value(p, values[i])) continue;
                PatternPtr restr = restrict_value(values[i], p);
                REQUIRE_OK(diamond_free(restr));
                for (std::size_t j = 0; j < n; j++)
                    if (pattern_leq_value(restr, values[j]))
                        REQUIRE_OK(matches_mod(p, values[i], values[j]));
            }
        }
        // join law
        for (std::size_t pi = 0; pi < patterns.size(); pi++)
            for (std::size_t qi = 0; qi < patterns.size(); qi++) {
                auto j = join(patterns[pi], patterns[qi]);
                if (!j) continue;
                std::vector<bool> got = relation(*j);
                for (std::size_t i = 0; i < n * n; i++)
                    REQUIRE_OK(got[i] == (rels[pi][i] && rels[qi][i]));
            }
    }
    return true;
}

// -- criterion 7 -------------------------------------------------------------

bool slicing_correctness();

// -- criterion 8 -------------------------------------------------------------

bool security_framework();

// -- criterion 9 -------------------------------------------------------------

bool full_disclosure();

// -- criterion 10 ------------------------------------------------------------

bool serialization_roundtrip() {
    tmlgen::Rng rng(1010);
    auto programs = tmlgen::corpus(1011, 500, 5);
    int count = 0;
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        std::string bytes = serialize_trace(r.trace);
        TracePtr back = deserialize_trace_node(bytes);
        REQUIRE_OK(trace_equal(back, r.trace));
        REQUIRE_OK(serialize_trace(back) == bytes);
        count++;

        PatternPtr pat = tmlgen::random_pattern_below(rng, r.value, 0.5);
        DisclosureResult d = disclosure_slice(pat, r.trace);
        std::string sb = serialize_trace(d.trace);
        REQUIRE_OK(serialize_trace(deserialize_trace_node(sb)) == sb);
        std::string eb = serialize_pattern_env(d.env);
        REQUIRE_OK(serialize_pattern_env(deserialize_pattern_env(eb)) == eb);
        count++;
    }
    REQUIRE_OK(count >= 1000);
    return true;
}


}  // namespace

namespace {

int count_apps_named(const TracePtr& t, const std::string& binder, bool complete_only) {
    if (!t) return 0;
    int n = 0;
    if (t->kind == Trace::Kind::App && t->kappa.fun->name == binder &&
        (!complete_only || trace_complete(t)))
        n = 1;
    for (const auto& k : t->kids) n += count_apps_named(k, binder, complete_only);
    return n;
}

bool slicing_correctness() {
    // the worked swap-pair example, backward and forward
    {
        TypeEnv tenv;
        tenv.items = {{"y", t_int()}, {"z", t_int()}};
        Env env;
        env = env.extend("y", v_int(7)).extend("z", v_int(1));
        Elaborated el = check_expr(tenv, parse_expr("let x = (y,z) in (snd x, fst x)"));
        EvalResult r = eval(env, el.expr);

        DisclosureResult d = disclosure_slice(p_pair(p_int(1), p_hole()), r.trace);
        REQUIRE_OK(d.trace->kind == Trace::Kind::Let);
        REQUIRE_OK(trace_equal(d.trace->kids[0], tr_pair(tr_hole(), tr_var("z"))));
        REQUIRE_OK(trace_equal(d.trace->kids[1], tr_pair(tr_snd(tr_var("x")), tr_hole())));
        REQUIRE_OK(pattern_env_equal(d.env, PatternEnv{}.set("z", p_int(1))));

        ObfuscationResult o = obf_view(PatternEnv{}.set("z", p_int(1)), env, r.trace,
                                       r.value);
        REQUIRE_OK(pattern_equal(o.value, p_pair(p_int(1), p_hole())));
        REQUIRE_OK(trace_equal(o.trace->kids[0], tr_pair(tr_hole(), tr_var("z"))));
        REQUIRE_OK(trace_equal(o.trace->kids[1],
                               tr_pair(tr_snd(tr_var("x")), tr_fst(tr_var("x")))));
    }

    // the four disclosure patterns of the map example
    {
        Session s;
        s.run_line("val y = 2");
        s.run_line("fun f (x:int) : int = if x = y then y else x+1");
        s.run_line("val xs = [1,2,3]");
        s.run_line("trace (map f xs)");
        const TraceDocument* doc = s.trace_entry("it");
        REQUIRE_OK(doc != nullptr);
        Env env = erase<PathAnn>(doc->env);

        Slice a = disc_view(parse_pattern("[_,_,_]"), env, doc->trace, doc->value);
        REQUIRE_OK(pattern_equal(a.env_part.get("f"), p_hole()));
        REQUIRE_OK(pattern_equal(a.env_part.get("y"), p_hole()));
        PatternPtr nil_seen = p_roll(p_inl(p_hole()));
        REQUIRE_OK(pattern_equal(
            a.env_part.get("xs"),
            p_roll(p_inr(p_pair(p_hole(), p_roll(p_inr(p_pair(p_hole(),
                p_roll(p_inr(p_pair(p_hole(), nil_seen)))))))))));
        REQUIRE_OK(count_apps_named(a.trace_part, "m", false) == 4);

        Slice b = disc_view(parse_pattern("[]"), env, doc->trace, doc->value);
        REQUIRE_OK(pattern_equal(b.env_part.get("xs"), p_roll(p_inr(p_hole()))));
        REQUIRE_OK(count_apps_named(b.trace_part, "m", false) == 1);

        Slice c = disc_view(parse_pattern("[2,_,_]"), env, doc->trace, doc->value);
        REQUIRE_OK(c.env_part.get("f")->kind == Pattern::Kind::Closure);
        REQUIRE_OK(pattern_equal(c.env_part.get("f")->env.get("y"), p_int(2)));
        REQUIRE_OK(count_apps_named(c.trace_part, "f", true) == 1);

        Slice w = disc_view(parse_pattern("[_,3,_]"), env, doc->trace, doc->value);
        REQUIRE_OK(pattern_equal(w.env_part.get("xs"), parse_pattern("_::2::_")));
        REQUIRE_OK(w.env_part.get("f")->kind == Pattern::Kind::Closure);
        REQUIRE_OK(pattern_equal(w.env_part.get("f")->env.get("y"), p_int(2)));
        REQUIRE_OK(count_apps_named(w.trace_part, "f", true) == 1);

        // the three obfuscation environments
        PatternEnv keep_all;
        for (const char* name : {"map", "f", "xs"})
            keep_all = keep_all.set(name, pattern_of_value(env.lookup(name)));

        // hide y (also inside f's captured environment)
        PatternEnv rho1 = keep_all;
        {
            PatternPtr fp = pattern_of_value(env.lookup("f"));
            PatternEnv fenv;
            for (const auto& [n, q] : fp->env.items)
                if (n != "y") fenv.items.emplace_back(n, q);
            rho1 = rho1.set("f", p_closure(fp->kappa, fenv));
        }
        ObfuscationResult o1 = obf_view(rho1, env, doc->trace, doc->value);
        REQUIRE_OK(pattern_equal(o1.value, parse_pattern("[_,_,_]")));
        REQUIRE_OK(count_apps_named(o1.trace, "f", false) == 3);
        REQUIRE_OK(count_apps_named(o1.trace, "f", true) == 0);
        REQUIRE_OK(count_apps_named(o1.trace, "m", false) == 4);

        // hide f entirely
        PatternEnv rho2 = keep_all.set("f", p_hole()).set("y", p_int(2));
        ObfuscationResult o2 = obf_view(rho2, env, doc->trace, doc->value);
        REQUIRE_OK(pattern_equal(o2.value, parse_pattern("[_,_,_]")));
        REQUIRE_OK(count_apps_named(o2.trace, "f", false) == 0);
        REQUIRE_OK(count_apps_named(o2.trace, "m", false) == 4);

        // hide everything of xs but its first cons
        PatternEnv rho3 = keep_all.set("xs", parse_pattern("_::_")).set("y", p_int(2));
        ObfuscationResult o3 = obf_view(rho3, env, doc->trace, doc->value);
        REQUIRE_OK(pattern_equal(o3.value, parse_pattern("_::_")));
        REQUIRE_OK(count_apps_named(o3.trace, "m", false) == 2);
        REQUIRE_OK(count_apps_named(o3.trace, "f", false) == 1);
        REQUIRE_OK(count_apps_named(o3.trace, "f", true) == 0);
    }

    // witness lemma by enumeration at depth <= 3
    {
        std::vector<TypePtr> types = {t_int(), t_prod(t_int(), t_int()),
                                      t_sum(t_int(), t_int()), t_list(t_int())};
        for (const TypePtr& ty : types) {
            auto values = enumerate_values(ty, {0, 1, 2}, 3);
            auto patterns = tmlgen::enumerate_patterns(ty, {0, 1, 2}, 3, false);
            for (const auto& v : values)
                for (const auto& p : patterns) {
                    if (pattern_leq_value(p, v)) continue;
                    PatternPtr wit = witness(p, v);
                    REQUIRE_OK(pattern_leq_value(wit, v));
                    for (const auto& v2 : values)
                        if (pattern_leq_value(wit, v2))
                            REQUIRE_OK(!pattern_leq_value(p, v2));
                }
        }
    }

    // implication-style disclosure property
    {
        tmlgen::Rng rng(1007);
        auto programs = tmlgen::corpus(1008, 120, 5);
        int live = 0;
        for (const auto& p : programs) {
            EvalResult r = eval(p.env, p.expr);
            PatternPtr pat = tmlgen::random_pattern_below(rng, r.value, 0.4);
            DisclosureResult d = disclosure_slice(pat, r.trace);
            Slice view{restrict_env(p.env, d.env), d.trace};
            for (int k = 0; k < 5; k++) {
                Env env2 = tmlgen::complete_pattern_env(rng, view.env_part, p.env);
                try {
                    ValuePtr v2 = replay(env2, r.trace);
                    REQUIRE_OK(matches_mod(pat, r.value, v2));
                    live++;
                } catch (const ReplayInconsistent&) {
                } catch (const FuelExhausted&) {
                }
            }
        }
        REQUIRE_OK(live > 150);
    }

    // obfuscation uniqueness, stability, and positive obfuscation by
    // enumeration over the base domain {0,1,2}
    {
        tmlgen::Rng rng(1009);
        int programs_checked = 0;
        int attempts = 0;
        while (programs_checked < 50 && attempts < 2000) {
            attempts++;
            tmlgen::GenCtx cx{rng, {}, 0};
            int nvars = 2;
            std::vector<std::pair<std::string, TypePtr>> fvt;
            for (int i = 0; i < nvars; i++) {
                std::string name = "g" + std::to_string(i);
                TypePtr ty = tmlgen::chance(rng, 0.5)
                                 ? t_int()
                                 : t_prod(t_int(), t_int());
                cx.env = cx.env.extend(name, ty);
                fvt.emplace_back(name, ty);
            }
            ExprPtr e = tmlgen::gen_expr(cx, tmlgen::gen_type(rng, 1), 4);
            std::vector<TmlTriple> universe;
            try {
                universe = enumerate_triples(e, {0, 1, 2}, fvt, 50000);
            } catch (const FuelExhausted&) {
                continue;
            }
            if (universe.empty()) continue;

            // rho: punch holes into a reference environment's pattern
            const TmlTriple& ref = universe[tmlgen::pick_int(rng, 0, universe.size() - 1)];
            PatternEnv rho;
            bool has_hole = false;
            for (const auto& [n, v] : ref.env.items()) {
                PatternPtr q = tmlgen::random_pattern_below(rng, v, 0.6);
                has_hole |= !pattern_equal(q, pattern_of_value(v));
                rho = rho.set(n, q);
            }
            if (!has_hole) continue;
            // rho' strictly above rho: restore the reference values
            PatternEnv rho_hi;
            for (const auto& [n, v] : ref.env.items())
                rho_hi = rho_hi.set(n, pattern_of_value(v));

            std::vector<TmlTriple> admissible;
            for (const auto& t : universe)
                if (pattern_env_leq(rho, t.env)) admissible.push_back(t);
            if (admissible.size() < 2) continue;

            // uniqueness and stability across the admissible universe
            ObfuscationResult first = obfuscation_slice(rho, admissible[0].trace);
            for (const auto& t : admissible) {
                ObfuscationResult o = obfuscation_slice(rho, t.trace);
                REQUIRE_OK(pattern_leq_value(o.value, t.value));
                REQUIRE_OK(trace_leq(o.trace, t.trace));
                REQUIRE_OK(pattern_equal(o.value, first.value));
                REQUIRE_OK(trace_equal(o.trace, first.trace));
            }

            // positive obfuscation of IN_{rho'}
            ProvView<TmlTriple, ObfuscationResult> view{
                [&](const TmlTriple& t) { return obfuscation_slice(rho, t.trace); },
                [](const ObfuscationResult& a, const ObfuscationResult& b) {
                    return pattern_equal(a.value, b.value) &&
                           trace_equal(a.trace, b.trace);
                }};
            bool some_positive = false;
            for (const auto& t : admissible) some_positive |= in_query(rho_hi)(t);
            if (!some_positive) continue;
            REQUIRE_OK(check_positive_obfuscation(admissible, view, in_query(rho_hi)));
            programs_checked++;
        }
        REQUIRE_OK(programs_checked >= 50);
    }
    return true;
}

bool security_framework() {
    auto nonempty = string_universe(1, 6);
    auto with_empty8 = string_universe(0, 8);
    auto with_empty6 = string_universe(0, 6);

    auto view = [](std::string (*f)(const std::string&)) {
        return ProvView<std::string, std::string>{
            f, [](const std::string& a, const std::string& b) { return a == b; }};
    };
    auto count_of = [](const std::string& s, char c) {
        int n = 0;
        for (char x : s) n += x == c;
        return n;
    };
    TraceQuery<std::string> even_b = [&](const std::string& s) {
        return count_of(s, 'b') % 2 == 0;
    };
    auto t1 = view(+[](const std::string& s) { return std::string(s.size(), 'a'); });
    auto t2 = view(+[](const std::string& s) {
        std::string out;
        for (char c : s)
            if (c != 'a') out += c;
        return out;
    });
    auto t3 = view(+[](const std::string& s) {
        std::string out;
        for (std::size_t i = 1; i < s.size(); i += 2) out += s[i];
        return out;
    });

    // "obfuscated by T1, disclosed by T2"
    REQUIRE_OK(check_obfuscation(nonempty, t1, even_b));
    REQUIRE_OK(!check_disclosure(nonempty, t1, even_b));
    REQUIRE_OK(check_disclosure(nonempty, t2, even_b));
    REQUIRE_OK(!check_obfuscation(nonempty, t2, even_b));

    // delete-alternates positively but not negatively discloses no-abab
    TraceQuery<std::string> no_abab = [](const std::string& s) {
        return s.find("abab") == std::string::npos;
    };
    ProvQuery<std::string> no_aa_bb = [](const std::string& s) {
        return s.find("aa") == std::string::npos && s.find("bb") == std::string::npos;
    };
    REQUIRE_OK(check_positive_disclosure(with_empty8, t3, no_abab, no_aa_bb));
    REQUIRE_OK(!check_negative_disclosure(with_empty8, t3, no_abab, no_aa_bb));

    // a-to-b positively but not negatively obfuscates odd-#a
    TraceQuery<std::string> odd_a = [&](const std::string& s) {
        return count_of(s, 'a') % 2 == 1;
    };
    auto to_b = view(+[](const std::string& s) { return std::string(s.size(), 'b'); });
    REQUIRE_OK(check_positive_obfuscation(with_empty6, to_b, odd_a));
    REQUIRE_OK(!check_negative_obfuscation(with_empty6, to_b, odd_a));

    // the positive + negative implication on 1000 random finite instances
    tmlgen::Rng rng(1012);
    int both_disc = 0, both_obf = 0;
    for (int i = 0; i < 1000; i++) {
        int n = static_cast<int>(tmlgen::pick_int(rng, 1, 10));
        int m = static_cast<int>(tmlgen::pick_int(rng, 1, 4));
        std::vector<int> universe(n);
        for (int k = 0; k < n; k++) universe[k] = k;
        std::vector<int> view_of(n);
        std::vector<bool> q_of(n);
        for (int k = 0; k < n; k++) {
            view_of[k] = static_cast<int>(tmlgen::pick_int(rng, 0, m - 1));
            q_of[k] = tmlgen::chance(rng, 0.5);
        }
        std::vector<bool> pq_of(m);
        for (int k = 0; k < m; k++) pq_of[k] = tmlgen::chance(rng, 0.5);
        ProvView<int, int> pv{[&](const int& t) { return view_of[t]; },
                              [](const int& a, const int& b) { return a == b; }};
        TraceQuery<int> q = [&](const int& t) { return q_of[t]; };
        ProvQuery<int> pq = [&](const int& o) { return pq_of[o]; };
        if (check_positive_disclosure(universe, pv, q, pq) &&
            check_negative_disclosure(universe, pv, q, pq)) {
            REQUIRE_OK(check_disclosure(universe, pv, q));
            both_disc++;
        }
        if (check_positive_obfuscation(universe, pv, q) &&
            check_negative_obfuscation(universe, pv, q)) {
            REQUIRE_OK(check_obfuscation(universe, pv, q));
            both_obf++;
        }
    }
    REQUIRE_OK(both_disc > 0);
    REQUIRE_OK(both_obf > 0);
    return true;
}

bool full_disclosure() {
    tmlgen::Rng rng(1013);
    int programs_checked = 0;
    int attempts = 0;
    while (programs_checked < 20 && attempts < 1000) {
        attempts++;
        tmlgen::GenCtx cx{rng, {}, 0};
        std::vector<std::pair<std::string, TypePtr>> fvt;
        for (int i = 0; i < 2; i++) {
            std::string name = "g" + std::to_string(i);
            TypePtr ty = tmlgen::chance(rng, 0.5) ? t_int() : t_prod(t_int(), t_int());
            cx.env = cx.env.extend(name, ty);
            fvt.emplace_back(name, ty);
        }
        ExprPtr e = tmlgen::gen_expr(cx, tmlgen::gen_type(rng, 1), 4);
        std::vector<TmlTriple> universe;
        try {
            universe = enumerate_triples(e, {0, 1, 2}, fvt, 50000);
        } catch (const FuelExhausted&) {
            continue;
        }
        if (universe.size() < 2) continue;

        PatternPtr p = tmlgen::random_pattern_below(
            rng, universe[tmlgen::pick_int(rng, 0, universe.size() - 1)].value, 0.4);
        if (!diamond_free(p)) continue;

        ProvView<TmlTriple, Slice> disc{[&](const TmlTriple& t) {
                                            return disc_view(p, t.env, t.trace, t.value);
                                        },
                                        [](const Slice& a, const Slice& b) {
                                            return slice_equal(a, b);
                                        }};
        REQUIRE_OK(check_disclosure(universe, disc, out_query(p)));
        programs_checked++;
    }
    REQUIRE_OK(programs_checked >= 20);
    return true;
}

}  // namespace

int main() {
    criterion(1, "golden session reproduction", golden_sessions);
    criterion(2, "factorial trace shape", factorial_shape);
    criterion(3, "trace theorem suites", theorem_suites);
    criterion(4, "extraction correctness", extraction_correctness);
    criterion(5, "dependency correctness", dependency_correctness);
    criterion(6, "pattern lattice laws", pattern_lattice_laws);
    criterion(7, "slicing correctness", slicing_correctness);
    criterion(8, "security framework", security_framework);
    criterion(9, "full disclosure of Disc_p", full_disclosure);
    criterion(10, "serialization round-trips", serialization_roundtrip);
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
