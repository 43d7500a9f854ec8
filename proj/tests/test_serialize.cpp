#include <doctest.h>

#include "gen.hpp"
#include "tml/parser.hpp"
#include "tml/serialize.hpp"
#include "tml/session.hpp"
#include "tml/slicing.hpp"
#include "tml/typecheck.hpp"

using namespace tml;

TEST_CASE("traces round-trip byte-identically") {
    auto programs = tmlgen::corpus(83, 60, 5);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        std::string bytes = serialize_trace(r.trace);
        TracePtr back = deserialize_trace_node(bytes);
        CHECK(trace_equal(back, r.trace));
        CHECK(serialize_trace(back) == bytes);
    }
}

TEST_CASE("slices round-trip with their holes and diamonds") {
    tmlgen::Rng rng(89);
    auto programs = tmlgen::corpus(97, 40, 5);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        PatternPtr pat = tmlgen::random_pattern_below(rng, r.value, 0.5);
        DisclosureResult d = disclosure_slice(pat, r.trace);

        std::string tb = serialize_trace(d.trace);
        CHECK(serialize_trace(deserialize_trace_node(tb)) == tb);
        int holes_before = trace_count(d.trace, Trace::Kind::Hole);
        CHECK(trace_count(deserialize_trace_node(tb), Trace::Kind::Hole) == holes_before);

        std::string eb = serialize_pattern_env(d.env);
        PatternEnv env_back = deserialize_pattern_env(eb);
        CHECK(pattern_env_equal(env_back, d.env));
        CHECK(serialize_pattern_env(env_back) == eb);
    }
}

TEST_CASE("the factorial document round-trips") {
    Session s;
    s.run_line("val h = fun h(x:int):int. if x = 0 then 1 else x * (h (x-1))");
    s.run_line("trace (h 4)");
    const TraceDocument* doc = s.trace_entry("it");
    REQUIRE(doc);
    std::string bytes = serialize_document(*doc);
    TraceDocument back = deserialize_document(bytes);
    CHECK(serialize_document(back) == bytes);
    CHECK(trace_equal(back.trace, doc->trace));
    CHECK(value_equal(back.value, doc->value));
}

TEST_CASE("the swap-pair slice keeps its three holes") {
    TypeEnv tenv;
    tenv.items = {{"y", t_int()}, {"z", t_int()}};
    Env env;
    env = env.extend("y", v_int(7)).extend("z", v_int(1));
    Elaborated el = check_expr(tenv, parse_expr("let x = (y,z) in (snd x, fst x)"));
    EvalResult r = eval(env, el.expr);
    DisclosureResult d = disclosure_slice(p_pair(p_int(1), p_hole()), r.trace);
    REQUIRE(trace_count(d.trace, Trace::Kind::Hole) == 2);
    std::string bytes = serialize_trace(d.trace);
    CHECK(trace_count(deserialize_trace_node(bytes), Trace::Kind::Hole) == 2);
    CHECK(serialize_trace(deserialize_trace_node(bytes)) == bytes);
}

TEST_CASE("malformed input reports a byte offset") {
    Session s;
    s.run_line("trace (1 + 2)");
    std::string bytes = serialize_document(*s.trace_entry("it"));
    std::string truncated = bytes.substr(0, bytes.size() / 2);
    try {
        (void)deserialize_document(truncated);
        FAIL("expected malformed input");
    } catch (const MalformedDocument& e) {
        CHECK(e.offset <= truncated.size());
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("version mismatches are rejected") {
    CHECK_THROWS_AS(deserialize_document("tmltrace 2\n(tenv)"), MalformedDocument);
    CHECK_THROWS_AS(deserialize_document("bogus"), MalformedDocument);
}

TEST_CASE("annotated environments round-trip") {
    Session s;
    s.run_line("val y = 2@L");
    s.run_line("val xs = [1@L1,2@L2]");
    s.run_line("trace (y :: xs)");
    const TraceDocument* doc = s.trace_entry("it");
    REQUIRE(doc);
    std::string bytes = serialize_annotated_env(doc->env);
    auto back = deserialize_annotated_env(bytes);
    CHECK(serialize_annotated_env(back) == bytes);
    REQUIRE(back.find("y"));
    CHECK(back.lookup("y")->ann.has_value());
    CHECK(pretty_path(*back.lookup("y")->ann) == "L");
}
