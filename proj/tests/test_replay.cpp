#include <doctest.h>

#include "gen.hpp"
#include "tml/parser.hpp"
#include "tml/replay.hpp"
#include "tml/typecheck.hpp"

using namespace tml;

namespace {

EvalResult run_with(const TypeEnv& tenv, const Env& env, const std::string& src) {
    Elaborated el = check_expr(tenv, parse_expr(src));
    return eval(env, el.expr);
}

}  // namespace

TEST_CASE("replay of a fresh trace reproduces the value") {
    auto programs = tmlgen::corpus(3, 50, 5);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        CHECK(value_equal(replay(p.env, r.trace), r.value));
        CHECK(is_consistent(p.env, r.trace));
    }
}

TEST_CASE("swap pair replays on a different environment") {
    TypeEnv tenv;
    tenv.items = {{"y", t_int()}, {"z", t_int()}};
    Env env;
    env = env.extend("y", v_int(2)).extend("z", v_int(3));
    EvalResult r = run_with(tenv, env, "let x = (y,z) in (snd x, fst x)");
    CHECK(value_equal(r.value, v_pair(v_int(3), v_int(2))));

    Env env2;
    env2 = env2.extend("z", v_int(1)).extend("y", v_int(7));
    CHECK(value_equal(replay(env2, r.trace), v_pair(v_int(1), v_int(7))));
}

TEST_CASE("control flow divergence is a descriptive error") {
    TypeEnv tenv;
    tenv.items = {{"x", t_int()}};
    Env env;
    env = env.extend("x", v_int(3));
    EvalResult r = run_with(tenv, env, "if x = 0 then 1 else x");
    // x = 3 took the else (inr) branch; x = 0 flips it
    Env env2;
    env2 = env2.extend("x", v_int(0));
    try {
        replay(env2, r.trace);
        FAIL("expected inconsistency");
    } catch (const ReplayInconsistent& e) {
        CHECK(std::string(e.what()).find("inr branch") != std::string::npos);
    }
    CHECK_FALSE(is_consistent(env2, r.trace));
    CHECK(is_consistent(env, r.trace));
}

TEST_CASE("untyped nonsense cannot replay") {
    TracePtr bad = tr_fst(tr_const(Constant::of_int(42)));
    CHECK_FALSE(is_consistent(Env{}, bad));
}

TEST_CASE("factorial trace breaks when a branch flips") {
    TypeEnv tenv;
    tenv.items = {{"n", t_int()}};
    Env env;
    env = env.extend("n", v_int(4));
    EvalResult r = run_with(
        tenv, env, "let f = fun f(x:int):int. if x = 0 then 1 else x*(f (x-1)) in f n");
    Env env2;
    env2 = env2.extend("n", v_int(2));  // fewer recursive calls than recorded
    CHECK_FALSE(is_consistent(env2, r.trace));
    CHECK(value_equal(replay(env, r.trace), v_int(24)));
}

TEST_CASE("replay is deterministic") {
    auto programs = tmlgen::corpus(13, 30, 5);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        CHECK(value_equal(replay(p.env, r.trace), replay(p.env, r.trace)));
    }
}

TEST_CASE("bodies are not checked against code pointers") {
    // replace the recorded body trace of a call with a same-result constant:
    // replay still succeeds, by design
    TypeEnv tenv;
    Env env;
    EvalResult r = run_with(tenv, env, "(fun f(x:int):int. x + 1) 4");
    REQUIRE(r.trace->kind == Trace::Kind::App);
    TracePtr mangled = tr_app(r.trace->kappa, r.trace->kids[0], r.trace->kids[1],
                              r.trace->name, r.trace->arg_name,
                              tr_const(Constant::of_int(99)));
    CHECK(value_equal(replay(env, mangled), v_int(99)));
}
