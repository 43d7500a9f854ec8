#include <doctest.h>

#include "gen.hpp"
#include "tml/parser.hpp"
#include "tml/replay.hpp"
#include "tml/typecheck.hpp"

using namespace tml;

static TypePtr type_of(const std::string& src) {
    return check_expr(TypeEnv{}, parse_expr(src)).type;
}

TEST_CASE("expression typing") {
    CHECK(type_equal(type_of("1 + 2"), t_int()));
    CHECK(type_equal(type_of("fun f(x:int):int. f x"), t_arrow(t_int(), t_int())));
    CHECK_THROWS_AS(type_of("fst 42"), TypeError);
}

TEST_CASE("value typing") {
    CHECK(type_equal(check_value(v_pair(v_int(1), v_bool(true))),
                     t_prod(t_int(), t_bool())));

    ExprPtr fn = check_expr(TypeEnv{}, parse_expr("fun f(x:int):int. x + 1")).expr;
    CodePointer kappa{fn, std::make_shared<TypeEnv>()};
    CHECK(type_equal(check_value(v_closure(kappa, Env{})), t_arrow(t_int(), t_int())));

    // inl at an ambiguous sum requires an annotation
    CHECK_THROWS_AS(check_value(v_inl(v_int(1))), TypeError);
    CHECK_THROWS_AS(type_of("inl 1"), TypeError);
    CHECK(type_equal(type_of("(inl 1 : int + bool)"), t_sum(t_int(), t_bool())));
}

TEST_CASE("trace typing") {
    Elaborated el = check_expr(TypeEnv{}, parse_expr("fst (1,2)"));
    EvalResult r = eval(Env{}, el.expr);
    CHECK(type_equal(check_trace(TypeEnv{}, r.trace), t_int()));

    Elaborated fact = check_expr(
        TypeEnv{}, parse_expr("let f = fun f(x:int):int. if x = 0 then 1 else "
                              "x*(f (x-1)) in f 4"));
    EvalResult rf = eval(Env{}, fact.expr);
    CHECK(type_equal(check_trace(TypeEnv{}, rf.trace), t_int()));

    // case trace whose scrutinee has non-sum type
    auto arms = std::make_shared<MatchArms>(
        MatchArms{"a", "b", e_var("a"), e_var("b"), false});
    TracePtr bad = tr_case_l(arms, tr_const(Constant::of_int(1)), "a", tr_var("a"));
    CHECK_THROWS_AS(check_trace(TypeEnv{}, bad), TypeError);
}

TEST_CASE("list literals synthesize from their head") {
    CHECK(type_equal(type_of("[1,2,3]"), t_list(t_int())));
    CHECK(type_equal(type_of("[(1,2)]"), t_list(t_prod(t_int(), t_int()))));
    // bare nil is ambiguous without context
    CHECK_THROWS_AS(type_of("[]"), TypeError);
    CHECK(type_equal(type_of("([] : int list)"), t_list(t_int())));
}

TEST_CASE("type safety of evaluation and replay on a corpus") {
    auto programs = tmlgen::corpus(7, 60, 5);
    for (const auto& p : programs) {
        EvalResult r = eval(p.env, p.expr);
        // red-safe
        CHECK(type_equal(check_value(r.value), p.type));
        CHECK(type_equal(check_trace(p.tenv, r.trace), p.type));
        // replay-safe
        ValuePtr v = replay(p.env, r.trace);
        CHECK(type_equal(check_value(v), p.type));
    }
}
