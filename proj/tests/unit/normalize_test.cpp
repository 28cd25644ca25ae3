#include "ilcad/errors.hpp"
#include "ilcad/normalize.hpp"
#include "ilcad/syntax.hpp"

#include <doctest.h>

#include <cmath>

using namespace ilcad;

namespace {
double value(const char* src) { return *lit_value(normal_form(parse(src))); }
}  // namespace

TEST_CASE("delta rules") {
    CHECK(value("1 + 2 * 3") == 7);
    CHECK(value("(10 - 4) / 3") == 2);
    CHECK(value("neg 2") == -2);
    CHECK(value("sin 0.5") == std::sin(0.5));
    CHECK(value("cos 0.5") == std::cos(0.5));
    CHECK(value("exp 1") == std::exp(1.0));
    CHECK(value("log 2") == std::log(2.0));
    CHECK(value("(+) 1 2") == 3);
}

TEST_CASE("domain errors carry the redex") {
    try {
        normal_form(parse("1 + 1 / 0"));
        FAIL("expected a reduction error");
    } catch (const ReductionError& e) {
        CHECK(print(e.redex()) == "1 / 0");
    }
    CHECK_THROWS_AS(normal_form(parse("log (neg 1)")), ReductionError);
    CHECK_THROWS_AS(normal_form(parse("log 0")), ReductionError);
}

TEST_CASE("beta under binders") {
    CHECK(print(normal_form(parse("fn y . (fn x . x + 1) y"))) == "fn y . y + 1");
    CHECK(print(normal_form(parse("(fn f . fn x . f (f x)) (fn z . z * 2) 3"))) == "12");
    // stuck on a variable, arguments still normalized
    CHECK(print(normal_form(parse("g ((fn x . x) 1) (1 + 1)"))) == "g 1 2");
}

TEST_CASE("normal order skips a divergent argument") {
    CHECK(value("(fn x . 5) ((fn w . w w) (fn w . w w))") == 5);
}

TEST_CASE("fuel") {
    auto r = normalize(parse("(fn w . w w) (fn w . w w)"), 50);
    CHECK(r.fuel_exhausted);
    CHECK(r.steps == 50);
    CHECK(print(r.result) == "(fn w . w w) (fn w . w w)");
    CHECK_THROWS_AS(normal_form(parse("(fn w . w w) (fn w . w w)"), 10), Error);
    CHECK_THROWS_AS(normalize(lit(1), 0), std::invalid_argument);

    auto ok = normalize(parse("(fn x . x) 1"));
    CHECK_FALSE(ok.fuel_exhausted);
    CHECK(ok.steps == 1);
}

TEST_CASE("partial fuel keeps the last intermediate term") {
    auto r = normalize(parse("(fn x . x + 1) ((fn y . y) 2)"), 1);
    CHECK(r.fuel_exhausted);
    CHECK(print(r.result) == "(fn y . y) 2 + 1");
}

TEST_CASE("single steps reach the same normal form") {
    Term t = parse("(fn f . fn x . f (f x)) (fn z . z * 2) 3");
    int n = 0;
    while (auto next = reduce_step(t)) {
        t = *next;
        ++n;
    }
    CHECK(print(t) == "12");
    CHECK(n > 0);
    CHECK_FALSE(reduce_step(lit(1)));
}

TEST_CASE("eval_prim") {
    double args[2] = {6, 3};
    CHECK(eval_prim(PrimOp::div, args) == 2);
    double zero[2] = {1, 0};
    CHECK_FALSE(eval_prim(PrimOp::div, zero));
    CHECK_FALSE(eval_prim(PrimOp::add, std::span<const double>(args, 1)));
}
