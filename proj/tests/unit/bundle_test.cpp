#include "generators.hpp"
#include "ilcad/bundle.hpp"
#include "ilcad/errors.hpp"
#include "ilcad/harness.hpp"
#include "ilcad/syntax.hpp"

#include <doctest.h>

#include <cmath>

using namespace ilcad;

namespace {

Dual lifted(PrimOp op, Dual a, Dual b = {}) {
    Dual args[2] = {a, b};
    auto l = dual_lift(op);
    return l.apply(std::span<const Dual>(args, static_cast<std::size_t>(l.arity)));
}

NumBundle number(const Bundle& b) {
    const auto* n = b.as<NumBundle>();
    REQUIRE(n);
    return *n;
}

}  // namespace

TEST_CASE("dual arithmetic") {
    Dual a{2, 1}, b{3, -1};
    CHECK(a * b == Dual{6, 1});
    CHECK(a + b == Dual{5, 0});
    CHECK(a - b == Dual{-1, 2});
    CHECK(-a == Dual{-2, -1});
    CHECK(lifted(PrimOp::div, {1, 1}, {2, 0}) == Dual{0.5, 0.5});
    CHECK(lifted(PrimOp::sin, {0, 1}) == Dual{0, 1});
    CHECK(lifted(PrimOp::cos, {0, 1}).tangent == doctest::Approx(0.0));
    CHECK(lifted(PrimOp::exp, {0, 2}) == Dual{1, 2});
    CHECK(lifted(PrimOp::log, {1, 3}) == Dual{0, 3});
    CHECK_THROWS_AS(lifted(PrimOp::log, {0, 1}), DomainError);
    CHECK_THROWS_AS(lifted(PrimOp::div, {1, 1}, {0, 1}), DomainError);
    CHECK(dual_lift(PrimOp::neg).arity == 1);
}

TEST_CASE("bundled primitives") {
    Term b = app(bundled_prim(PrimOp::mul, Representation::dual), make_bundle(lit(2), lit(1)), make_bundle(lit(3), lit(0)));
    auto n = number(read_bundle(normal_form(b), Representation::dual));
    CHECK(n.primal == 6);
    CHECK(std::get<double>(n.change) == 3);
    Term s = app(bundled_prim(PrimOp::sin, Representation::dual), make_bundle(lit(0.5), lit(2)));
    auto m = number(read_bundle(normal_form(s), Representation::dual));
    CHECK(m.primal == std::sin(0.5));
    CHECK(std::get<double>(m.change) == 2 * std::cos(0.5));
    CHECK_THROWS_AS(bundled_prim(PrimOp::add, Representation::finite), std::invalid_argument);
}

TEST_CASE("transform") {
    CHECK(print(bundle_transform(parse("3"))) == "fn k . k 3 0");
    CHECK(print(bundle_transform(parse("fn x . x"))) == "fn x . x");
    CHECK(print(bundle_transform(parse("Con:P 1"))) == "Con:P (fn k . k 1 0)");
    CHECK_THROWS_AS(bundle_transform(parse("y")), ScopeError);
    CHECK(print(bundle_transform(parse("y"), Representation::dual, {Name("y")})) == "y");
    CHECK(print(bundle_open(parse("y z"))) == "y z");
}

TEST_CASE("readback") {
    Bundle b = read_bundle(parse("fn k . k 1 2"), Representation::dual);
    CHECK(std::get<double>(number(b).change) == 2);
    Bundle s = read_bundle(parse("fn k . k 1 (eps * 2)"), Representation::series);
    CHECK(print(std::get<Term>(number(s).change)) == "eps * 2");
    CHECK(print(reify(s)) == "fn k . k 1 (eps * 2)");
    Bundle d = read_bundle(parse("Con:P (fn k . k 1 0) (fn k . k 2 1)"), Representation::dual);
    REQUIRE(d.as<DataBundle>());
    CHECK(d.as<DataBundle>()->args.size() == 2);
    CHECK(print(reify(d)) == "Con:P (fn k . k 1 0) (fn k . k 2 1)");
    // a pair-shaped function with a non-numeric first component is a function bundle
    CHECK(read_bundle(parse("fn k . k y 0"), Representation::dual).as<FunBundle>());
    CHECK_THROWS_AS(read_bundle(parse("fn k . k 1 y"), Representation::dual), UnsupportedError);
    CHECK_THROWS_AS(read_bundle(parse("3"), Representation::dual), UnsupportedError);

    Bundle f = read_bundle(normal_form(bundle_transform(parse("fn x . x * x"))), Representation::dual);
    auto out = number(f(Bundle(NumBundle{3.0, 1.0})));
    CHECK(out.primal == 9);
    CHECK(std::get<double>(out.change) == 6);
    CHECK_THROWS_AS(Bundle(NumBundle{1.0, 0.0})(f), Error);
}

TEST_CASE("truncation") {
    Name eps("eps");
    CHECK(truncate(parse("eps * (2 + eps * 3)"), eps) == 2);
    CHECK(truncate(parse("0"), eps) == 0);
    CHECK_THROWS_AS(truncate(parse("g eps"), eps), Error);
}

TEST_CASE("bundled derivatives agree with lifted evaluation") {
    const char* sources[] = {
        "fn x . x * x", "fn x . sin (x * x)", "fn x . exp (sin x) / (2 + cos x)",
        "fn x . (fn f . fn g . fn y . f (g y)) sin exp x", "fn x . log (x * x + 1) - neg x",
    };
    testing::Rng rng(3);
    for (const char* s : sources) {
        Term f = parse(s);
        Bundle lf = evaluate_lifted(f);
        for (int i = 0; i < 10; ++i) {
            double x = testing::uniform(rng, -2, 2);
            auto n = number(lf(Bundle(NumBundle{x, 1.0})));
            double tangent = std::get<double>(n.change);
            CHECK(diff_bundled(f, x, Representation::dual) == doctest::Approx(tangent).epsilon(1e-12));
            CHECK(diff_bundled(f, x, Representation::series) == doctest::Approx(tangent).epsilon(1e-12));
            Dual a = bundled_first_order(f, x, Representation::series);
            CHECK(a.primal == doctest::Approx(n.primal).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(evaluate_lifted(parse("y")), ScopeError);
    CHECK_THROWS_AS(diff_bundled(parse("fn x . Con:P x"), 1, Representation::dual), UnsupportedError);
}

TEST_CASE("bundled church pair post-composes") {
    Term pair = parse("fn x . (fn a . fn b . fn k . k a b) (x * x) (sin x)");
    Term applied = normal_form(app(bundle_transform(pair), make_bundle(lit(1.1), lit(1))));
    Bundle p = read_bundle(applied, Representation::dual);
    REQUIRE(p.as<FunBundle>());
    Bundle fst = read_bundle(normal_form(bundle_transform(parse("fn p . fn q . p"))), Representation::dual);
    Bundle snd = read_bundle(normal_form(bundle_transform(parse("fn p . fn q . q"))), Representation::dual);
    CHECK(std::get<double>(number(p(fst)).change) == doctest::Approx(2.2).epsilon(1e-14));
    CHECK(std::get<double>(number(p(snd)).change) == doctest::Approx(std::cos(1.1)).epsilon(1e-14));
}
