#include "ilcad/errors.hpp"
#include "ilcad/harness.hpp"
#include "ilcad/normalize.hpp"
#include "ilcad/syntax.hpp"

#include <doctest.h>

#include <cmath>

using namespace ilcad;

TEST_CASE("corners") {
    CHECK(all_corners().size() == 5);
    CHECK(corner_from("dual-bundled") == Corner{Representation::dual, Shape::bundled});
    CHECK_FALSE(corner_from("finite-bundled"));
    CHECK_FALSE(corner_from("finite-curried")->exact());
}

TEST_CASE("relative comparison") {
    CHECK(deviation(1e6, 1e6 + 1) == doctest::Approx(1e-6));
    CHECK(deviation(0, 1e-10) == 1e-10);
    CHECK(close(2, 2 + 1e-12, 1e-9));
    CHECK_FALSE(close(2, 2.1, 1e-9));
}

TEST_CASE("finite difference oracle") {
    CHECK(std::abs(finite_difference(parse("fn x . x * x"), 3, 1e-5) - 6) < 1e-8);
    CHECK(finite_difference(parse("fn x . 4"), 1.5, 1e-3) == 0);
    CHECK(std::abs(finite_difference(parse("sin"), 0, 1e-5) - 1) < 1e-9);
    CHECK_THROWS_AS(finite_difference(parse("sin"), 0, 0), std::invalid_argument);
}

TEST_CASE("symbolic oracle") {
    Name x("x");
    CHECK(print(symbolic_derivative(parse("x * x"), x)) == "x * 1 + 1 * x");
    CHECK(print(symbolic_derivative(parse("sin x"), x)) == "cos x * 1");
    CHECK(print(symbolic_derivative(parse("3"), x)) == "0");
    CHECK(*lit_value(normal_form(substitute(symbolic_derivative(parse("x / (1 + x)"), x), x, lit(1)))) == 0.25);
    CHECK_THROWS_AS(symbolic_derivative(parse("f x"), x), UnsupportedError);
    CHECK(symbolic_derivative_at(parse("fn y . (fn s . s (s y)) (fn z . z * z)"), 1.2) ==
          doctest::Approx(4 * std::pow(1.2, 3)).epsilon(1e-14));
}

TEST_CASE("derivative at every corner") {
    Term sq = parse("fn x . x * x");
    for (const auto& c : all_corners()) {
        double tol = c.exact() ? 1e-12 : 1e-4;
        CHECK(std::abs(derivative_at(c, sq, 3) - 6) <= tol);
    }
    CHECK(derivative_at({Representation::dual, Shape::bundled}, parse("sin"), 0) == 1);
    CHECK(derivative_at({Representation::finite, Shape::curried}, parse("fn x . x + x"), 5) == 2);
}

TEST_CASE("diagram on small corpora") {
    auto one = parse_corpus("sq | fn x . x * x | 3\nconst | fn x . 1 | 0\nsinsq | fn x . sin (x * x) | 2");
    DiagramReport r = check_diagram(one);
    CHECK(r.pass);
    for (const auto& [name, v] : r.cases[0].corner_values) {
        if (name != "finite-curried") CHECK(v == 6);
    }
    for (const auto& [name, v] : r.cases[1].corner_values) CHECK(v == 0);
    for (const auto& [name, v] : r.cases[2].corner_values) {
        if (name != "finite-curried") CHECK(v == doctest::Approx(4 * std::cos(4)).epsilon(1e-12));
    }
    CHECK(format_report(r).find("3/3 cases pass") != std::string::npos);
    CHECK_THROWS_AS(check_diagram({}), std::invalid_argument);

    DiagramOptions serial;
    serial.parallel = false;
    CHECK(check_diagram(one, serial).cases[2].max_deviation == r.cases[2].max_deviation);
}

TEST_CASE("failures are report entries") {
    auto bad = parse_corpus("neg_log | fn x . log x | -1\nopaque | fn x . g x | 1");
    DiagramReport r = check_diagram(bad);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.cases[0].pass);
    CHECK_FALSE(r.cases[0].errors.empty());
    CHECK_FALSE(r.cases[1].pass);
}

TEST_CASE("sharing one formal variable confuses the nested derivative") {
    // the inner series variable shadows the outer one, so x = 5 + e is read as part of the inner perturbation
    Term confused = parse("coeff 1 (fn e . (5 + e) * coeff 1 (fn e . (5 + e) + 3 + e))");
    CHECK(*lit_value(normal_form(confused)) == 2);
}

TEST_CASE("perturbation probes") {
    CHECK(perturbation_confusion_probe() == 1);
    auto probes = perturbation_probes();
    REQUIRE(probes.size() == 3);
    CHECK(probes[0].expected == 1);
    CHECK(probes[1].expected == 10);
    CHECK(probes[2].expected == 0);
    for (const auto& p : probes) {
        CHECK_MESSAGE(p.pass, p.name);
        CHECK(p.corner_values.size() == 4);
    }
}
