#include "generators.hpp"
#include "ilcad/errors.hpp"
#include "ilcad/power_series.hpp"
#include "ilcad/syntax.hpp"

#include <doctest.h>

#include <cmath>

using namespace ilcad;

namespace {

const Name eps("eps");

double num(const Term& t) {
    auto v = lit_value(t);
    REQUIRE_MESSAGE(v, print(t));
    return *v;
}

double coeff_of(std::size_t i, const std::string& body) { return num(normal_form(parse("coeff " + std::to_string(i) + " (fn eps . " + body + ")"))); }

Term series_of(const std::vector<double>& c) {
    std::vector<Term> t;
    for (double v : c) t.push_back(lit(v));
    return series_term(t, eps);
}

// Taylor coefficients from closed-form derivatives.
double sin_taylor(double x, int k) {
    static const int sign[4] = {1, 1, -1, -1};
    double d = (k % 2 == 0 ? std::sin(x) : std::cos(x)) * sign[k % 4];
    return d / std::tgamma(k + 1.0);
}

}  // namespace

TEST_CASE("worked example") {
    CHECK(coeff_of(2, "0.1 + eps*(0.2 + eps*(0.3 + eps*(0.4 + eps*0.5)))") == 0.3);
    CHECK(coeff_of(0, "0.1 + eps*(0.2 + eps*(0.3 + eps*(0.4 + eps*0.5)))") == 0.1);
    CHECK(coeff_of(4, "0.1 + eps*(0.2 + eps*(0.3 + eps*(0.4 + eps*0.5)))") == 0.5);
    CHECK(coeff_of(9, "0.1 + eps*(0.2 + eps*(0.3 + eps*(0.4 + eps*0.5)))") == 0);
}

TEST_CASE("individual rules") {
    auto rule = [](std::size_t i, const char* body) {
        auto r = match_coeff_rule(i, eps, parse(body));
        REQUIRE(r);
        return r->rule;
    };
    CHECK(rule(0, "3") == CoeffRule::constant);
    CHECK(rule(2, "3") == CoeffRule::zero_pad);
    CHECK(rule(0, "1 + eps * 2") == CoeffRule::sum_head);
    CHECK(rule(1, "1 + eps * 2") == CoeffRule::sum_tail);
    CHECK(rule(0, "eps * 2") == CoeffRule::product_head);
    CHECK(rule(3, "eps * 2") == CoeffRule::product_tail);
    CHECK(rule(1, "Con:P (eps * 2) 3") == CoeffRule::constructor);
    CHECK(rule(1, "fn y . eps * y") == CoeffRule::lambda);
    CHECK_FALSE(match_coeff_rule(1, eps, parse("sin eps")));
    CHECK(to_string(CoeffRule::sum_tail) == "sum-tail");
}

TEST_CASE("coeff_step walks the spine") {
    Term q = parse("fn eps . 0.1 + eps*(0.2 + eps*0.3)");
    auto s1 = coeff_step({2, q});
    CHECK(s1.rule == CoeffRule::sum_tail);
    CHECK(print(s1.result) == "coeff 1 (fn eps . 0.2 + eps * 0.3)");
    const auto& c = *s1.result.as<Coeff>();
    auto s2 = coeff_step({c.index, c.body});
    CHECK(s2.rule == CoeffRule::sum_tail);
    const auto& c2 = *s2.result.as<Coeff>();
    auto s3 = coeff_step({c2.index, c2.body});
    CHECK(s3.rule == CoeffRule::constant);
    CHECK(num(s3.result) == 0.3);
    CHECK(coeff_step({1, parse("fn eps . (fn z . z) (eps * 4)")}).rule == CoeffRule::body_step);
    CHECK(coeff_step({1, parse("fn eps . sin eps")}).rule == CoeffRule::series_form);
    CHECK_THROWS_AS(coeff_step({1, lit(0)}), std::invalid_argument);
}

TEST_CASE("constructors and functions") {
    CHECK(print(normal_form(parse("coeff 1 (fn eps . Con:P (1 + eps * 2) (eps * 5))"))) == "Con:P 2 5");
    CHECK(print(normal_form(parse("coeff 1 (fn eps . fn y . y + eps * y)"))) == "fn y . y");
    CHECK(num(normal_form(parse("coeff 1 (fn eps . fn y . eps * y * 3) 2"))) == 6);
}

TEST_CASE("series of primitive applications") {
    for (double x : {-1.3, 0.0, 0.4, 2.0}) {
        for (int k = 0; k <= 5; ++k) {
            std::string b = "sin (" + format_number(x) + " + eps)";
            CHECK(coeff_of(static_cast<std::size_t>(k), b) == doctest::Approx(sin_taylor(x, k)).epsilon(1e-12));
            CHECK(coeff_of(static_cast<std::size_t>(k), "exp (" + format_number(x) + " + eps)") ==
                  doctest::Approx(std::exp(x) / std::tgamma(k + 1.0)).epsilon(1e-12));
        }
    }
    for (int k = 1; k <= 5; ++k) {
        double x = 1.7;
        double expect = (k % 2 ? 1.0 : -1.0) / (k * std::pow(x, k));
        CHECK(coeff_of(static_cast<std::size_t>(k), "log (1.7 + eps)") == doctest::Approx(expect).epsilon(1e-12));
        CHECK(coeff_of(static_cast<std::size_t>(k), "1 / (1.7 + eps)") ==
              doctest::Approx((k % 2 ? -1.0 : 1.0) / std::pow(x, k + 1)).epsilon(1e-12));
    }
    CHECK(coeff_of(2, "(1 + eps) * (1 + eps)") == 1);
    CHECK(coeff_of(1, "(2 + eps) * (3 - eps)") == 1);
    CHECK(coeff_of(2, "cos eps") == -0.5);
}

TEST_CASE("expansion failures") {
    CHECK_THROWS_AS(normal_form(parse("coeff 1 (fn eps . g eps)")), StuckCoeffError);
    CHECK_THROWS_AS(normal_form(parse("coeff 1 (fn eps . 1 / eps)")), DomainError);
    CHECK_THROWS_AS(expand_series(parse("log eps"), eps, 2), DomainError);
}

TEST_CASE("grammar") {
    CHECK(is_zps(parse("0"), eps));
    CHECK(is_zps(parse("eps * 2"), eps));
    CHECK(is_zps(parse("eps * (2 + eps * 3)"), eps));
    CHECK_FALSE(is_zps(parse("1 + eps * 2"), eps));
    CHECK(is_ps(parse("1 + eps * 2"), eps));
    CHECK_FALSE(is_ps(parse("eps + 1"), eps));
    CHECK(spine_depth(parse("eps * (2 + eps * 3)"), eps) == 2);
    CHECK(print(series_term({lit(0), lit(1), lit(0), lit(2)}, eps)) == "eps * (1 + eps * (0 + eps * 2))");
    CHECK(print(series_term({lit(0), lit(0)}, eps)) == "0");
}

TEST_CASE("series arithmetic is closed") {
    testing::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = testing::random_zps(rng, testing::uniform_int(rng, 0, 4));
        auto b = testing::random_zps(rng, testing::uniform_int(rng, 0, 4));
        Term s = series_add(series_of(a), series_of(b), eps);
        Term p = series_mul(series_of(a), series_of(b), eps, 6);
        CHECK(is_zps(s, eps));
        CHECK(is_zps(p, eps));
        for (std::size_t k = 0; k <= 6; ++k) {
            double sum = (k < a.size() ? a[k] : 0) + (k < b.size() ? b[k] : 0);
            double prod = 0;
            for (std::size_t i = 0; i <= k; ++i) {
                if (i < a.size() && k - i < b.size()) prod += a[i] * b[k - i];
            }
            CHECK(num(normal_form(coeff(k, lam(eps, s)))) == doctest::Approx(sum).epsilon(1e-14));
            CHECK(num(normal_form(coeff(k, lam(eps, p)))) == doctest::Approx(prod).epsilon(1e-14));
        }
        double x = testing::uniform(rng, 0.5, 2.0);
        for (PrimOp op : {PrimOp::sin, PrimOp::cos, PrimOp::exp, PrimOp::log, PrimOp::div}) {
            CHECK(is_zps(series_apply_analytic(op, x, series_of(a), eps, 4), eps));
        }
    }
    CHECK_THROWS_AS(series_mul(lit(0), lit(0), eps, 0), std::invalid_argument);
    CHECK_THROWS_AS(series_apply_analytic(PrimOp::add, 1, lit(0), eps, 2), std::invalid_argument);
}

TEST_CASE("analytic application matches the closed form") {
    Term unit = parse("eps * 1");
    Term s = series_apply_analytic(PrimOp::sin, 0.3, unit, eps, 5);
    for (int k = 1; k <= 5; ++k) {
        CHECK(num(normal_form(coeff(static_cast<std::size_t>(k), lam(eps, s)))) ==
              doctest::Approx(sin_taylor(0.3, k)).epsilon(1e-12));
    }
    CHECK(num(normal_form(coeff(0, lam(eps, s)))) == 0);
    // div is the reciprocal
    Term r = series_apply_analytic(PrimOp::div, 2.0, unit, eps, 2);
    CHECK(num(normal_form(coeff(1, lam(eps, r)))) == -0.25);
}

TEST_CASE("real-valued series") {
    RealField f;
    series::Coeffs<double> a{0.5, 1.0};
    auto e = series::exp(a, 4, f);
    for (int k = 0; k <= 4; ++k) CHECK(e[static_cast<std::size_t>(k)] == doctest::Approx(std::exp(0.5) / std::tgamma(k + 1.0)));
    CHECK_THROWS_AS(series::reciprocal(series::Coeffs<double>{0.0, 1.0}, 2, f), DomainError);
}

TEST_CASE("diff and taylor coefficients") {
    CHECK(num(diff(parse("fn x . x * x"), lit(3))) == 6);
    CHECK(num(diff(parse("sin"), lit(0))) == 1);
    CHECK(num(taylor_coefficient(parse("fn x . x * x * x"), lit(2), 2)) == 6);
    CHECK(num(taylor_coefficient(parse("fn x . x * x * x"), lit(2), 3)) == 1);
    CHECK(num(taylor_coefficient(parse("fn x . x * x * x"), lit(2), 4)) == 0);
    CHECK(num(taylor_coefficient(parse("fn x . x * x"), lit(1), 2)) == 1);
    CHECK(num(taylor_coefficient(parse("exp"), lit(0), 3)) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(num(taylor_coefficient(parse("sin"), lit(0.3), 0)) == 0);
    // a free variable acts as a constant
    CHECK(print(diff(parse("fn x . a * x"), lit(3))) == "a");
    Term t = diff_term(parse("fn x . x"), var("eps"));
    CHECK(t.as<Coeff>()->body.as<Lam>()->param != Name("eps"));
}
