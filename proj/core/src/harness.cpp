#include "ilcad/harness.hpp"

#include "ilcad/bundle.hpp"
#include "ilcad/errors.hpp"
#include "ilcad/normalize.hpp"
#include "ilcad/power_series.hpp"
#include "ilcad/syntax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <stdexcept>

namespace ilcad {

std::string Corner::name() const {
    return std::string(to_string(representation)) + (shape == Shape::curried ? "-curried" : "-bundled");
}

const std::array<Corner, 5>& all_corners() noexcept {
    static const std::array<Corner, 5> corners = {
        Corner{Representation::series, Shape::curried},
        Corner{Representation::dual, Shape::curried},
        Corner{Representation::series, Shape::bundled},
        Corner{Representation::dual, Shape::bundled},
        Corner{Representation::finite, Shape::curried},
    };
    return corners;
}

std::optional<Corner> corner_from(std::string_view name) noexcept {
    for (const auto& c : all_corners()) {
        if (c.name() == name) return c;
    }
    return std::nullopt;
}

double deviation(double a, double b) noexcept {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

bool close(double a, double b, double tol) noexcept { return deviation(a, b) <= tol; }

double evaluate_real(const Term& t) {
    Term r = normal_form(t);
    if (auto v = lit_value(r)) return *v;
    throw Error("expected a number, got " + print(r));
}

double finite_difference(const Term& f, double x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_difference needs h > 0");
    double hi = evaluate_real(app(f, lit(x + h)));
    double lo = evaluate_real(app(f, lit(x - h)));
    return (hi - lo) / (2.0 * h);
}

Term symbolic_derivative(const Term& t, const Name& x) {
    using enum PrimOp;
    if (t.is<Lit>()) return lit(0.0);
    if (const auto* v = t.as<Var>()) return lit(v->name == x ? 1.0 : 0.0);
    if (auto m = match_binop(t, add)) return binop(add, symbolic_derivative(m->first, x), symbolic_derivative(m->second, x));
    if (auto m = match_binop(t, sub)) return binop(sub, symbolic_derivative(m->first, x), symbolic_derivative(m->second, x));
    if (auto m = match_binop(t, mul)) {
        auto [a, b] = *m;
        return binop(add, binop(mul, a, symbolic_derivative(b, x)), binop(mul, symbolic_derivative(a, x), b));
    }
    if (auto m = match_binop(t, div)) {
        auto [a, b] = *m;
        Term top = binop(sub, binop(mul, symbolic_derivative(a, x), b), binop(mul, a, symbolic_derivative(b, x)));
        return binop(div, top, binop(mul, b, b));
    }
    if (auto a = match_unop(t, neg)) return unop(neg, symbolic_derivative(*a, x));
    if (auto a = match_unop(t, sin)) return binop(mul, unop(cos, *a), symbolic_derivative(*a, x));
    if (auto a = match_unop(t, cos)) return binop(mul, unop(neg, unop(sin, *a)), symbolic_derivative(*a, x));
    if (auto a = match_unop(t, exp)) return binop(mul, unop(exp, *a), symbolic_derivative(*a, x));
    if (auto a = match_unop(t, log)) return binop(div, symbolic_derivative(*a, x), *a);
    throw UnsupportedError("symbolic oracle does not handle " + print(t));
}

double symbolic_derivative_at(const Term& f, double x) {
    Name v = fresh_name(Name("x"), free_vars(f));
    Term body = normal_form(app(f, var(v)));
    Term d = symbolic_derivative(body, v);
    return evaluate_real(substitute(d, v, lit(x)));
}

double derivative_at(const Corner& corner, const Term& f, double x) {
    if (corner.shape == Shape::bundled) return diff_bundled(f, x, corner.representation);
    switch (corner.representation) {
        case Representation::series: return evaluate_real(diff(f, lit(x)));
        case Representation::dual: return evaluate_real(diff_term(f, lit(x), Representation::dual));
        case Representation::finite: {
            Term df = derive_open(f, Representation::finite);
            return evaluate_real(app(df, lit(x), lit(kFiniteSlopeStep))) / kFiniteSlopeStep;
        }
    }
    throw std::invalid_argument("unknown corner");
}

namespace {

double max_pairwise(const std::vector<double>& xs) {
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) worst = std::max(worst, deviation(xs[i], xs[j]));
    }
    return worst;
}

template <class F>
bool attempt(std::vector<std::string>& errors, const std::string& label, F&& f) {
    try {
        f();
        return true;
    } catch (const std::exception& e) {
        errors.push_back(label + ": " + e.what());
        return false;
    }
}

}  // namespace

DiagramCase check_case(const CorpusCase& c, const DiagramOptions& options) {
    DiagramCase out;
    out.name = c.name;
    out.input = c.function_source + " at " + c.point_source;
    attempt(out.errors, "point", [&] { out.point = evaluate_real(c.point); });
    if (!out.errors.empty()) return out;
    const double x = out.point;

    std::vector<double> exact;
    for (const auto& corner : all_corners()) {
        attempt(out.errors, corner.name(), [&] {
            double v = derivative_at(corner, c.function, x);
            out.corner_values[corner.name()] = v;
            if (corner.exact()) exact.push_back(v);
        });
    }

    std::optional<double> symbolic;
    try {
        symbolic = symbolic_derivative_at(c.function, x);
        out.oracle_values["symbolic"] = *symbolic;
        exact.push_back(*symbolic);
    } catch (const UnsupportedError&) {
        // checked by finite differences only
    } catch (const std::exception& e) {
        out.errors.push_back(std::string("symbolic: ") + e.what());
    }
    out.max_deviation = max_pairwise(exact);

    if (auto it = out.corner_values.find("finite-curried"); it != out.corner_values.end()) {
        for (double v : exact) out.finite_deviation = std::max(out.finite_deviation, deviation(it->second, v));
    }

    attempt(out.errors, "finite-difference", [&] {
        double fd = finite_difference(c.function, x);
        out.oracle_values["finite-difference"] = fd;
        if (symbolic) {
            out.oracle_deviation = deviation(fd, *symbolic);
        } else {
            for (double v : exact) out.oracle_deviation = std::max(out.oracle_deviation, deviation(fd, v));
        }
    });

    attempt(out.errors, "order", [&] {
        Dual via_series = bundled_first_order(c.function, x, Representation::series);
        Dual via_dual = bundled_first_order(c.function, x, Representation::dual);
        out.order_independent = close(via_series.primal, via_dual.primal, options.tolerance) &&
                                close(via_series.tangent, via_dual.tangent, options.tolerance);
    });

    out.pass = out.errors.empty() && out.max_deviation <= options.tolerance &&
               out.finite_deviation <= options.finite_tolerance && out.oracle_deviation <= options.oracle_tolerance &&
               out.order_independent;
    return out;
}

DiagramReport check_diagram(const std::vector<CorpusCase>& corpus, const DiagramOptions& options) {
    if (corpus.empty()) throw std::invalid_argument("check_diagram needs a nonempty corpus");
    DiagramReport report;
    report.tolerance = options.tolerance;
    if (options.parallel) {
        std::vector<std::future<DiagramCase>> jobs;
        jobs.reserve(corpus.size());
        for (const auto& c : corpus) jobs.push_back(std::async(std::launch::async, [&c, &options] { return check_case(c, options); }));
        for (auto& j : jobs) report.cases.push_back(j.get());
    } else {
        for (const auto& c : corpus) report.cases.push_back(check_case(c, options));
    }
    report.pass = std::all_of(report.cases.begin(), report.cases.end(), [](const DiagramCase& c) { return c.pass; });
    return report;
}

std::string format_report(const DiagramReport& report) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-14s %10s", "case", "x");
    out += buf;
    for (const auto& corner : all_corners()) {
        std::snprintf(buf, sizeof buf, " %16s", corner.name().c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof buf, " %16s %16s %10s  %s\n", "symbolic", "finite-diff", "max-dev", "result");
    out += buf;
    auto cell = [&](const std::map<std::string, double>& m, const std::string& key) {
        auto it = m.find(key);
        if (it == m.end()) return std::string(" ") + std::string(16 - 1, ' ') + "-";
        std::snprintf(buf, sizeof buf, " %16.10g", it->second);
        return std::string(buf);
    };
    for (const auto& c : report.cases) {
        std::snprintf(buf, sizeof buf, "%-14s %10.6g", c.name.c_str(), c.point);
        out += buf;
        for (const auto& corner : all_corners()) out += cell(c.corner_values, corner.name());
        out += cell(c.oracle_values, "symbolic");
        out += cell(c.oracle_values, "finite-difference");
        std::snprintf(buf, sizeof buf, " %10.3g  %s\n", c.max_deviation, c.pass ? "PASS" : "FAIL");
        out += buf;
        for (const auto& e : c.errors) out += "    error: " + e + "\n";
        if (!c.order_independent) out += "    bundled truncation order disagrees\n";
    }
    std::size_t passed = std::count_if(report.cases.begin(), report.cases.end(), [](const DiagramCase& c) { return c.pass; });
    std::snprintf(buf, sizeof buf, "%zu/%zu cases pass (tolerance %g)\n", passed, report.cases.size(), report.tolerance);
    out += buf;
    return out;
}

namespace {

struct ProbeSpec {
    const char* name;
    const char* function;
    double point;
    double expected;
};

constexpr ProbeSpec kProbes[] = {
    {"sum", "fn x . x * diff (fn y . x + y) 3", 5.0, 1.0},
    {"product", "fn x . x * diff (fn y . x * y) 7", 5.0, 10.0},
    {"identity", "fn x . diff (fn y . y) x", 5.0, 0.0},
};

}  // namespace

std::vector<ProbeResult> perturbation_probes() {
    std::vector<ProbeResult> out;
    for (const auto& p : kProbes) {
        ProbeResult r{p.name, std::string("diff (") + p.function + ") " + format_number(p.point), p.expected, {}, {}, true};
        Term f = parse(p.function);
        for (const auto& corner : all_corners()) {
            if (!corner.exact()) continue;
            attempt(r.errors, corner.name(), [&] { r.corner_values[corner.name()] = derivative_at(corner, f, p.point); });
        }
        r.pass = r.errors.empty() && std::all_of(r.corner_values.begin(), r.corner_values.end(), [&](const auto& kv) {
                     return std::abs(kv.second - p.expected) <= 1e-12;
                 });
        out.push_back(std::move(r));
    }
    return out;
}

double perturbation_confusion_probe() {
    return derivative_at({Representation::series, Shape::curried}, parse(kProbes[0].function), kProbes[0].point);
}

}  // namespace ilcad
