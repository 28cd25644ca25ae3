#include "ilcad/bundle.hpp"
#include "ilcad/corpus.hpp"
#include "ilcad/derive.hpp"
#include "ilcad/errors.hpp"
#include "ilcad/harness.hpp"
#include "ilcad/normalize.hpp"
#include "ilcad/power_series.hpp"
#include "ilcad/syntax.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kEvaluation = 3 };

using ilcad::Representation;
using ilcad::Term;

Representation rep_or_throw(const std::string& s) {
    auto r = ilcad::representation_from(s);
    if (!r) throw CLI::ValidationError("--rep", "unknown representation " + s);
    return *r;
}

Term normalized(const Term& t, std::size_t fuel) {
    auto report = ilcad::normalize(t, fuel);
    if (report.fuel_exhausted) {
        std::cerr << "warning: fuel exhausted after " << report.steps << " steps\n";
    }
    return report.result;
}

nlohmann::json to_json(const ilcad::DiagramReport& r) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : r.cases) {
        nlohmann::json j;
        j["name"] = c.name;
        j["input"] = c.input;
        j["point"] = c.point;
        j["corner_values"] = c.corner_values;
        j["oracle_values"] = c.oracle_values;
        j["max_deviation"] = c.max_deviation;
        j["finite_deviation"] = c.finite_deviation;
        j["oracle_deviation"] = c.oracle_deviation;
        j["order_independent"] = c.order_independent;
        j["errors"] = c.errors;
        j["pass"] = c.pass;
        cases.push_back(std::move(j));
    }
    return {{"cases", cases}, {"tolerance", r.tolerance}, {"pass", r.pass}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Forward-mode differentiation by incremental lambda-calculus transforms"};
    cli.require_subcommand(1);

    std::string expr, fexpr, xexpr, rep_name = "series", corner_name = "series-curried", corpus_path;
    std::size_t fuel = ilcad::kDefaultFuel, index = 0;
    bool do_normalize = false, json = false;
    double tol = ilcad::kExactTolerance;

    auto* eval = cli.add_subcommand("eval", "normalize a term and print it");
    eval->add_option("EXPR", expr)->required();
    eval->add_option("--fuel", fuel, "reduction step budget")->check(CLI::PositiveNumber);

    auto* derive = cli.add_subcommand("derive", "print the derivative transform of a term");
    derive->add_option("EXPR", expr)->required();
    derive->add_option("--rep", rep_name, "finite, series or dual")->check(CLI::IsMember({"finite", "series", "dual"}));
    derive->add_flag("--normalize", do_normalize, "normalize the result");

    auto* bundle = cli.add_subcommand("bundle", "print the bundled transform of a term");
    bundle->add_option("EXPR", expr)->required();
    bundle->add_option("--rep", rep_name, "series or dual")->check(CLI::IsMember({"series", "dual"}));
    bundle->add_flag("--normalize", do_normalize, "normalize the result");

    auto* coeff = cli.add_subcommand("coeff", "coefficient I of a series abstraction");
    coeff->add_option("I", index)->required();
    coeff->add_option("EXPR", expr)->required();
    coeff->add_option("--fuel", fuel)->check(CLI::PositiveNumber);

    auto* diff = cli.add_subcommand("diff", "derivative of FEXPR at XEXPR");
    diff->add_option("FEXPR", fexpr)->required();
    diff->add_option("XEXPR", xexpr)->required();
    std::vector<std::string> corner_names;
    for (const auto& c : ilcad::all_corners()) corner_names.push_back(c.name());
    diff->add_option("--corner", corner_name)->check(CLI::IsMember(corner_names));

    auto* check = cli.add_subcommand("check-diagram", "compare every corner and both oracles over a corpus");
    check->add_option("--corpus", corpus_path, "manifest file (default: built-in corpus)")->check(CLI::ExistingFile);
    check->add_option("--tol", tol, "tolerance for the exact corners")->check(CLI::PositiveNumber);
    check->add_flag("--json", json, "emit a JSON report");

    auto* probe = cli.add_subcommand("probe-confusion", "run the nested-derivative probes");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = cli.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    std::cout.precision(17);
    try {
        if (eval->parsed()) {
            std::cout << ilcad::print(normalized(ilcad::parse(expr), fuel)) << "\n";
        } else if (derive->parsed()) {
            Term t = ilcad::derive_open(ilcad::parse(expr), rep_or_throw(rep_name));
            std::cout << ilcad::print(do_normalize ? ilcad::normal_form(t) : t) << "\n";
        } else if (bundle->parsed()) {
            std::string r = bundle->count("--rep") ? rep_name : "dual";
            Term t = ilcad::bundle_open(ilcad::parse(expr), rep_or_throw(r));
            std::cout << ilcad::print(do_normalize ? ilcad::normal_form(t) : t) << "\n";
        } else if (coeff->parsed()) {
            Term body = ilcad::parse(expr);
            if (!body.is<ilcad::Lam>()) {
                std::cerr << "error: coeff needs a fn abstraction\n";
                return kUsage;
            }
            std::cout << ilcad::print(normalized(ilcad::coeff(index, body), fuel)) << "\n";
        } else if (diff->parsed()) {
            Term f = ilcad::parse(fexpr);
            double x = ilcad::evaluate_real(ilcad::parse(xexpr));
            std::cout << ilcad::format_number(ilcad::derivative_at(*ilcad::corner_from(corner_name), f, x)) << "\n";
        } else if (check->parsed()) {
            auto corpus = corpus_path.empty() ? ilcad::default_corpus() : ilcad::load_corpus(corpus_path);
            ilcad::DiagramOptions options;
            options.tolerance = tol;
            auto report = ilcad::check_diagram(corpus, options);
            if (json) {
                std::cout << to_json(report).dump(2) << "\n";
            } else {
                std::cout << ilcad::format_report(report);
            }
            return report.pass ? kOk : kCheckFailed;
        } else if (probe->parsed()) {
            bool all = true;
            for (const auto& p : ilcad::perturbation_probes()) {
                std::cout << (p.pass ? "PASS " : "FAIL ") << p.name << ": " << p.source << " expected "
                          << ilcad::format_number(p.expected);
                for (const auto& [corner, v] : p.corner_values) std::cout << " " << corner << "=" << ilcad::format_number(v);
                std::cout << "\n";
                for (const auto& e : p.errors) std::cout << "    error: " << e << "\n";
                all = all && p.pass;
            }
            return all ? kOk : kCheckFailed;
        }
    } catch (const ilcad::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kEvaluation;
    }
    return kOk;
}
