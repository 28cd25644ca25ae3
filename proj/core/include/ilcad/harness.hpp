#pragma once

#include "ilcad/corpus.hpp"
#include "ilcad/derive.hpp"
#include "ilcad/term.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ilcad {

enum class Shape { curried, bundled };

struct Corner {
    Representation representation;
    Shape shape;

    std::string name() const;
    bool exact() const noexcept { return representation != Representation::finite; }
    friend bool operator==(const Corner&, const Corner&) = default;
};

// series-curried, dual-curried, series-bundled, dual-bundled, finite-curried.
const std::array<Corner, 5>& all_corners() noexcept;
std::optional<Corner> corner_from(std::string_view name) noexcept;

inline constexpr double kFiniteSlopeStep = 1e-6;
inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kFiniteCornerTolerance = 1e-4;
inline constexpr double kOracleTolerance = 1e-5;

// |a - b| / max(1, |a|, |b|)
double deviation(double a, double b) noexcept;
bool close(double a, double b, double tol) noexcept;

// Value of a closed real-valued term.
double evaluate_real(const Term& t);

// (f(x+h) - f(x-h)) / 2h by normalization. Throws std::invalid_argument for h <= 0.
double finite_difference(const Term& f, double x, double h = kFiniteDifferenceStep);

// Textbook derivative of a first-order body over Lit, Var, + - * /, neg, sin,
// cos, exp, log. Throws UnsupportedError on anything else.
Term symbolic_derivative(const Term& t, const Name& x);

// Symbolic oracle for a function term: f is applied to a fresh variable and
// normalized before differentiating the body.
double symbolic_derivative_at(const Term& f, double x);

double derivative_at(const Corner& corner, const Term& f, double x);

struct DiagramCase {
    std::string name;
    std::string input;
    double point = 0.0;
    std::map<std::string, double> corner_values;
    std::map<std::string, double> oracle_values;  // "symbolic", "finite-difference"
    double max_deviation = 0.0;                   // exact corners and the symbolic oracle
    double finite_deviation = 0.0;                // finite corner against the exact corners
    double oracle_deviation = 0.0;                // the two oracles against each other
    bool order_independent = true;
    std::vector<std::string> errors;
    bool pass = false;
};

struct DiagramReport {
    std::vector<DiagramCase> cases;
    double tolerance = kExactTolerance;
    bool pass = false;
};

struct DiagramOptions {
    double tolerance = kExactTolerance;
    double finite_tolerance = kFiniteCornerTolerance;
    double oracle_tolerance = kOracleTolerance;
    bool parallel = true;
};

DiagramCase check_case(const CorpusCase& c, const DiagramOptions& options = {});
DiagramReport check_diagram(const std::vector<CorpusCase>& corpus, const DiagramOptions& options = {});
std::string format_report(const DiagramReport& report);

struct ProbeResult {
    std::string name;
    std::string source;
    double expected;
    std::map<std::string, double> corner_values;
    std::vector<std::string> errors;
    bool pass;
};

// Nested derivative probes, each evaluated at every exact corner.
std::vector<ProbeResult> perturbation_probes();

// diff (fn x . x * diff (fn y . x + y) 3) 5 through the series corner; 1 when
// nested perturbations are kept apart.
double perturbation_confusion_probe();

}  // namespace ilcad
