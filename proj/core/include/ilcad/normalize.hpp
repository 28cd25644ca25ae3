#pragma once

#include "ilcad/errors.hpp"
#include "ilcad/term.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace ilcad {

inline constexpr std::size_t kDefaultFuel = 100000;

struct NormalizeReport {
    Term result;
    std::size_t steps = 0;
    // When set, `result` is the last intermediate term, not a normal form.
    bool fuel_exhausted = false;
};

// A primitive applied to literals outside its domain (x / 0, log of x <= 0).
class ReductionError : public Error {
public:
    ReductionError(const std::string& what, Term redex) : Error(what), redex_(std::move(redex)) {}
    const Term& redex() const noexcept { return redex_; }

private:
    Term redex_;
};

// Value of a primitive on real arguments; nullopt outside the domain.
std::optional<double> eval_prim(PrimOp op, std::span<const double> args) noexcept;

// Leftmost-outermost normalization with beta, delta (literal arguments only)
// and the coeff rules. Reduction goes under binders.
NormalizeReport normalize(const Term& t, std::size_t fuel = kDefaultFuel);

// Normal form or throw Error when fuel runs out.
Term normal_form(const Term& t, std::size_t fuel = kDefaultFuel);

// One leftmost-outermost rewrite; nullopt when t is normal.
std::optional<Term> reduce_step(const Term& t);

}  // namespace ilcad
