#pragma once

#include "ilcad/term.hpp"

#include <map>
#include <optional>
#include <string_view>

namespace ilcad {

// How a change to a real is represented.
//   finite: an ordinary real difference, x + dx
//   series: a zero-constant power series in a formal variable
//   dual:   the same series taken modulo eps^2 (first-order change rules)
enum class Representation { finite, series, dual };

std::string_view to_string(Representation rep) noexcept;
std::optional<Representation> representation_from(std::string_view text) noexcept;

struct DeriveEnv {
    // Each variable in scope mapped to the variable holding its change.
    std::map<Name, Name> rename;
    Representation representation = Representation::series;
};

// The curried derivative transform: Dc t. Maps a function of type
// t1 -> ... -> u to one taking each argument followed by its change and
// returning the change of the result. Throws ScopeError on a free variable
// missing from env.rename.
Term derive(const Term& t, const DeriveEnv& env);

// derive with every free variable of t given a fresh change variable
// (f -> f', x -> x', ...). The chosen environment is written to env_out.
Term derive_open(const Term& t, Representation rep, DeriveEnv* env_out = nullptr);

// The change function of a primitive, curried as fn x . fn dx . [fn y . fn dy .] ...
Term primitive_change(PrimOp op, Representation rep);

// The body of primitive_change applied to the given operand terms. y and dy
// are ignored for unary primitives.
Term change_expr(PrimOp op, Representation rep, const Term& x, const Term& dx, const Term& y, const Term& dy);

inline Term zero_change(Representation) { return lit(0.0); }

// The update operator of the finite representation, x (+) dx.
inline double apply_change(double x, double dx) noexcept { return x + dx; }

}  // namespace ilcad
