#pragma once

#include "ilcad/derive.hpp"
#include "ilcad/normalize.hpp"
#include "ilcad/term.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ilcad {

// a + b eps with eps^2 = 0.
struct Dual {
    double primal = 0.0;
    double tangent = 0.0;

    friend Dual operator+(Dual a, Dual b) { return {a.primal + b.primal, a.tangent + b.tangent}; }
    friend Dual operator-(Dual a, Dual b) { return {a.primal - b.primal, a.tangent - b.tangent}; }
    friend Dual operator*(Dual a, Dual b) {
        return {a.primal * b.primal, a.primal * b.tangent + a.tangent * b.primal};
    }
    friend Dual operator-(Dual a) { return {-a.primal, -a.tangent}; }
    friend bool operator==(Dual, Dual) = default;
};

struct LiftedPrim {
    int arity;
    std::function<Dual(std::span<const Dual>)> apply;
};

// Dual-number version of a primitive. Throws DomainError for log at a <= 0
// and division by a zero primal.
LiftedPrim dual_lift(PrimOp op);

class Bundle;

struct NumBundle {
    double primal;
    // A tangent (dual) or a zero-constant series term (series).
    std::variant<double, Term> change;
};

struct FunBundle {
    std::function<Bundle(const Bundle&)> map;
    std::optional<Term> source;  // bundled term the map applies, when known
};

struct DataBundle {
    std::string cname;
    std::vector<Bundle> args;
};

// An F-typed value: F R = R x dR, F (a -> b) = F a -> F b, and bundling
// distributes over constructors.
class Bundle {
public:
    Bundle(NumBundle n) : v_(std::move(n)) {}
    Bundle(FunBundle f) : v_(std::move(f)) {}
    Bundle(DataBundle d) : v_(std::move(d)) {}

    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&v_);
    }

    Bundle operator()(const Bundle& arg) const;

private:
    std::variant<NumBundle, FunBundle, DataBundle> v_;
};

// fn k . k primal change
Term make_bundle(const Term& primal, const Term& change);

// Bundled primitive: takes and returns bundles, computing primal and change together.
Term bundled_prim(PrimOp op, Representation rep);

// The uncurried, bundled transform Dcb: Lit r becomes a bundle with zero
// change, primitives become bundled primitives, and variables, abstraction,
// application and constructors map homomorphically. Free variables must be
// listed in free_bundles (they range over bundles); otherwise ScopeError.
Term bundle_transform(const Term& t, Representation rep = Representation::dual, const NameSet& free_bundles = {});

// bundle_transform with every free variable taken as bundle-valued.
Term bundle_open(const Term& t, Representation rep = Representation::dual);

// Coefficient 1 of a series change.
double truncate(const Term& s, const Name& eps);

// Reads a normal-form bundled term back into a value.
Bundle read_bundle(const Term& normal_form, Representation rep);
Term reify(const Bundle& b);

// Derivative of f at x through the bundled transform: the first-order change
// of Dcb f (x, unit change), truncated in the series representation.
double diff_bundled(const Term& f, double x, Representation rep);

// Primal and first-order change of Dcb f at (x, unit change).
Dual bundled_first_order(const Term& f, double x, Representation rep);

// Direct F-typed evaluation of a closed term with dual numbers: each real is
// a Dual, each function a FunBundle, primitives use dual_lift.
Bundle evaluate_lifted(const Term& t);

}  // namespace ilcad
