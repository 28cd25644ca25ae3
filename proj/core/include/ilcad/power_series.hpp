#pragma once

#include "ilcad/derive.hpp"
#include "ilcad/errors.hpp"
#include "ilcad/normalize.hpp"
#include "ilcad/series_arith.hpp"
#include "ilcad/term.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace ilcad {

// A coeff query whose body cannot be brought into series form.
class StuckCoeffError : public Error {
public:
    StuckCoeffError(const std::string& what, Term body) : Error(what), body_(std::move(body)) {}
    const Term& body() const noexcept { return body_; }

private:
    Term body_;
};

struct CoeffQuery {
    std::size_t index;
    Term series_abstraction;  // fn eps . <series>
};

enum class CoeffRule {
    constant,           // coeff 0 (fn e . r)            ~> r
    sum_head,           // coeff 0 (fn e . r + e * s)    ~> r
    product_head,       // coeff 0 (fn e . e * s)        ~> 0
    sum_tail,           // coeff i (fn e . r + e * s)    ~> coeff (i-1) (fn e . s)
    product_tail,       // coeff i (fn e . e * s)        ~> coeff (i-1) (fn e . s)
    zero_pad,           // coeff i (fn e . r), i > 0     ~> 0
    constructor,        // distributes over C e1 ... en
    lambda,             // coeff i (fn e . fn x . s)     ~> fn x . coeff i (fn e . s)
    series_form,        // body rewritten into r + e * (...) spine form
    body_step,          // one reduction step inside the body
};

std::string_view to_string(CoeffRule rule) noexcept;

struct CoeffRewrite {
    CoeffRule rule;
    Term result;
};

// The syntactic rules, tried in order of head shape. nullopt if none fires.
std::optional<CoeffRewrite> match_coeff_rule(std::size_t index, const Name& eps, const Term& body);

// Exactly one rewrite of `coeff index abstraction`: a rule if one fires,
// else one step inside the body, else the series-form rewrite of a normal
// body. Throws StuckCoeffError when none applies.
CoeffRewrite coeff_step(const CoeffQuery& q);

// Coefficients 0..order of t read as a power series in eps. t must be in
// normal form; coefficients are eps-free terms (literals when t is closed
// apart from eps). Throws StuckCoeffError on non-arithmetic shapes and
// DomainError on log/reciprocal outside the domain.
std::vector<Term> expand_series(const Term& t, const Name& eps, std::size_t order);

// Spine term c0 + eps * (c1 + eps * (...)), zero-padded coefficients dropped.
// A zero constant coefficient gives the form eps * (...).
Term series_term(const std::vector<Term>& coefficients, const Name& eps);

// The series-form rewrite used when a normal coeff body matches no rule.
Term series_form(const Term& body, const Name& eps, std::size_t order);

// Grammar checks: zps ::= 0 | eps * ps ; ps ::= r | r + zps, r eps-free.
bool is_zps(const Term& t, const Name& eps);
bool is_ps(const Term& t, const Name& eps);

// Length of the syntactic spine (number of eps * levels).
std::size_t spine_depth(const Term& t, const Name& eps);

Term series_add(const Term& a, const Term& b, const Name& eps);
Term series_mul(const Term& a, const Term& b, const Name& eps, std::size_t order_limit);
// op(x + dx) - op(x) as a zero-constant series. op is sin, cos, exp, log, or
// div (meaning the reciprocal 1/x).
Term series_apply_analytic(PrimOp op, double x, const Term& dx, const Name& eps, std::size_t order_limit);

// Coefficient arithmetic over terms: literal operands fold, zero and one act
// as identities, anything else builds the primitive application.
struct TermField {
    Term zero() const { return lit(0.0); }
    Term one() const { return lit(1.0); }
    Term add(const Term& a, const Term& b) const;
    Term sub(const Term& a, const Term& b) const;
    Term mul(const Term& a, const Term& b) const;
    Term div(const Term& a, const Term& b) const;
    Term neg(const Term& a) const;
    Term scale(const Term& a, double k) const;
    Term apply(PrimOp op, const Term& a) const;
};

struct RealField {
    double zero() const { return 0.0; }
    double one() const { return 1.0; }
    double add(double a, double b) const { return a + b; }
    double sub(double a, double b) const { return a - b; }
    double mul(double a, double b) const { return a * b; }
    double div(double a, double b) const;
    double neg(double a) const { return -a; }
    double scale(double a, double k) const { return a * k; }
    double apply(PrimOp op, double a) const;
};

// coeff index (fn eps . Dc f x (eps * 1)) with eps fresh. Free variables of f
// are treated as real constants (zero change).
Term diff_term(const Term& f, const Term& x, Representation rep = Representation::series, std::size_t index = 1);

// Normal form of diff_term with index 1.
Term diff(const Term& f, const Term& x, std::size_t fuel = kDefaultFuel);

// Normal form of coeff i (fn eps . Dc f x (eps * 1)), i.e. f^(i)(x) / i! for i >= 1.
Term taylor_coefficient(const Term& f, const Term& x, std::size_t i, std::size_t fuel = kDefaultFuel);

}  // namespace ilcad
