#include "ilcad/power_series.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace ilcad {

namespace {

bool is_var(const Term& t, const Name& x) {
    const auto* v = t.as<Var>();
    return v && v->name == x;
}

// eps * e
std::optional<Term> match_eps_product(const Term& t, const Name& eps) {
    auto m = match_binop(t, PrimOp::mul);
    if (m && is_var(m->first, eps)) return m->second;
    return std::nullopt;
}

class Expander {
public:
    Expander(Name eps, std::size_t order) : eps_(std::move(eps)), order_(order) {}

    series::Coeffs<Term> go(const Term& t) {
        if (auto it = memo_.find(t.id()); it != memo_.end()) return it->second;
        auto out = compute(t);
        if (out.size() > order_ + 1) out.erase(out.begin() + static_cast<std::ptrdiff_t>(order_ + 1), out.end());
        memo_.emplace(t.id(), out);
        keep_.push_back(t);
        return out;
    }

private:
    series::Coeffs<Term> compute(const Term& t) {
        if (!occurs_free(eps_, t)) return {t};
        if (is_var(t, eps_)) return {lit(0.0), lit(1.0)};
        for (PrimOp op : {PrimOp::add, PrimOp::sub, PrimOp::mul, PrimOp::div}) {
            auto m = match_binop(t, op);
            if (!m) continue;
            auto a = go(m->first);
            auto b = go(m->second);
            switch (op) {
                case PrimOp::add: return series::add(a, b, order_, field_);
                case PrimOp::sub: return series::sub(a, b, order_, field_);
                case PrimOp::mul: return series::mul(a, b, order_, field_);
                default: {
                    if (b.empty() || is_lit(b[0], 0.0)) {
                        throw DomainError("division by a series with zero constant term");
                    }
                    return series::mul(a, series::reciprocal(b, order_, field_), order_, field_);
                }
            }
        }
        for (PrimOp op : {PrimOp::neg, PrimOp::sin, PrimOp::cos, PrimOp::exp, PrimOp::log}) {
            auto m = match_unop(t, op);
            if (!m) continue;
            auto a = go(*m);
            return series::apply(op, a, order_, field_);
        }
        throw StuckCoeffError("coeff body is not a series in " + eps_.str() + ": unsupported shape", t);
    }

    Name eps_;
    std::size_t order_;
    TermField field_;
    std::unordered_map<const void*, series::Coeffs<Term>> memo_;
    std::vector<Term> keep_;  // pins memo keys
};

std::size_t eps_occurrences(const Term& t, const Name& eps) {
    if (is_var(t, eps)) return 1;
    if (const auto* a = t.as<App>()) return eps_occurrences(a->fun, eps) + eps_occurrences(a->arg, eps);
    if (const auto* l = t.as<Lam>()) return l->param == eps ? 0 : eps_occurrences(l->body, eps);
    return 0;
}

}  // namespace

std::string_view to_string(CoeffRule rule) noexcept {
    switch (rule) {
        case CoeffRule::constant: return "constant";
        case CoeffRule::sum_head: return "sum-head";
        case CoeffRule::product_head: return "product-head";
        case CoeffRule::sum_tail: return "sum-tail";
        case CoeffRule::product_tail: return "product-tail";
        case CoeffRule::zero_pad: return "zero-pad";
        case CoeffRule::constructor: return "constructor";
        case CoeffRule::lambda: return "lambda";
        case CoeffRule::series_form: return "series-form";
        case CoeffRule::body_step: return "body-step";
    }
    return "?";
}

std::optional<CoeffRewrite> match_coeff_rule(std::size_t index, const Name& eps, const Term& body) {
    if (!occurs_free(eps, body)) {
        if (index == 0) return CoeffRewrite{CoeffRule::constant, body};
        return CoeffRewrite{CoeffRule::zero_pad, lit(0.0)};
    }
    if (auto sum = match_binop(body, PrimOp::add)) {
        if (!occurs_free(eps, sum->first)) {
            if (auto tail = match_eps_product(sum->second, eps)) {
                if (index == 0) return CoeffRewrite{CoeffRule::sum_head, sum->first};
                return CoeffRewrite{CoeffRule::sum_tail, coeff(index - 1, lam(eps, *tail))};
            }
        }
    }
    if (auto tail = match_eps_product(body, eps)) {
        if (index == 0) return CoeffRewrite{CoeffRule::product_head, lit(0.0)};
        return CoeffRewrite{CoeffRule::product_tail, coeff(index - 1, lam(eps, *tail))};
    }
    if (const auto* c = body.as<Construct>()) {
        std::vector<Term> args;
        args.reserve(c->args.size());
        for (const auto& e : c->args) args.push_back(coeff(index, lam(eps, e)));
        return CoeffRewrite{CoeffRule::constructor, construct(c->cname, std::move(args))};
    }
    if (const auto* l = body.as<Lam>()) {
        // l->param != eps here, otherwise eps would not occur free.
        return CoeffRewrite{CoeffRule::lambda, lam(l->param, coeff(index, lam(eps, l->body)))};
    }
    return std::nullopt;
}

CoeffRewrite coeff_step(const CoeffQuery& q) {
    const auto* abstraction = q.series_abstraction.as<Lam>();
    if (!abstraction) throw std::invalid_argument("coeff query needs a fn abstraction");
    const Name& eps = abstraction->param;
    if (auto r = match_coeff_rule(q.index, eps, abstraction->body)) return *r;
    if (auto next = reduce_step(abstraction->body)) {
        return {CoeffRule::body_step, coeff(q.index, lam(eps, *next))};
    }
    return {CoeffRule::series_form, coeff(q.index, lam(eps, series_form(abstraction->body, eps, q.index)))};
}

std::vector<Term> expand_series(const Term& t, const Name& eps, std::size_t order) {
    return Expander(eps, order).go(t);
}

Term series_term(const std::vector<Term>& coefficients, const Name& eps) {
    std::size_t n = coefficients.size();
    while (n > 0 && is_lit(coefficients[n - 1], 0.0)) --n;
    if (n == 0) return lit(0.0);
    Term acc = coefficients[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
        Term tail = binop(PrimOp::mul, var(eps), acc);
        acc = (k == 0 && is_lit(coefficients[0], 0.0)) ? tail : binop(PrimOp::add, coefficients[k], tail);
    }
    return acc;
}

Term series_form(const Term& body, const Name& eps, std::size_t order) {
    return series_term(expand_series(body, eps, order), eps);
}

bool is_ps(const Term& t, const Name& eps) {
    if (!occurs_free(eps, t)) return true;
    auto sum = match_binop(t, PrimOp::add);
    return sum && !occurs_free(eps, sum->first) && is_zps(sum->second, eps);
}

bool is_zps(const Term& t, const Name& eps) {
    if (is_lit(t, 0.0)) return true;
    auto tail = match_eps_product(t, eps);
    return tail && is_ps(*tail, eps);
}

std::size_t spine_depth(const Term& t, const Name& eps) {
    if (auto tail = match_eps_product(t, eps)) return 1 + spine_depth(*tail, eps);
    if (auto sum = match_binop(t, PrimOp::add)) {
        if (auto tail = match_eps_product(sum->second, eps)) return 1 + spine_depth(*tail, eps);
    }
    return 0;
}

Term series_add(const Term& a, const Term& b, const Name& eps) {
    Term na = normal_form(a);
    Term nb = normal_form(b);
    std::size_t order = std::max(eps_occurrences(na, eps), eps_occurrences(nb, eps));
    TermField f;
    return series_term(series::add(expand_series(na, eps, order), expand_series(nb, eps, order), order, f), eps);
}

Term series_mul(const Term& a, const Term& b, const Name& eps, std::size_t order_limit) {
    if (order_limit < 1) throw std::invalid_argument("series_mul needs order_limit >= 1");
    Term na = normal_form(a);
    Term nb = normal_form(b);
    TermField f;
    return series_term(
        series::mul(expand_series(na, eps, order_limit), expand_series(nb, eps, order_limit), order_limit, f), eps);
}

Term series_apply_analytic(PrimOp op, double x, const Term& dx, const Name& eps, std::size_t order_limit) {
    switch (op) {
        case PrimOp::sin:
        case PrimOp::cos:
        case PrimOp::exp:
        case PrimOp::log:
        case PrimOp::div:
            break;
        default:
            throw std::invalid_argument("series_apply_analytic: not an analytic primitive");
    }
    auto a = expand_series(normal_form(dx), eps, order_limit);
    if (a.empty()) a.push_back(lit(0.0));
    if (!is_lit(a[0], 0.0)) throw std::invalid_argument("series_apply_analytic: change has a nonzero constant term");
    a[0] = lit(x);
    TermField f;
    auto out = series::apply(op, a, order_limit, f);
    out[0] = lit(0.0);
    return series_term(out, eps);
}

Term TermField::add(const Term& a, const Term& b) const {
    auto x = lit_value(a);
    auto y = lit_value(b);
    if (x && y) return lit(*x + *y);
    if (x && *x == 0.0) return b;
    if (y && *y == 0.0) return a;
    return binop(PrimOp::add, a, b);
}

Term TermField::sub(const Term& a, const Term& b) const {
    auto x = lit_value(a);
    auto y = lit_value(b);
    if (x && y) return lit(*x - *y);
    if (y && *y == 0.0) return a;
    return binop(PrimOp::sub, a, b);
}

Term TermField::mul(const Term& a, const Term& b) const {
    auto x = lit_value(a);
    auto y = lit_value(b);
    if (x && y) return lit(*x * *y);
    if ((x && *x == 0.0) || (y && *y == 0.0)) return lit(0.0);
    if (x && *x == 1.0) return b;
    if (y && *y == 1.0) return a;
    return binop(PrimOp::mul, a, b);
}

Term TermField::div(const Term& a, const Term& b) const {
    auto x = lit_value(a);
    auto y = lit_value(b);
    if (y && *y == 0.0) throw DomainError("series coefficient division by zero");
    if (x && y) return lit(*x / *y);
    if (y && *y == 1.0) return a;
    if (x && *x == 0.0) return lit(0.0);
    return binop(PrimOp::div, a, b);
}

Term TermField::neg(const Term& a) const {
    if (auto x = lit_value(a)) return lit(-*x);
    return unop(PrimOp::neg, a);
}

Term TermField::scale(const Term& a, double k) const {
    if (k == 1.0) return a;
    return mul(a, lit(k));
}

Term TermField::apply(PrimOp op, const Term& a) const {
    if (auto x = lit_value(a)) {
        double arg = *x;
        auto r = eval_prim(op, std::span<const double>(&arg, 1));
        if (!r) throw DomainError(std::string(prim_symbol(op)) + " outside its domain in a series coefficient");
        return lit(*r);
    }
    return unop(op, a);
}

double RealField::div(double a, double b) const {
    if (b == 0.0) throw DomainError("series coefficient division by zero");
    return a / b;
}

double RealField::apply(PrimOp op, double a) const {
    auto r = eval_prim(op, std::span<const double>(&a, 1));
    if (!r) throw DomainError(std::string(prim_symbol(op)) + " outside its domain");
    return *r;
}

Term diff_term(const Term& f, const Term& x, Representation rep, std::size_t index) {
    DeriveEnv env;
    Term df = derive_open(f, rep, &env);
    // Free variables of f are constants here: bind their changes to zero.
    for (const auto& [source, change] : env.rename) df = app(lam(change, df), zero_change(rep));
    NameSet avoid = free_vars(f);
    avoid.merge(free_vars(x));
    Name eps = fresh_name(Name("eps"), avoid);
    Term body = app(df, x, binop(PrimOp::mul, var(eps), lit(1.0)));
    return coeff(index, lam(eps, body));
}

Term diff(const Term& f, const Term& x, std::size_t fuel) { return normal_form(diff_term(f, x), fuel); }

Term taylor_coefficient(const Term& f, const Term& x, std::size_t i, std::size_t fuel) {
    return normal_form(diff_term(f, x, Representation::series, i), fuel);
}

}  // namespace ilcad
