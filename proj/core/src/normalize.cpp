#include "ilcad/normalize.hpp"

#include "ilcad/power_series.hpp"

#include <cmath>
#include <stdexcept>

namespace ilcad {

std::optional<double> eval_prim(PrimOp op, std::span<const double> args) noexcept {
    if (args.size() != static_cast<std::size_t>(arity(op))) return std::nullopt;
    double a = args[0];
    switch (op) {
        case PrimOp::add: return a + args[1];
        case PrimOp::sub: return a - args[1];
        case PrimOp::mul: return a * args[1];
        case PrimOp::div:
            if (args[1] == 0.0) return std::nullopt;
            return a / args[1];
        case PrimOp::neg: return -a;
        case PrimOp::sin: return std::sin(a);
        case PrimOp::cos: return std::cos(a);
        case PrimOp::exp: return std::exp(a);
        case PrimOp::log:
            if (!(a > 0.0)) return std::nullopt;
            return std::log(a);
    }
    return std::nullopt;
}

namespace {

// The delta rule for `op a1 .. an` with literal arguments.
Term delta(PrimOp op, const std::vector<Term>& args, const Term& redex) {
    double values[2] = {0.0, 0.0};
    for (int i = 0; i < arity(op); ++i) values[i] = *lit_value(args[i]);
    auto r = eval_prim(op, std::span<const double>(values, static_cast<std::size_t>(arity(op))));
    if (!r) {
        throw ReductionError(std::string(prim_symbol(op)) + " applied outside its domain", redex);
    }
    return lit(*r);
}

bool literal_prefix(const std::vector<Term>& args, int n) {
    for (int i = 0; i < n; ++i) {
        if (!args[i].is<Lit>()) return false;
    }
    return true;
}

// Recursive normal-order normalizer. Once fuel runs out every call returns
// its current term unchanged, so the caller rebuilds the last intermediate.
class Normalizer {
public:
    explicit Normalizer(std::size_t fuel) : fuel_(fuel) {}

    std::size_t steps() const noexcept { return steps_; }
    bool exhausted() const noexcept { return exhausted_; }

    Term nf(Term t) {
        for (;;) {
            if (exhausted_) return t;
            if (t.is<Var>() || t.is<Lit>() || t.is<Prim>()) return t;
            if (const auto* l = t.as<Lam>()) return lam(l->param, nf(l->body));
            if (const auto* c = t.as<Construct>()) {
                std::vector<Term> args;
                args.reserve(c->args.size());
                for (const auto& a : c->args) args.push_back(nf(a));
                return construct(c->cname, std::move(args));
            }
            if (t.is<Coeff>()) {
                t = resolve_coeff(t);
                continue;
            }
            auto [head, args] = unwind(t);
            if (const auto* l = head.as<Lam>()) {
                if (!tick()) return t;
                t = rebuild(substitute(l->body, l->param, args[0]), args, 1);
                continue;
            }
            if (head.is<Coeff>()) {
                t = rebuild(resolve_coeff(head), args);
                continue;
            }
            std::size_t i = 0;
            if (const auto* p = head.as<Prim>()) {
                int n = arity(p->op);
                if (args.size() >= static_cast<std::size_t>(n)) {
                    for (; i < static_cast<std::size_t>(n); ++i) args[i] = nf(args[i]);
                    if (exhausted_) return rebuild(head, args);
                    if (literal_prefix(args, n)) {
                        Term redex = rebuild(head, std::vector<Term>(args.begin(), args.begin() + n));
                        if (!tick()) return rebuild(head, args);
                        t = rebuild(delta(p->op, args, redex), args, static_cast<std::size_t>(n));
                        continue;
                    }
                }
            }
            for (; i < args.size(); ++i) args[i] = nf(args[i]);
            return rebuild(head, args);
        }
    }

private:
    bool tick() {
        if (steps_ >= fuel_) {
            exhausted_ = true;
            return false;
        }
        ++steps_;
        return true;
    }

    // Weak head reduction: beta at the head and coeff heads resolved.
    Term whnf(Term t) {
        for (;;) {
            if (exhausted_) return t;
            if (t.is<Coeff>()) {
                t = resolve_coeff(t);
                continue;
            }
            auto [head, args] = unwind(t);
            if (args.empty()) return t;
            if (const auto* l = head.as<Lam>()) {
                if (!tick()) return t;
                t = rebuild(substitute(l->body, l->param, args[0]), args, 1);
                continue;
            }
            if (head.is<Coeff>()) {
                t = rebuild(resolve_coeff(head), args);
                continue;
            }
            return t;
        }
    }

    // Reduce just enough of a coeff body to see whether it has the
    // r + eps * s or eps * s shape, leaving the tail unevaluated.
    Term expose(const Term& body) {
        Term b = whnf(body);
        if (exhausted_) return b;
        if (auto sum = match_binop(b, PrimOp::add)) {
            Term tail = whnf(sum->second);
            if (tail.id() != sum->second.id()) b = binop(PrimOp::add, sum->first, tail);
        } else if (auto prod = match_binop(b, PrimOp::mul)) {
            Term factor = whnf(prod->first);
            if (factor.id() != prod->first.id()) b = binop(PrimOp::mul, factor, prod->second);
        }
        return b;
    }

    // One coeff rewrite of the Coeff node t, reducing its body as needed.
    Term resolve_coeff(const Term& t) {
        const auto& q = *t.as<Coeff>();
        const auto& abstraction = *q.body.as<Lam>();
        const Name& eps = abstraction.param;
        auto fire = [&](const Term& body) -> std::optional<Term> {
            if (auto r = match_coeff_rule(q.index, eps, body)) {
                if (!tick()) return coeff(q.index, lam(eps, body));
                return r->result;
            }
            return std::nullopt;
        };
        if (auto r = fire(abstraction.body)) return *r;
        Term body = expose(abstraction.body);
        if (exhausted_) return coeff(q.index, lam(eps, body));
        if (auto r = fire(body)) return *r;
        body = nf(body);
        if (exhausted_) return coeff(q.index, lam(eps, body));
        if (auto r = fire(body)) return *r;
        Term spine = series_form(body, eps, q.index);
        if (!tick()) return coeff(q.index, lam(eps, body));
        return coeff(q.index, lam(eps, spine));
    }

    std::size_t fuel_;
    std::size_t steps_ = 0;
    bool exhausted_ = false;
};

}  // namespace

NormalizeReport normalize(const Term& t, std::size_t fuel) {
    if (fuel == 0) throw std::invalid_argument("normalize needs fuel > 0");
    Normalizer n(fuel);
    Term result = n.nf(t);
    return {result, n.steps(), n.exhausted()};
}

Term normal_form(const Term& t, std::size_t fuel) {
    auto report = normalize(t, fuel);
    if (report.fuel_exhausted) {
        throw Error("fuel exhausted after " + std::to_string(report.steps) + " steps");
    }
    return report.result;
}

std::optional<Term> reduce_step(const Term& t) {
    if (t.is<Var>() || t.is<Lit>() || t.is<Prim>()) return std::nullopt;
    if (const auto* l = t.as<Lam>()) {
        if (auto b = reduce_step(l->body)) return lam(l->param, *b);
        return std::nullopt;
    }
    if (const auto* c = t.as<Construct>()) {
        for (std::size_t i = 0; i < c->args.size(); ++i) {
            if (auto a = reduce_step(c->args[i])) {
                auto args = c->args;
                args[i] = *a;
                return construct(c->cname, std::move(args));
            }
        }
        return std::nullopt;
    }
    if (const auto* q = t.as<Coeff>()) return coeff_step({q->index, q->body}).result;
    auto [head, args] = unwind(t);
    if (const auto* l = head.as<Lam>()) return rebuild(substitute(l->body, l->param, args[0]), args, 1);
    if (head.is<Coeff>()) return rebuild(*reduce_step(head), args);
    if (const auto* p = head.as<Prim>()) {
        int n = arity(p->op);
        if (args.size() >= static_cast<std::size_t>(n) && literal_prefix(args, n)) {
            Term redex = rebuild(head, std::vector<Term>(args.begin(), args.begin() + n));
            return rebuild(delta(p->op, args, redex), args, static_cast<std::size_t>(n));
        }
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (auto a = reduce_step(args[i])) {
            args[i] = *a;
            return rebuild(head, args);
        }
    }
    return std::nullopt;
}

}  // namespace ilcad
