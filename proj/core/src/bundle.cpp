#include "ilcad/bundle.hpp"

#include "ilcad/errors.hpp"
#include "ilcad/power_series.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace ilcad {

LiftedPrim dual_lift(PrimOp op) {
    using enum PrimOp;
    switch (op) {
        case add: return {2, [](std::span<const Dual> d) { return d[0] + d[1]; }};
        case sub: return {2, [](std::span<const Dual> d) { return d[0] - d[1]; }};
        case mul: return {2, [](std::span<const Dual> d) { return d[0] * d[1]; }};
        case div:
            return {2, [](std::span<const Dual> d) {
                        auto [a, b] = d[0];
                        auto [c, e] = d[1];
                        if (c == 0.0) throw DomainError("dual division by zero");
                        return Dual{a / c, (b * c - a * e) / (c * c)};
                    }};
        case neg: return {1, [](std::span<const Dual> d) { return -d[0]; }};
        case sin:
            return {1, [](std::span<const Dual> d) {
                        return Dual{std::sin(d[0].primal), d[0].tangent * std::cos(d[0].primal)};
                    }};
        case cos:
            return {1, [](std::span<const Dual> d) {
                        return Dual{std::cos(d[0].primal), -d[0].tangent * std::sin(d[0].primal)};
                    }};
        case exp:
            return {1, [](std::span<const Dual> d) {
                        double e = std::exp(d[0].primal);
                        return Dual{e, d[0].tangent * e};
                    }};
        case log:
            return {1, [](std::span<const Dual> d) {
                        if (!(d[0].primal > 0.0)) throw DomainError("dual log of a non-positive primal");
                        return Dual{std::log(d[0].primal), d[0].tangent / d[0].primal};
                    }};
    }
    throw UnsupportedError("no dual rule for primitive");
}

Bundle Bundle::operator()(const Bundle& arg) const {
    const auto* f = as<FunBundle>();
    if (!f) throw Error("applying a bundle that is not a function");
    return f->map(arg);
}

Term make_bundle(const Term& primal, const Term& change) {
    NameSet avoid = free_vars(primal);
    avoid.merge(free_vars(change));
    Name k = fresh_name(Name("k"), avoid);
    return lam(k, app(var(k), primal, change));
}

namespace {

Term first_order_change(PrimOp op, const Term& x, const Term& dx, const Term& y, const Term& dy) {
    if (op == PrimOp::mul) return binop(PrimOp::add, binop(PrimOp::mul, x, dy), binop(PrimOp::mul, dx, y));
    return change_expr(op, Representation::dual, x, dx, y, dy);
}

void require_bundled_rep(Representation rep) {
    if (rep == Representation::finite) {
        throw std::invalid_argument("the bundled shape needs the series or dual representation");
    }
}

class Bundler {
public:
    explicit Bundler(Representation rep) : rep_(rep) {}

    Term go(const Term& t, const NameSet& scope) {
        if (const auto* v = t.as<Var>()) {
            if (!scope.contains(v->name)) throw ScopeError("bundle: unbound variable " + v->name.str());
            return t;
        }
        if (const auto* l = t.as<Lam>()) {
            NameSet inner = scope;
            inner.insert(l->param);
            return lam(l->param, go(l->body, inner));
        }
        if (const auto* a = t.as<App>()) return app(go(a->fun, scope), go(a->arg, scope));
        if (t.is<Lit>()) return make_bundle(t, zero_change(rep_));
        if (const auto* p = t.as<Prim>()) return bundled_prim(p->op, rep_);
        if (const auto* c = t.as<Construct>()) {
            std::vector<Term> args;
            args.reserve(c->args.size());
            for (const auto& e : c->args) args.push_back(go(e, scope));
            return construct(c->cname, std::move(args));
        }
        // Inside coeff the formal variable is a bundle with zero change; primal
        // and change are extracted coefficient-wise.
        const auto& q = *t.as<Coeff>();
        const auto& abstraction = *q.body.as<Lam>();
        const Name& eps = abstraction.param;
        NameSet inner = scope;
        inner.insert(eps);
        Term bundled_body = lam(eps, go(abstraction.body, inner));
        Term eps_bundle = make_bundle(var(eps), zero_change(rep_));
        Name p("p"), c("c");
        auto part = [&](const Name& pick) {
            Term projector = lam(p, lam(c, var(pick)));
            return coeff(q.index, lam(eps, app(app(bundled_body, eps_bundle), projector)));
        };
        return make_bundle(part(p), part(c));
    }

private:
    Representation rep_;
};

}  // namespace

Term bundled_prim(PrimOp op, Representation rep) {
    require_bundled_rep(rep);
    Name a("a"), b("b"), x("x"), dx("dx"), y("y"), dy("dy");
    auto change = [&](const Term& yv, const Term& dyv) {
        if (rep == Representation::dual) return first_order_change(op, var(x), var(dx), yv, dyv);
        return change_expr(op, rep, var(x), var(dx), yv, dyv);
    };
    if (arity(op) == 2) {
        Term out = make_bundle(binop(op, var(x), var(y)), change(var(y), var(dy)));
        Term inner = app(var(b), lam(y, lam(dy, out)));
        return lam(a, lam(b, app(var(a), lam(x, lam(dx, inner)))));
    }
    Term out = make_bundle(unop(op, var(x)), change(var(x), var(dx)));
    return lam(a, app(var(a), lam(x, lam(dx, out))));
}

Term bundle_transform(const Term& t, Representation rep, const NameSet& free_bundles) {
    require_bundled_rep(rep);
    return Bundler(rep).go(t, free_bundles);
}

Term bundle_open(const Term& t, Representation rep) { return bundle_transform(t, rep, free_vars(t)); }

double truncate(const Term& s, const Name& eps) {
    Term r = normal_form(coeff(1, lam(eps, s)));
    if (auto v = lit_value(r)) return *v;
    throw StuckCoeffError("truncate: first-order coefficient is not a number", r);
}

namespace {

// fn k . k p c with k fresh for p and c.
std::optional<std::pair<Term, Term>> match_bundle(const Term& t) {
    const auto* l = t.as<Lam>();
    if (!l) return std::nullopt;
    auto [head, args] = unwind(l->body);
    const auto* k = head.as<Var>();
    if (!k || k->name != l->param || args.size() != 2) return std::nullopt;
    if (occurs_free(l->param, args[0]) || occurs_free(l->param, args[1])) return std::nullopt;
    return std::pair{args[0], args[1]};
}

}  // namespace

Bundle read_bundle(const Term& nf, Representation rep) {
    auto parts = match_bundle(nf);
    if (parts && lit_value(parts->first)) {
        auto primal = lit_value(parts->first);
        if (rep == Representation::dual) {
            auto tangent = lit_value(parts->second);
            if (!tangent) throw UnsupportedError("dual bundle tangent is not a number");
            return NumBundle{*primal, *tangent};
        }
        return NumBundle{*primal, parts->second};
    }
    if (const auto* c = nf.as<Construct>()) {
        DataBundle d{c->cname, {}};
        for (const auto& a : c->args) d.args.push_back(read_bundle(a, rep));
        return d;
    }
    if (nf.is<Lam>()) {
        return FunBundle{[nf, rep](const Bundle& arg) { return read_bundle(normal_form(app(nf, reify(arg))), rep); },
                         nf};
    }
    throw UnsupportedError("term is not a bundle");
}

Term reify(const Bundle& b) {
    if (const auto* n = b.as<NumBundle>()) {
        if (const auto* t = std::get_if<double>(&n->change)) return make_bundle(lit(n->primal), lit(*t));
        return make_bundle(lit(n->primal), std::get<Term>(n->change));
    }
    if (const auto* f = b.as<FunBundle>()) {
        if (!f->source) throw UnsupportedError("function bundle has no term form");
        return *f->source;
    }
    const auto& d = *b.as<DataBundle>();
    std::vector<Term> args;
    for (const auto& a : d.args) args.push_back(reify(a));
    return construct(d.cname, std::move(args));
}

Dual bundled_first_order(const Term& f, double x, Representation rep) {
    require_bundled_rep(rep);
    if (rep == Representation::dual) {
        Term out = normal_form(app(bundle_open(f, rep), make_bundle(lit(x), lit(1.0))));
        Bundle b = read_bundle(out, rep);
        const auto* n = b.as<NumBundle>();
        if (!n) throw UnsupportedError("bundled derivative: result is not a real bundle");
        return {n->primal, std::get<double>(n->change)};
    }
    Name eps = fresh_name(Name("eps"), free_vars(f));
    Term unit = binop(PrimOp::mul, var(eps), lit(1.0));
    Term out = normal_form(app(bundle_open(f, rep), make_bundle(lit(x), unit)));
    Bundle b = read_bundle(out, rep);
    const auto* n = b.as<NumBundle>();
    if (!n) throw UnsupportedError("bundled derivative: result is not a real bundle");
    return {n->primal, truncate(std::get<Term>(n->change), eps)};
}

double diff_bundled(const Term& f, double x, Representation rep) { return bundled_first_order(f, x, rep).tangent; }

namespace {

struct Env {
    Name name;
    std::shared_ptr<const Bundle> value;
    std::shared_ptr<const Env> next;
};
using EnvPtr = std::shared_ptr<const Env>;

Dual as_dual(const Bundle& b) {
    const auto* n = b.as<NumBundle>();
    if (!n || !std::holds_alternative<double>(n->change)) throw Error("lifted evaluation: expected a real");
    return {n->primal, std::get<double>(n->change)};
}

Bundle from_dual(Dual d) { return NumBundle{d.primal, d.tangent}; }

Bundle eval_lifted(const Term& t, const EnvPtr& env) {
    if (const auto* v = t.as<Var>()) {
        for (const Env* e = env.get(); e; e = e->next.get()) {
            if (e->name == v->name) return *e->value;
        }
        throw ScopeError("lifted evaluation: unbound variable " + v->name.str());
    }
    if (const auto* l = t.as<Lam>()) {
        Name param = l->param;
        Term body = l->body;
        return FunBundle{[param, body, env](const Bundle& arg) {
                             auto e = std::make_shared<const Env>(Env{param, std::make_shared<const Bundle>(arg), env});
                             return eval_lifted(body, e);
                         },
                         std::nullopt};
    }
    if (const auto* a = t.as<App>()) {
        Bundle f = eval_lifted(a->fun, env);
        return f(eval_lifted(a->arg, env));
    }
    if (const auto* l = t.as<Lit>()) return NumBundle{l->value, 0.0};
    if (const auto* p = t.as<Prim>()) {
        auto lifted = dual_lift(p->op);
        if (lifted.arity == 1) {
            return FunBundle{[lifted](const Bundle& x) {
                                 Dual d = as_dual(x);
                                 return from_dual(lifted.apply(std::span<const Dual>(&d, 1)));
                             },
                             std::nullopt};
        }
        return FunBundle{[lifted](const Bundle& x) -> Bundle {
                             Dual dx = as_dual(x);
                             return FunBundle{[lifted, dx](const Bundle& y) {
                                                  Dual args[2] = {dx, as_dual(y)};
                                                  return from_dual(lifted.apply(args));
                                              },
                                              std::nullopt};
                         },
                         std::nullopt};
    }
    if (const auto* c = t.as<Construct>()) {
        DataBundle d{c->cname, {}};
        for (const auto& e : c->args) d.args.push_back(eval_lifted(e, env));
        return d;
    }
    throw UnsupportedError("lifted evaluation does not handle coeff");
}

}  // namespace

Bundle evaluate_lifted(const Term& t) { return eval_lifted(t, nullptr); }

}  // namespace ilcad
