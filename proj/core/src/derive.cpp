#include "ilcad/derive.hpp"

#include "ilcad/errors.hpp"

namespace ilcad {

std::string_view to_string(Representation rep) noexcept {
    switch (rep) {
        case Representation::finite: return "finite";
        case Representation::series: return "series";
        case Representation::dual: return "dual";
    }
    return "?";
}

std::optional<Representation> representation_from(std::string_view text) noexcept {
    if (text == "finite") return Representation::finite;
    if (text == "series") return Representation::series;
    if (text == "dual") return Representation::dual;
    return std::nullopt;
}

Term change_expr(PrimOp op, Representation rep, const Term& x, const Term& dx, const Term& y, const Term& dy) {
    using enum PrimOp;
    switch (op) {
        case add: return binop(add, dx, dy);
        case sub: return binop(sub, dx, dy);
        case mul: return binop(add, binop(add, binop(mul, x, dy), binop(mul, dx, y)), binop(mul, dx, dy));
        case neg: return unop(neg, dx);
        default: break;
    }
    if (rep == Representation::dual) {
        switch (op) {
            case sin: return binop(mul, unop(cos, x), dx);
            case cos: return binop(mul, unop(neg, unop(sin, x)), dx);
            case exp: return binop(mul, unop(exp, x), dx);
            case log: return binop(div, dx, x);
            case div: return binop(div, binop(sub, binop(mul, dx, y), binop(mul, x, dy)), binop(mul, y, y));
            default: break;
        }
    } else {
        // Exact recomputation op(x + dx) - op(x); in the series representation
        // the primitive on a series argument expands through its Taylor recurrence.
        if (op == div) {
            return binop(sub, binop(div, binop(add, x, dx), binop(add, y, dy)), binop(div, x, y));
        }
        return binop(sub, unop(op, binop(add, x, dx)), unop(op, x));
    }
    throw UnsupportedError("no change rule for primitive " + std::string(prim_symbol(op)));
}

Term primitive_change(PrimOp op, Representation rep) {
    Name a("a"), da("da"), b("b"), db("db");
    if (arity(op) == 2) {
        Term body = change_expr(op, rep, var(a), var(da), var(b), var(db));
        return lam(a, lam(da, lam(b, lam(db, body))));
    }
    Term body = change_expr(op, rep, var(a), var(da), var(a), var(da));
    return lam(a, lam(da, body));
}

namespace {

class Deriver {
public:
    Deriver(Representation rep, NameSet used) : rep_(rep), used_(std::move(used)) {}

    Term go(const Term& t, const std::map<Name, Name>& env) {
        if (const auto* v = t.as<Var>()) {
            auto it = env.find(v->name);
            if (it == env.end()) throw ScopeError("derive: unbound variable " + v->name.str());
            return var(it->second);
        }
        if (const auto* l = t.as<Lam>()) {
            Name dx = change_name(l->param);
            auto inner = env;
            inner.insert_or_assign(l->param, dx);
            return lam(l->param, lam(dx, go(l->body, inner)));
        }
        if (const auto* a = t.as<App>()) return app(go(a->fun, env), a->arg, go(a->arg, env));
        if (t.is<Lit>()) return zero_change(rep_);
        if (const auto* p = t.as<Prim>()) return primitive_change(p->op, rep_);
        if (const auto* c = t.as<Construct>()) {
            std::vector<Term> args;
            args.reserve(c->args.size());
            for (const auto& e : c->args) args.push_back(go(e, env));
            return construct(c->cname, std::move(args));
        }
        // the series variable gets a zero change
        const auto& q = *t.as<Coeff>();
        const auto& abstraction = *q.body.as<Lam>();
        Name deps = change_name(abstraction.param);
        auto inner = env;
        inner.insert_or_assign(abstraction.param, deps);
        Term changed = app(lam(deps, go(abstraction.body, inner)), zero_change(rep_));
        return coeff(q.index, lam(abstraction.param, changed));
    }

    Name change_name(const Name& x) {
        Name n = fresh_name(Name(x.base() + "'"), used_);
        used_.insert(n);
        return n;
    }

private:
    Representation rep_;
    NameSet used_;
};

NameSet names_in_use(const Term& t, const DeriveEnv& env) {
    NameSet used = all_names(t);
    for (const auto& [k, v] : env.rename) {
        used.insert(k);
        used.insert(v);
    }
    return used;
}

}  // namespace

Term derive(const Term& t, const DeriveEnv& env) {
    Deriver d(env.representation, names_in_use(t, env));
    return d.go(t, env.rename);
}

Term derive_open(const Term& t, Representation rep, DeriveEnv* env_out) {
    DeriveEnv env;
    env.representation = rep;
    Deriver d(rep, all_names(t));
    for (const auto& v : free_vars(t)) env.rename.emplace(v, d.change_name(v));
    Term out = d.go(t, env.rename);
    if (env_out) *env_out = env;
    return out;
}

}  // namespace ilcad
