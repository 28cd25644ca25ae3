#include "ilcad/term.hpp"

#include "ilcad/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <stdexcept>

namespace ilcad {

namespace {

constexpr std::array<std::string_view, 10> kKeywords = {"fn",  "coeff", "derive", "bundle", "diff",
                                                        "sin", "cos",   "exp",    "log",    "neg"};

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

Term make(auto&& alternative) {
    return Term(std::make_shared<const TermNode>(TermNode{std::forward<decltype(alternative)>(alternative)}));
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found)
    : Error([&] {
          std::string msg = std::to_string(line) + ":" + std::to_string(column) + ": syntax error: expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) {
              if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
              msg += expected[i];
          }
          msg += ", found " + found;
          return msg;
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Name::Name(std::string base, std::uint32_t tag) : base_(std::move(base)), tag_(tag) {
    if (!valid_base(base_)) throw std::invalid_argument("invalid name base '" + base_ + "'");
}

bool Name::valid_base(std::string_view base) {
    if (base.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(base[0])) || base[0] == '_')) return false;
    for (char c : base) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    }
    if (std::find(kKeywords.begin(), kKeywords.end(), base) != kKeywords.end()) return false;
    // `x_3` is reserved for tagged names.
    auto us = base.rfind('_');
    if (us != std::string_view::npos && us + 1 < base.size() && base[us + 1] != '0') {
        bool digits = std::all_of(base.begin() + us + 1, base.end(),
                                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        if (digits && us > 0) return false;
    }
    return true;
}

std::string Name::str() const {
    return tag_ == 0 ? base_ : base_ + "_" + std::to_string(tag_);
}

int arity(PrimOp op) noexcept {
    switch (op) {
        case PrimOp::add:
        case PrimOp::sub:
        case PrimOp::mul:
        case PrimOp::div:
            return 2;
        default:
            return 1;
    }
}

std::string_view prim_symbol(PrimOp op) noexcept {
    switch (op) {
        case PrimOp::add: return "+";
        case PrimOp::sub: return "-";
        case PrimOp::mul: return "*";
        case PrimOp::div: return "/";
        case PrimOp::neg: return "neg";
        case PrimOp::sin: return "sin";
        case PrimOp::cos: return "cos";
        case PrimOp::exp: return "exp";
        case PrimOp::log: return "log";
    }
    return "?";
}

std::optional<PrimOp> prim_from_keyword(std::string_view word) noexcept {
    if (word == "neg") return PrimOp::neg;
    if (word == "sin") return PrimOp::sin;
    if (word == "cos") return PrimOp::cos;
    if (word == "exp") return PrimOp::exp;
    if (word == "log") return PrimOp::log;
    return std::nullopt;
}

Term var(Name name) { return make(Var{std::move(name)}); }
Term var(std::string base) { return var(Name(std::move(base))); }
Term lam(Name param, Term body) { return make(Lam{std::move(param), std::move(body)}); }
Term app(Term fun, Term arg) { return make(App{std::move(fun), std::move(arg)}); }
Term lit(double value) { return make(Lit{value}); }
Term prim(PrimOp op) { return make(Prim{op}); }
Term construct(std::string cname, std::vector<Term> args) {
    return make(Construct{std::move(cname), std::move(args)});
}
Term coeff(std::size_t index, Term lambda_body) {
    if (!lambda_body.is<Lam>()) throw std::invalid_argument("coeff body must be a fn abstraction");
    return make(Coeff{index, std::move(lambda_body)});
}

Term app(Term fun, Term a, Term b) { return app(app(std::move(fun), std::move(a)), std::move(b)); }
Term app(Term fun, Term a, Term b, Term c) { return app(app(std::move(fun), std::move(a), std::move(b)), std::move(c)); }
Term app(Term fun, Term a, Term b, Term c, Term d) {
    return app(app(std::move(fun), std::move(a), std::move(b), std::move(c)), std::move(d));
}
Term binop(PrimOp op, Term a, Term b) { return app(prim(op), std::move(a), std::move(b)); }
Term unop(PrimOp op, Term a) { return app(prim(op), std::move(a)); }

std::optional<std::pair<Term, Term>> match_binop(const Term& t, PrimOp op) {
    const auto* outer = t.as<App>();
    if (!outer) return std::nullopt;
    const auto* inner = outer->fun.as<App>();
    if (!inner) return std::nullopt;
    const auto* p = inner->fun.as<Prim>();
    if (!p || p->op != op) return std::nullopt;
    return std::pair{inner->arg, outer->arg};
}

std::optional<Term> match_unop(const Term& t, PrimOp op) {
    const auto* a = t.as<App>();
    if (!a) return std::nullopt;
    const auto* p = a->fun.as<Prim>();
    if (!p || p->op != op) return std::nullopt;
    return a->arg;
}

bool is_lit(const Term& t, double value) {
    const auto* l = t.as<Lit>();
    return l && l->value == value;
}

std::optional<double> lit_value(const Term& t) {
    if (const auto* l = t.as<Lit>()) return l->value;
    return std::nullopt;
}

Spine unwind(const Term& t) {
    std::vector<Term> args;
    Term head = t;
    while (const auto* a = head.as<App>()) {
        args.push_back(a->arg);
        head = a->fun;
    }
    std::reverse(args.begin(), args.end());
    return {head, std::move(args)};
}

Term rebuild(Term head, const std::vector<Term>& args, std::size_t from) {
    for (std::size_t i = from; i < args.size(); ++i) head = app(std::move(head), args[i]);
    return head;
}

namespace {

void collect_free(const Term& t, std::multiset<Name>& bound, NameSet& out) {
    std::visit(overloaded{
                   [&](const Var& v) {
                       if (!bound.contains(v.name)) out.insert(v.name);
                   },
                   [&](const Lam& l) {
                       auto it = bound.insert(l.param);
                       collect_free(l.body, bound, out);
                       bound.erase(it);
                   },
                   [&](const App& a) {
                       collect_free(a.fun, bound, out);
                       collect_free(a.arg, bound, out);
                   },
                   [](const Lit&) {},
                   [](const Prim&) {},
                   [&](const Construct& c) {
                       for (const auto& arg : c.args) collect_free(arg, bound, out);
                   },
                   [&](const Coeff& c) { collect_free(c.body, bound, out); },
               },
               t.node().v);
}

bool occurs_free_impl(const Name& x, const Term& t) {
    return std::visit(overloaded{
                          [&](const Var& v) { return v.name == x; },
                          [&](const Lam& l) { return l.param != x && occurs_free_impl(x, l.body); },
                          [&](const App& a) { return occurs_free_impl(x, a.fun) || occurs_free_impl(x, a.arg); },
                          [](const Lit&) { return false; },
                          [](const Prim&) { return false; },
                          [&](const Construct& c) {
                              return std::any_of(c.args.begin(), c.args.end(),
                                                 [&](const Term& arg) { return occurs_free_impl(x, arg); });
                          },
                          [&](const Coeff& c) { return occurs_free_impl(x, c.body); },
                      },
                      t.node().v);
}

void collect_all(const Term& t, NameSet& out) {
    std::visit(overloaded{
                   [&](const Var& v) { out.insert(v.name); },
                   [&](const Lam& l) {
                       out.insert(l.param);
                       collect_all(l.body, out);
                   },
                   [&](const App& a) {
                       collect_all(a.fun, out);
                       collect_all(a.arg, out);
                   },
                   [](const Lit&) {},
                   [](const Prim&) {},
                   [&](const Construct& c) {
                       for (const auto& arg : c.args) collect_all(arg, out);
                   },
                   [&](const Coeff& c) { collect_all(c.body, out); },
               },
               t.node().v);
}

class Substituter {
public:
    Substituter(Name x, Term s) : x_(std::move(x)), s_(std::move(s)), s_free_(free_vars(s_)) {}

    Term run(const Term& t) { return go(t); }

private:
    Term go(const Term& t) {
        return std::visit(overloaded{
                              [&](const Var& v) { return v.name == x_ ? s_ : t; },
                              [&](const Lam& l) -> Term {
                                  if (l.param == x_) return t;
                                  if (!occurs_free(x_, l.body)) return t;
                                  if (s_free_.contains(l.param)) {
                                      NameSet avoid = s_free_;
                                      avoid.merge(free_vars(l.body));
                                      avoid.insert(x_);
                                      Name renamed = fresh_name(l.param, avoid);
                                      Term body = substitute(l.body, l.param, var(renamed));
                                      return lam(renamed, go(body));
                                  }
                                  return lam(l.param, go(l.body));
                              },
                              [&](const App& a) {
                                  Term f = go(a.fun);
                                  Term arg = go(a.arg);
                                  if (f.id() == a.fun.id() && arg.id() == a.arg.id()) return t;
                                  return app(std::move(f), std::move(arg));
                              },
                              [&](const Lit&) { return t; },
                              [&](const Prim&) { return t; },
                              [&](const Construct& c) {
                                  std::vector<Term> args;
                                  args.reserve(c.args.size());
                                  for (const auto& arg : c.args) args.push_back(go(arg));
                                  return construct(c.cname, std::move(args));
                              },
                              [&](const Coeff& c) { return coeff(c.index, go(c.body)); },
                          },
                          t.node().v);
    }

    Name x_;
    Term s_;
    NameSet s_free_;
};

bool alpha_impl(const Term& a, const Term& b, std::map<Name, std::vector<std::size_t>>& left,
                std::map<Name, std::vector<std::size_t>>& right, std::size_t depth) {
    if (a.node().v.index() != b.node().v.index()) return false;
    if (const auto* va = a.as<Var>()) {
        const auto& vb = *b.as<Var>();
        auto la = left.find(va->name);
        auto rb = right.find(vb.name);
        bool a_bound = la != left.end() && !la->second.empty();
        bool b_bound = rb != right.end() && !rb->second.empty();
        if (a_bound != b_bound) return false;
        if (!a_bound) return va->name == vb.name;
        return la->second.back() == rb->second.back();
    }
    if (const auto* la = a.as<Lam>()) {
        const auto& lb = *b.as<Lam>();
        left[la->param].push_back(depth);
        right[lb.param].push_back(depth);
        bool ok = alpha_impl(la->body, lb.body, left, right, depth + 1);
        left[la->param].pop_back();
        right[lb.param].pop_back();
        return ok;
    }
    if (const auto* aa = a.as<App>()) {
        const auto& ab = *b.as<App>();
        return alpha_impl(aa->fun, ab.fun, left, right, depth) && alpha_impl(aa->arg, ab.arg, left, right, depth);
    }
    if (const auto* l = a.as<Lit>()) return l->value == b.as<Lit>()->value;
    if (const auto* p = a.as<Prim>()) return p->op == b.as<Prim>()->op;
    if (const auto* ca = a.as<Construct>()) {
        const auto& cb = *b.as<Construct>();
        if (ca->cname != cb.cname || ca->args.size() != cb.args.size()) return false;
        for (std::size_t i = 0; i < ca->args.size(); ++i) {
            if (!alpha_impl(ca->args[i], cb.args[i], left, right, depth)) return false;
        }
        return true;
    }
    const auto& qa = *a.as<Coeff>();
    const auto& qb = *b.as<Coeff>();
    return qa.index == qb.index && alpha_impl(qa.body, qb.body, left, right, depth);
}

}  // namespace

NameSet free_vars(const Term& t) {
    NameSet out;
    std::multiset<Name> bound;
    collect_free(t, bound, out);
    return out;
}

bool occurs_free(const Name& x, const Term& t) { return occurs_free_impl(x, t); }

NameSet all_names(const Term& t) {
    NameSet out;
    collect_all(t, out);
    return out;
}

Name fresh_name(const Name& base, const NameSet& avoid) {
    bool any_same_base = false;
    std::uint32_t max_tag = 0;
    for (auto it = avoid.lower_bound(Name(base.base(), 0)); it != avoid.end() && it->base() == base.base(); ++it) {
        any_same_base = true;
        max_tag = std::max(max_tag, it->tag());
    }
    if (!any_same_base) return base;
    return Name(base.base(), max_tag + 1);
}

Term substitute(const Term& t, const Name& x, const Term& s) { return Substituter(x, s).run(t); }

bool alpha_equivalent(const Term& a, const Term& b) {
    std::map<Name, std::vector<std::size_t>> left;
    std::map<Name, std::vector<std::size_t>> right;
    return alpha_impl(a, b, left, right, 0);
}

std::size_t term_size(const Term& t) {
    return std::visit(overloaded{
                          [](const Var&) -> std::size_t { return 1; },
                          [](const Lam& l) { return 1 + term_size(l.body); },
                          [](const App& a) { return 1 + term_size(a.fun) + term_size(a.arg); },
                          [](const Lit&) -> std::size_t { return 1; },
                          [](const Prim&) -> std::size_t { return 1; },
                          [](const Construct& c) {
                              std::size_t n = 1;
                              for (const auto& arg : c.args) n += term_size(arg);
                              return n;
                          },
                          [](const Coeff& c) { return 1 + term_size(c.body); },
                      },
                      t.node().v);
}

}  // namespace ilcad
