#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ilcad {

// A variable name. Tag 0 is the name as written in source; fresh variants
// minted by alpha-renaming carry larger tags and print as `base_tag`.
class Name {
public:
    Name() = default;
    explicit Name(std::string base, std::uint32_t tag = 0);

    const std::string& base() const noexcept { return base_; }
    std::uint32_t tag() const noexcept { return tag_; }
    std::string str() const;

    friend auto operator<=>(const Name&, const Name&) = default;
    friend bool operator==(const Name&, const Name&) = default;

    static bool valid_base(std::string_view base);

private:
    std::string base_;
    std::uint32_t tag_ = 0;
};

using NameSet = std::set<Name>;

enum class PrimOp { add, sub, mul, div, neg, sin, cos, exp, log };

int arity(PrimOp op) noexcept;
std::string_view prim_symbol(PrimOp op) noexcept;
std::optional<PrimOp> prim_from_keyword(std::string_view word) noexcept;

struct TermNode;

// Immutable, shared term. Copies are cheap and safe across threads.
class Term {
public:
    Term() = delete;
    explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

    const TermNode& node() const noexcept { return *node_; }
    const void* id() const noexcept { return node_.get(); }

    template <class T>
    const T* as() const noexcept;
    template <class T>
    bool is() const noexcept { return as<T>() != nullptr; }

private:
    std::shared_ptr<const TermNode> node_;
};

struct Var {
    Name name;
};
struct Lam {
    Name param;
    Term body;
};
struct App {
    Term fun;
    Term arg;
};
struct Lit {
    double value;
};
struct Prim {
    PrimOp op;
};
struct Construct {
    std::string cname;
    std::vector<Term> args;
};
// `coeff index (fn eps . ...)`; body is always a Lam binding the series variable.
struct Coeff {
    std::size_t index;
    Term body;
};

struct TermNode {
    std::variant<Var, Lam, App, Lit, Prim, Construct, Coeff> v;
};

template <class T>
const T* Term::as() const noexcept {
    return std::get_if<T>(&node_->v);
}

Term var(Name name);
Term var(std::string base);
Term lam(Name param, Term body);
Term app(Term fun, Term arg);
Term lit(double value);
Term prim(PrimOp op);
Term construct(std::string cname, std::vector<Term> args);
Term coeff(std::size_t index, Term lambda_body);

Term app(Term fun, Term a, Term b);
Term app(Term fun, Term a, Term b, Term c);
Term app(Term fun, Term a, Term b, Term c, Term d);
Term binop(PrimOp op, Term a, Term b);
Term unop(PrimOp op, Term a);

// Matches `op a b` with op a binary primitive.
std::optional<std::pair<Term, Term>> match_binop(const Term& t, PrimOp op);
std::optional<Term> match_unop(const Term& t, PrimOp op);
bool is_lit(const Term& t, double value);
std::optional<double> lit_value(const Term& t);

// Head and arguments of an application spine, `h a1 ... an`.
struct Spine {
    Term head;
    std::vector<Term> args;
};
Spine unwind(const Term& t);
Term rebuild(Term head, const std::vector<Term>& args, std::size_t from = 0);

NameSet free_vars(const Term& t);
bool occurs_free(const Name& x, const Term& t);
// Every name appearing in t, bound or free.
NameSet all_names(const Term& t);

Name fresh_name(const Name& base, const NameSet& avoid);

// Capture-avoiding t[x := s].
Term substitute(const Term& t, const Name& x, const Term& s);

bool alpha_equivalent(const Term& a, const Term& b);

std::size_t term_size(const Term& t);

}  // namespace ilcad
