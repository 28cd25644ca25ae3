#include "ilcad/syntax.hpp"

#include "ilcad/bundle.hpp"
#include "ilcad/derive.hpp"
#include "ilcad/errors.hpp"
#include "ilcad/power_series.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <map>

namespace ilcad {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

namespace {

enum class Tok { ident, number, con, lparen, rparen, dot, plus, minus, star, slash, prim, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
    double number = 0.0;
    PrimOp op = PrimOp::add;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::end) return out;
        }
    }

private:
    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    [[noreturn]] void fail(std::string expected) {
        std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
        throw ParseError(line_, col_, {std::move(expected)}, found);
    }

    Token next() {
        Token t{Tok::end, "", line_, col_};
        if (pos_ >= src_.size()) return t;
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return number(t);
        if (ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
            t.text = std::string(src_.substr(start, pos_ - start));
            if (t.text == "Con" && pos_ < src_.size() && src_[pos_] == ':') {
                advance();
                std::size_t s = pos_;
                if (pos_ >= src_.size() || !ident_start(src_[pos_])) fail("constructor name");
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                    advance();
                }
                t.kind = Tok::con;
                t.text = std::string(src_.substr(s, pos_ - s));
                return t;
            }
            if (auto op = prim_from_keyword(t.text)) {
                t.kind = Tok::prim;
                t.op = *op;
                return t;
            }
            t.kind = Tok::ident;
            return t;
        }
        if (c == '(' && pos_ + 2 < src_.size() && src_[pos_ + 2] == ')') {
            char o = src_[pos_ + 1];
            std::optional<PrimOp> op;
            if (o == '+') op = PrimOp::add;
            if (o == '-') op = PrimOp::sub;
            if (o == '*') op = PrimOp::mul;
            if (o == '/') op = PrimOp::div;
            if (op) {
                for (int i = 0; i < 3; ++i) advance();
                t.kind = Tok::prim;
                t.op = *op;
                t.text = std::string("(") + o + ")";
                return t;
            }
        }
        advance();
        t.text = std::string(1, c);
        switch (c) {
            case '(': t.kind = Tok::lparen; return t;
            case ')': t.kind = Tok::rparen; return t;
            case '.': t.kind = Tok::dot; return t;
            case '+': t.kind = Tok::plus; return t;
            case '-': t.kind = Tok::minus; return t;
            case '*': t.kind = Tok::star; return t;
            case '/': t.kind = Tok::slash; return t;
            default: break;
        }
        throw ParseError(t.line, t.column, {"expression"}, "'" + t.text + "'");
    }

    Token number(Token t) {
        std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        };
        digits();
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            advance();
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
            if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
                while (pos_ < k) advance();
                digits();
            }
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (ec != std::errc()) throw ParseError(t.line, t.column, {"number in range"}, t.text);
        t.kind = Tok::number;
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

std::string describe(const Token& t) {
    if (t.kind == Tok::end) return "end of input";
    if (t.kind == Tok::con) return "'Con:" + t.text + "'";
    return "'" + t.text + "'";
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Term parse_all() {
        Term t = expr();
        if (peek().kind != Tok::end) fail({"operator", "argument", "end of input"});
        return t;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    bool keyword(std::string_view word) const { return peek().kind == Tok::ident && peek().text == word; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        throw ParseError(t.line, t.column, std::move(expected), describe(t));
    }

    Name name_of(const Token& t) const {
        const std::string& s = t.text;
        auto us = s.rfind('_');
        if (us != std::string::npos && us > 0 && us + 1 < s.size() && s[us + 1] != '0') {
            std::uint32_t tag = 0;
            auto [p, ec] = std::from_chars(s.data() + us + 1, s.data() + s.size(), tag);
            std::string base = s.substr(0, us);
            if (ec == std::errc() && p == s.data() + s.size() && Name::valid_base(base)) return Name(base, tag);
        }
        if (!Name::valid_base(s)) throw ParseError(t.line, t.column, {"identifier"}, describe(t));
        return Name(s);
    }

    Term expr() {
        if (keyword("fn")) {
            take();
            if (peek().kind != Tok::ident || is_reserved(peek().text)) fail({"identifier"});
            Name x = name_of(take());
            if (peek().kind != Tok::dot) fail({"'.'"});
            take();
            return lam(x, expr());
        }
        return sum();
    }

    Term sum() {
        Term t = product();
        for (;;) {
            if (peek().kind == Tok::plus) {
                take();
                t = binop(PrimOp::add, t, product());
            } else if (peek().kind == Tok::minus) {
                take();
                t = binop(PrimOp::sub, t, product());
            } else {
                return t;
            }
        }
    }

    Term product() {
        Term t = unary();
        for (;;) {
            if (peek().kind == Tok::star) {
                take();
                t = binop(PrimOp::mul, t, unary());
            } else if (peek().kind == Tok::slash) {
                take();
                t = binop(PrimOp::div, t, unary());
            } else {
                return t;
            }
        }
    }

    Term unary() {
        if (peek().kind == Tok::minus) {
            take();
            if (peek().kind == Tok::number && !starts_atom(1)) return lit(-take().number);
            return unop(PrimOp::neg, unary());
        }
        return application();
    }

    // True if the token at offset k from the current one could start an argument.
    bool starts_atom(std::size_t k) const {
        const Token& t = toks_[pos_ + k];
        switch (t.kind) {
            case Tok::number:
            case Tok::con:
            case Tok::lparen:
            case Tok::prim: return true;
            case Tok::ident: return !is_reserved(t.text);
            default: return false;
        }
    }

    static bool is_reserved(std::string_view word) {
        return word == "fn" || word == "coeff" || word == "derive" || word == "bundle" || word == "diff";
    }

    Term application() {
        Term t = head();
        while (starts_atom(0)) t = app(t, atom());
        return t;
    }

    Term head() {
        if (keyword("coeff")) {
            take();
            if (peek().kind != Tok::number || peek().text.find_first_not_of("0123456789") != std::string::npos) {
                fail({"coefficient index"});
            }
            const Token& n = take();
            std::size_t index = 0;
            auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), index);
            if (ec != std::errc()) throw ParseError(n.line, n.column, {"coefficient index"}, describe(n));
            const Token& at = peek();
            Term body = atom();
            if (!body.is<Lam>()) throw ParseError(at.line, at.column, {"fn abstraction"}, describe(at));
            return coeff(index, body);
        }
        if (keyword("derive")) {
            take();
            return derive_open(atom(), Representation::series);
        }
        if (keyword("bundle")) {
            take();
            return bundle_open(atom(), Representation::dual);
        }
        if (keyword("diff")) {
            take();
            Term f = atom();
            Term x = atom();
            return diff_term(f, x);
        }
        if (peek().kind == Tok::con) {
            const Token& c = take();
            std::vector<Term> args;
            while (starts_atom(0)) args.push_back(atom());
            check_arity(c, args.size());
            return construct(c.text, std::move(args));
        }
        return atom();
    }

    void check_arity(const Token& c, std::size_t n) {
        auto [it, fresh] = arity_.emplace(c.text, n);
        if (!fresh && it->second != n) {
            throw ParseError(c.line, c.column, {"Con:" + c.text + " with " + std::to_string(it->second) + " arguments"},
                             describe(c) + " with " + std::to_string(n) + " arguments");
        }
    }

    Term atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::number: take(); return lit(t.number);
            case Tok::prim: take(); return prim(t.op);
            case Tok::con:
                take();
                check_arity(t, 0);
                return construct(t.text, {});
            case Tok::lparen: {
                take();
                Term inner = expr();
                if (peek().kind != Tok::rparen) fail({"')'"});
                take();
                return inner;
            }
            case Tok::ident:
                if (!is_reserved(t.text)) {
                    take();
                    return var(name_of(t));
                }
                break;
            default: break;
        }
        fail({"identifier", "number", "'('"});
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, std::size_t> arity_;
};

// Binding levels, loosest first.
enum Level { kLambda = 0, kSum = 1, kProduct = 2, kUnary = 3, kApp = 4, kAtom = 5 };

class Printer {
public:
    std::string go(const Term& t, int need) {
        auto [text, level] = render(t);
        if (level < need) return "(" + text + ")";
        return text;
    }

private:
    std::pair<std::string, int> render(const Term& t) {
        if (const auto* v = t.as<Var>()) return {v->name.str(), kAtom};
        if (const auto* l = t.as<Lit>()) {
            std::string s = format_number(l->value);
            return {s, s.front() == '-' ? kUnary : kAtom};
        }
        if (const auto* p = t.as<Prim>()) {
            if (arity(p->op) == 2) return {"(" + std::string(prim_symbol(p->op)) + ")", kAtom};
            return {std::string(prim_symbol(p->op)), kAtom};
        }
        if (const auto* l = t.as<Lam>()) return {"fn " + l->param.str() + " . " + go(l->body, kLambda), kLambda};
        if (const auto* c = t.as<Construct>()) {
            if (c->args.empty()) return {"Con:" + c->cname, kAtom};
            std::string s = "Con:" + c->cname;
            for (const auto& a : c->args) s += " " + go(a, kAtom);
            return {s, kApp};
        }
        if (const auto* q = t.as<Coeff>()) {
            return {"coeff " + std::to_string(q->index) + " " + go(q->body, kAtom), kApp};
        }
        auto [head, args] = unwind(t);
        if (const auto* p = head.as<Prim>(); p && arity(p->op) == 2 && args.size() == 2) {
            int level = (p->op == PrimOp::add || p->op == PrimOp::sub) ? kSum : kProduct;
            std::string s = go(args[0], level) + " " + std::string(prim_symbol(p->op)) + " " + go(args[1], level + 1);
            return {s, level};
        }
        std::string s;
        if (head.is<Construct>()) {
            s = "(" + go(head, kLambda) + ")";
        } else {
            s = go(head, kApp);
        }
        for (const auto& a : args) s += " " + go(a, kAtom);
        return {s, kApp};
    }
};

}  // namespace

Term parse(std::string_view src) { return Parser(Lexer(src).run()).parse_all(); }

std::string print(const Term& t) { return Printer().go(t, kLambda); }

}  // namespace ilcad
