#pragma once

// Truncated power-series arithmetic over an arbitrary coefficient field.
//
// A series is a coefficient vector a[0..n]; operations return coefficients
// 0..order. Every recurrence computes coefficient k from input coefficients
// 0..k only, and the operation sequence for coefficient k does not depend on
// `order`, so raising the order never changes lower coefficients bit-for-bit.
//
// `Field` supplies: zero(), one(), add, sub, mul, div, neg, scale(c, double),
// and apply(PrimOp, c) for the elementary functions.

#include "ilcad/term.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace ilcad::series {

template <class C>
using Coeffs = std::vector<C>;

template <class C, class Field>
C at(const Coeffs<C>& a, std::size_t k, Field& f) {
    return k < a.size() ? a[k] : f.zero();
}

template <class C, class Field>
Coeffs<C> add(const Coeffs<C>& a, const Coeffs<C>& b, std::size_t order, Field& f) {
    std::size_t n = std::min(std::max(a.size(), b.size()), order + 1);
    Coeffs<C> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(f.add(at(a, k, f), at(b, k, f)));
    return out;
}

template <class C, class Field>
Coeffs<C> sub(const Coeffs<C>& a, const Coeffs<C>& b, std::size_t order, Field& f) {
    std::size_t n = std::min(std::max(a.size(), b.size()), order + 1);
    Coeffs<C> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(f.sub(at(a, k, f), at(b, k, f)));
    return out;
}

template <class C, class Field>
Coeffs<C> neg(const Coeffs<C>& a, Field& f) {
    Coeffs<C> out;
    out.reserve(a.size());
    for (const auto& c : a) out.push_back(f.neg(c));
    return out;
}

// Cauchy product.
template <class C, class Field>
Coeffs<C> mul(const Coeffs<C>& a, const Coeffs<C>& b, std::size_t order, Field& f) {
    if (a.empty() || b.empty()) return {};
    std::size_t n = std::min(a.size() + b.size() - 1, order + 1);
    Coeffs<C> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        C sum = f.zero();
        for (std::size_t m = 0; m <= k; ++m) {
            if (m < a.size() && k - m < b.size()) sum = f.add(sum, f.mul(a[m], b[k - m]));
        }
        out.push_back(sum);
    }
    return out;
}

// exp: e0 = exp a0, e_n = (1/n) sum_{m=1..n} m a_m e_{n-m}.
template <class C, class Field>
Coeffs<C> exp(const Coeffs<C>& a, std::size_t order, Field& f) {
    Coeffs<C> e;
    e.push_back(f.apply(PrimOp::exp, at(a, 0, f)));
    for (std::size_t n = 1; n <= order; ++n) {
        C sum = f.zero();
        for (std::size_t m = 1; m <= n; ++m) {
            sum = f.add(sum, f.mul(f.scale(at(a, m, f), static_cast<double>(m)), e[n - m]));
        }
        e.push_back(f.scale(sum, 1.0 / static_cast<double>(n)));
    }
    return e;
}

// sin and cos together: s_n = (1/n) sum m a_m c_{n-m}, c_n = -(1/n) sum m a_m s_{n-m}.
template <class C, class Field>
std::pair<Coeffs<C>, Coeffs<C>> sin_cos(const Coeffs<C>& a, std::size_t order, Field& f) {
    Coeffs<C> s;
    Coeffs<C> c;
    s.push_back(f.apply(PrimOp::sin, at(a, 0, f)));
    c.push_back(f.apply(PrimOp::cos, at(a, 0, f)));
    for (std::size_t n = 1; n <= order; ++n) {
        C ss = f.zero();
        C cs = f.zero();
        for (std::size_t m = 1; m <= n; ++m) {
            C ma = f.scale(at(a, m, f), static_cast<double>(m));
            ss = f.add(ss, f.mul(ma, c[n - m]));
            cs = f.add(cs, f.mul(ma, s[n - m]));
        }
        double inv = 1.0 / static_cast<double>(n);
        s.push_back(f.scale(ss, inv));
        c.push_back(f.neg(f.scale(cs, inv)));
    }
    return {std::move(s), std::move(c)};
}

// log: l0 = log a0, l_n = (a_n - (1/n) sum_{m=1..n-1} m l_m a_{n-m}) / a0.
template <class C, class Field>
Coeffs<C> log(const Coeffs<C>& a, std::size_t order, Field& f) {
    C a0 = at(a, 0, f);
    Coeffs<C> l;
    l.push_back(f.apply(PrimOp::log, a0));
    for (std::size_t n = 1; n <= order; ++n) {
        C sum = f.zero();
        for (std::size_t m = 1; m < n; ++m) {
            sum = f.add(sum, f.mul(f.scale(l[m], static_cast<double>(m)), at(a, n - m, f)));
        }
        C num = f.sub(at(a, n, f), f.scale(sum, 1.0 / static_cast<double>(n)));
        l.push_back(f.div(num, a0));
    }
    return l;
}

// 1/a: r0 = 1/a0, r_n = -(1/a0) sum_{m=1..n} a_m r_{n-m}.
template <class C, class Field>
Coeffs<C> reciprocal(const Coeffs<C>& a, std::size_t order, Field& f) {
    C a0 = at(a, 0, f);
    Coeffs<C> r;
    r.push_back(f.div(f.one(), a0));
    for (std::size_t n = 1; n <= order; ++n) {
        C sum = f.zero();
        for (std::size_t m = 1; m <= n; ++m) sum = f.add(sum, f.mul(at(a, m, f), r[n - m]));
        r.push_back(f.neg(f.div(sum, a0)));
    }
    return r;
}

template <class C, class Field>
Coeffs<C> apply(PrimOp op, const Coeffs<C>& a, std::size_t order, Field& f) {
    switch (op) {
        case PrimOp::exp: return exp(a, order, f);
        case PrimOp::sin: return sin_cos(a, order, f).first;
        case PrimOp::cos: return sin_cos(a, order, f).second;
        case PrimOp::log: return log(a, order, f);
        case PrimOp::div: return reciprocal(a, order, f);
        case PrimOp::neg: return neg(a, f);
        default: break;
    }
    return {};
}

}  // namespace ilcad::series
