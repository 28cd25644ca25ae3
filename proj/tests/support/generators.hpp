#pragma once

#include "ilcad/term.hpp"

#include <random>
#include <string>
#include <vector>

namespace ilcad::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Random term over every node kind. Binders come from a small pool so that
// shadowing and tagged names show up; constructor arity is fixed per name.
class TermGen {
public:
    explicit TermGen(Rng& rng) : rng_(rng) {}

    Term term(int depth) {
        if (depth <= 0) return leaf();
        switch (uniform_int(rng_, 0, 8)) {
            case 0: return leaf();
            case 1: return lam(name(), term(depth - 1));
            case 2: return app(term(depth - 1), term(depth - 1));
            case 3: return binop(binary(), term(depth - 1), term(depth - 1));
            case 4: return unop(unary(), term(depth - 1));
            case 5: {
                int k = uniform_int(rng_, 0, 2);
                std::vector<Term> args;
                for (int i = 0; i < k; ++i) args.push_back(term(depth - 1));
                return construct(k == 0 ? "Nil" : k == 1 ? "Box" : "Pair", std::move(args));
            }
            case 6: return coeff(static_cast<std::size_t>(uniform_int(rng_, 0, 4)), lam(name(), term(depth - 1)));
            case 7: return app(prim(binary()), term(depth - 1));
            default: return app(term(depth - 1), term(depth - 1), term(depth - 1));
        }
    }

private:
    Term leaf() {
        switch (uniform_int(rng_, 0, 3)) {
            case 0: return var(name());
            case 1: return lit(uniform(rng_, -4.0, 4.0));
            case 2: return lit(static_cast<double>(uniform_int(rng_, -3, 9)));
            default: return prim(uniform_int(rng_, 0, 1) ? binary() : unary());
        }
    }

    Name name() {
        static const char* bases[] = {"x", "y", "eps", "f", "x'"};
        return Name(bases[uniform_int(rng_, 0, 4)], static_cast<std::uint32_t>(uniform_int(rng_, 0, 2)));
    }

    PrimOp binary() { return static_cast<PrimOp>(uniform_int(rng_, 0, 3)); }
    PrimOp unary() { return static_cast<PrimOp>(uniform_int(rng_, 4, 8)); }

    Rng& rng_;
};

// Coefficients of a zero-constant series with `order` random terms.
inline std::vector<double> random_zps(Rng& rng, int order) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    for (int i = 1; i <= order; ++i) c[static_cast<std::size_t>(i)] = uniform(rng, -1.0, 1.0);
    return c;
}

}  // namespace ilcad::testing
