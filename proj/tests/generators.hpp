#pragma once

// Seeded generators for property tests.

#include <algorithm>
#include <random>
#include <vector>

#include "ncfield/ncfield.hpp"

namespace gen {

using namespace ncfield;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng); }
};

/// a/b (+ c/d i) with small numerators and denominators.
inline ExactScalar scalar(Rng& r, bool complex = true) {
    Rational re(r.uniform(-4, 4), r.uniform(1, 3));
    Rational im = 0;
    if (complex && r.coin(0.3)) im = Rational(r.uniform(-3, 3), r.uniform(1, 2));
    return {re, im};
}

inline ExactScalar nonzero_scalar(Rng& r, bool complex = true) {
    for (;;) {
        ExactScalar s = scalar(r, complex);
        if (!s.is_zero()) return s;
    }
}

inline Word word(Rng& r, int n, int len, bool starred) {
    Word w;
    for (int i = 0; i < len; ++i) w.push_back(Letter{r.uniform(1, n), starred && r.coin(0.3)});
    return w;
}

inline NcPoly poly(Rng& r, int n, int max_deg, int max_terms = 4, bool starred = false) {
    NcPoly p(n);
    const int terms = r.uniform(0, max_terms);
    for (int t = 0; t < terms; ++t) p.add_term(word(r, n, r.uniform(0, max_deg), starred), scalar(r));
    return p;
}

inline NcMatrix matrix(Rng& r, std::size_t rows, std::size_t cols, int n, int max_deg, double density = 0.7) {
    NcMatrix m(rows, cols, n);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (r.coin(density)) m(i, j) = poly(r, n, max_deg, 3);
    return m;
}

inline ExactMatrix scalar_matrix(Rng& r, std::size_t rows, std::size_t cols, double density = 0.6, int range = 2) {
    ExactMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (r.coin(density)) m(i, j) = ExactScalar(r.uniform(-range, range));
    return m;
}

/// Invertible integer matrix: permutation * unit lower * unit upper.
inline ExactMatrix invertible(Rng& r, std::size_t n, bool complex = false) {
    ExactMatrix lo = ExactMatrix::identity(n), up = ExactMatrix::identity(n), perm(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            lo(i, j) = ExactScalar(r.uniform(-2, 2));
            up(j, i) = complex && r.coin(0.3) ? ExactScalar(0, r.uniform(-1, 1)) : ExactScalar(r.uniform(-1, 1));
        }
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), r.eng);
    for (std::size_t i = 0; i < n; ++i) perm(i, p[i]) = ExactScalar(1);
    return perm * lo * up;
}

inline LinearPencil pencil(Rng& r, std::size_t n, int vars, bool homogeneous, double density = 0.5) {
    LinearPencil p(n, n, vars);
    for (int i = homogeneous ? 1 : 0; i <= vars; ++i) p.coeff(i) = scalar_matrix(r, n, n, density);
    return p;
}

/// Coefficients share an r x s zero block (r + s = n + 1), hidden by random invertible U, V.
inline LinearPencil hidden_nonfull_pencil(Rng& r, std::size_t n, int vars, bool homogeneous) {
    const std::size_t rr = static_cast<std::size_t>(r.uniform(1, static_cast<int>(n)));
    const std::size_t ss = n + 1 - rr;
    LinearPencil p(n, n, vars);
    for (int i = homogeneous ? 1 : 0; i <= vars; ++i) {
        ExactMatrix a = scalar_matrix(r, n, n, 0.7);
        for (std::size_t x = 0; x < rr; ++x)
            for (std::size_t y = 0; y < ss; ++y) a(x, n - ss + y) = ExactScalar(0);
        p.coeff(i) = a;
    }
    return p.congruence(invertible(r, n), invertible(r, n));
}

/// Polynomial matrix with an r x s zero block, r + s > n, rows and columns shuffled.
inline NcMatrix hollow_matrix(Rng& r, std::size_t n, int vars, int max_deg) {
    const std::size_t rr = static_cast<std::size_t>(r.uniform(1, static_cast<int>(n)));
    const std::size_t ss = n + 1 - rr + static_cast<std::size_t>(r.uniform(0, static_cast<int>(rr) - 1));
    NcMatrix m = matrix(r, n, n, vars, max_deg, 0.9);
    std::vector<std::size_t> rp(n), cp(n);
    for (std::size_t i = 0; i < n; ++i) rp[i] = cp[i] = i;
    std::shuffle(rp.begin(), rp.end(), r.eng);
    std::shuffle(cp.begin(), cp.end(), r.eng);
    for (std::size_t x = 0; x < rr; ++x)
        for (std::size_t y = 0; y < std::min(ss, n); ++y) m(rp[x], cp[y]) = NcPoly(vars);
    return m;
}

inline ExprPtr expr(Rng& r, int n, int depth, bool allow_inv, bool allow_adj) {
    if (depth <= 0 || r.coin(0.25)) {
        if (r.coin(0.3)) return ExprNode::make_const(scalar(r));
        return ExprNode::make_var(r.uniform(1, n));
    }
    const int k = r.uniform(0, allow_inv ? 5 : 4);
    switch (k) {
        case 0: return ExprNode::make_binary(NodeKind::add, expr(r, n, depth - 1, allow_inv, allow_adj), expr(r, n, depth - 1, allow_inv, allow_adj));
        case 1:
        case 2: return ExprNode::make_binary(NodeKind::mul, expr(r, n, depth - 1, allow_inv, allow_adj), expr(r, n, depth - 1, allow_inv, allow_adj));
        case 3: return ExprNode::make_unary(NodeKind::neg, expr(r, n, depth - 1, allow_inv, allow_adj));
        case 4:
            if (allow_adj) return ExprNode::make_unary(NodeKind::adjoint, expr(r, n, depth - 1, allow_inv, allow_adj));
            return ExprNode::make_binary(NodeKind::add, expr(r, n, depth - 1, allow_inv, allow_adj), ExprNode::make_const(ExactScalar(1)));
        default:
            // Shift by k + 1/7 so random evaluations stay inside the domain; other constants only
            // have denominators 2^a 3^b, so the argument is never the zero function.
            return ExprNode::make_unary(
                NodeKind::inv,
                ExprNode::make_binary(NodeKind::add, expr(r, n, depth - 1, allow_inv, allow_adj),
                                      ExprNode::make_const(ExactScalar(Rational(7 * r.uniform(3, 5) + 1, 7)))));
    }
}

inline RatExpr rat_expr(Rng& r, int n, int depth, bool allow_inv, bool allow_adj) {
    return {expr(r, n, depth, allow_inv, allow_adj), n};
}

}  // namespace gen
