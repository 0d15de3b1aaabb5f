#pragma once

// Linear representations r = u A^{-1} v of rational expressions and their evaluation
// on matrix tuples.
//
// Adjoint letters are handled by widening the pencil alphabet to 2n formal letters:
// letter i <= n is x_i, letter n + i is x_i*. Evaluation substitutes X_i and X_i^*.
//
// Construction rules (k = dimension):
//   c          u = [1], A = [1], v = [c]                                    k = 1
//   x_j        u = [1 0], A = [[1, -x_j], [0, 1]], v = [0 1]^T              k = 2
//   -r         (u, A, -v)
//   r1 + r2    ([u1 u2], diag(A1, A2), [v1; v2])                            k1 + k2
//   r1 r2      ([u1 0], [[A1, -v1 u2], [0, A2]], [0; v2])                   k1 + k2
//   r^-1       ([-1 0], [[0, u], [v, A]], e1)                               k + 1
//              (Schur complement of A is -r, so the corner of the inverse is -r^-1)
//   x_j^-1     ([1], [x_j], [1])                                            k = 1
//   r*         (v*, A*, u*)

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/evaluate.hpp"
#include "ncfield/exact_matrix.hpp"
#include "ncfield/model.hpp"
#include "ncfield/ncmatrix.hpp"
#include "ncfield/ratexpr.hpp"

namespace ncfield {

struct LinearRepresentation {
    int n_vars = 0;       // variables of the expression; the pencil has 2 * n_vars letters
    ExactMatrix u;        // 1 x k
    LinearPencil pencil;  // k x k over 2 * n_vars letters
    ExactMatrix v;        // k x 1

    std::size_t dim() const { return pencil.rows(); }
};

/// Two independent sets of block conventions; both must represent the same function.
enum class RealizeStyle { upper, lower };

namespace detail {

inline int adjoint_letter(int letter, int n) { return letter <= n ? letter + n : letter - n; }

inline LinearRepresentation rep_scalar(int n, const ExactScalar& c, RealizeStyle style) {
    LinearRepresentation r;
    r.n_vars = n;
    r.pencil = LinearPencil(1, 1, 2 * n);
    r.pencil.coeff(0)(0, 0) = ExactScalar(1);
    r.u = ExactMatrix(1, 1);
    r.v = ExactMatrix(1, 1);
    if (style == RealizeStyle::upper) {
        r.u(0, 0) = ExactScalar(1);
        r.v(0, 0) = c;
    } else {
        r.u(0, 0) = c;
        r.v(0, 0) = ExactScalar(1);
    }
    return r;
}

inline LinearRepresentation rep_letter(int n, int letter, RealizeStyle style) {
    LinearRepresentation r;
    r.n_vars = n;
    r.pencil = LinearPencil(2, 2, 2 * n);
    r.pencil.coeff(0) = ExactMatrix::identity(2);
    r.u = ExactMatrix(1, 2);
    r.v = ExactMatrix(2, 1);
    if (style == RealizeStyle::upper) {
        r.pencil.coeff(letter)(0, 1) = ExactScalar(-1);
        r.u(0, 0) = ExactScalar(1);
        r.v(1, 0) = ExactScalar(1);
    } else {
        r.pencil.coeff(letter)(1, 0) = ExactScalar(-1);
        r.u(0, 1) = ExactScalar(1);
        r.v(0, 0) = ExactScalar(1);
    }
    return r;
}

inline LinearRepresentation rep_inverse_letter(int n, int letter) {
    LinearRepresentation r;
    r.n_vars = n;
    r.pencil = LinearPencil(1, 1, 2 * n);
    r.pencil.coeff(letter)(0, 0) = ExactScalar(1);
    r.u = ExactMatrix{{ExactScalar(1)}};
    r.v = ExactMatrix{{ExactScalar(1)}};
    return r;
}

inline LinearPencil block_pencil(const LinearPencil& a, const LinearPencil& b, const ExactMatrix& upper_right,
                                 const ExactMatrix& lower_left) {
    const std::size_t k1 = a.rows(), k2 = b.rows();
    LinearPencil out(k1 + k2, k1 + k2, a.n_vars());
    for (int i = 0; i <= a.n_vars(); ++i) {
        out.coeff(i).set_block(0, 0, a.coeff(i));
        out.coeff(i).set_block(k1, k1, b.coeff(i));
    }
    if (upper_right.rows()) out.coeff(0).set_block(0, k1, upper_right);
    if (lower_left.rows()) out.coeff(0).set_block(k1, 0, lower_left);
    return out;
}

inline LinearRepresentation rep_add(const LinearRepresentation& a, const LinearRepresentation& b, RealizeStyle style) {
    const LinearRepresentation& first = style == RealizeStyle::upper ? a : b;
    const LinearRepresentation& second = style == RealizeStyle::upper ? b : a;
    LinearRepresentation r;
    r.n_vars = a.n_vars;
    r.pencil = block_pencil(first.pencil, second.pencil, {}, {});
    r.u = ExactMatrix::hstack({first.u, second.u});
    r.v = ExactMatrix::vstack({first.v, second.v});
    return r;
}

inline LinearRepresentation rep_mul(const LinearRepresentation& a, const LinearRepresentation& b, RealizeStyle style) {
    LinearRepresentation r;
    r.n_vars = a.n_vars;
    const ExactMatrix coupling = (a.v * b.u) * ExactScalar(-1);
    if (style == RealizeStyle::upper) {
        r.pencil = block_pencil(a.pencil, b.pencil, coupling, {});
        r.u = ExactMatrix::hstack({a.u, ExactMatrix(1, b.dim())});
        r.v = ExactMatrix::vstack({ExactMatrix(a.dim(), 1), b.v});
    } else {
        // [[A2, 0], [-v1 u2, A1]] with u = [0 u1], v = [v2; 0].
        r.pencil = block_pencil(b.pencil, a.pencil, {}, coupling);
        r.u = ExactMatrix::hstack({ExactMatrix(1, b.dim()), a.u});
        r.v = ExactMatrix::vstack({b.v, ExactMatrix(a.dim(), 1)});
    }
    return r;
}

inline LinearRepresentation rep_inv(const LinearRepresentation& a, RealizeStyle style) {
    const std::size_t k = a.dim();
    LinearRepresentation r;
    r.n_vars = a.n_vars;
    r.pencil = LinearPencil(k + 1, k + 1, a.pencil.n_vars());
    for (int i = 0; i <= a.pencil.n_vars(); ++i) r.pencil.coeff(i).set_block(1, 1, a.pencil.coeff(i));
    r.pencil.coeff(0).set_block(0, 1, a.u);
    r.pencil.coeff(0).set_block(1, 0, a.v);
    r.u = ExactMatrix(1, k + 1);
    r.v = ExactMatrix(k + 1, 1);
    if (style == RealizeStyle::upper) {
        r.u(0, 0) = ExactScalar(-1);
        r.v(0, 0) = ExactScalar(1);
    } else {
        r.u(0, 0) = ExactScalar(1);
        r.v(0, 0) = ExactScalar(-1);
    }
    return r;
}

inline LinearRepresentation rep_adjoint(const LinearRepresentation& a) {
    const int n = a.n_vars;
    LinearRepresentation r;
    r.n_vars = n;
    r.u = a.v.adjoint();
    r.v = a.u.adjoint();
    r.pencil = LinearPencil(a.dim(), a.dim(), 2 * n);
    r.pencil.coeff(0) = a.pencil.coeff(0).adjoint();
    for (int i = 1; i <= 2 * n; ++i) r.pencil.coeff(adjoint_letter(i, n)) = a.pencil.coeff(i).adjoint();
    return r;
}

inline LinearRepresentation realize_node(const ExprPtr& e, int n, RealizeStyle style) {
    switch (e->kind) {
        case NodeKind::constant: return rep_scalar(n, e->value, style);
        case NodeKind::variable: return rep_letter(n, e->var, style);
        case NodeKind::adjoint:
            if (e->left->kind == NodeKind::variable) return rep_letter(n, e->left->var + n, style);
            return rep_adjoint(realize_node(e->left, n, style));
        case NodeKind::neg: {
            LinearRepresentation r = realize_node(e->left, n, style);
            if (style == RealizeStyle::upper)
                r.v *= ExactScalar(-1);
            else
                r.u *= ExactScalar(-1);
            return r;
        }
        case NodeKind::add: return rep_add(realize_node(e->left, n, style), realize_node(e->right, n, style), style);
        case NodeKind::mul: return rep_mul(realize_node(e->left, n, style), realize_node(e->right, n, style), style);
        case NodeKind::inv: {
            const ExprPtr& c = e->left;
            if (c->kind == NodeKind::variable) return rep_inverse_letter(n, c->var);
            if (c->kind == NodeKind::adjoint && c->left->kind == NodeKind::variable)
                return rep_inverse_letter(n, c->left->var + n);
            return rep_inv(realize_node(c, n, style), style);
        }
    }
    throw Error("unknown expression node");
}

}  // namespace detail

/// Linear representation by structural recursion; dim <= 2 * leaves + inverses.
inline LinearRepresentation realize(const RatExpr& e, RealizeStyle style = RealizeStyle::upper) {
    if (!e.root()) throw InputError("empty expression");
    return detail::realize_node(e.root(), e.n_vars(), style);
}

/// Widened letter tuple (X1..Xn, X1*..Xn*) for a model.
inline std::vector<Eigen::MatrixXcd> widened_letters(const MatrixModel& x) {
    std::vector<Eigen::MatrixXcd> mats = x.matrices;
    for (const auto& m : x.matrices) mats.push_back(m.adjoint());
    return mats;
}

struct DomainReport {
    bool in_domain = false;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double threshold = 0.0;
    std::size_t size = 0;  // k * d
};

namespace detail {

inline DomainReport domain_of(const Eigen::MatrixXcd& ax, std::size_t k, int d, double tol_factor) {
    DomainReport rep;
    rep.size = static_cast<std::size_t>(ax.rows());
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(ax);
    const auto& s = svd.singularValues();
    rep.sigma_max = s.size() ? s(0) : 0.0;
    rep.sigma_min = s.size() ? s(s.size() - 1) : 0.0;
    rep.threshold = tol_factor * static_cast<double>(k) * d * std::numeric_limits<double>::epsilon() * rep.sigma_max;
    rep.in_domain = rep.sigma_max > 0 && rep.sigma_min > rep.threshold;
    return rep;
}

inline void check_rep_model(const LinearRepresentation& rep, const MatrixModel& x) {
    if (x.n_vars() != rep.n_vars)
        throw DimensionMismatch("model supplies " + std::to_string(x.n_vars()) + " matrices, representation needs " +
                                std::to_string(rep.n_vars));
}

}  // namespace detail

/// X in dom(rho) iff sigma_min(A(X)) > tol_factor * k * d * eps * ||A(X)||_2.
inline DomainReport domain_check(const LinearRepresentation& rep, const MatrixModel& x, double tol_factor = 1.0) {
    detail::check_rep_model(rep, x);
    Eigen::MatrixXcd ax = evaluate_pencil(rep.pencil, widened_letters(x), x.d);
    return detail::domain_of(ax, rep.dim(), x.d, tol_factor);
}

/// (u (x) 1) A(X)^{-1} (v (x) 1); throws OutOfDomain when A(X) fails the tolerance.
inline Eigen::MatrixXcd eval_rep(const LinearRepresentation& rep, const MatrixModel& x, double tol_factor = 1.0) {
    detail::check_rep_model(rep, x);
    const int d = x.d;
    const auto k = static_cast<Eigen::Index>(rep.dim());
    Eigen::MatrixXcd ax = evaluate_pencil(rep.pencil, widened_letters(x), d);
    DomainReport dom = detail::domain_of(ax, rep.dim(), d, tol_factor);
    if (!dom.in_domain)
        throw OutOfDomain("A(X) is not invertible: sigma_min = " + std::to_string(dom.sigma_min), dom.sigma_min,
                          dom.threshold);
    Eigen::MatrixXcd vb = Eigen::MatrixXcd::Zero(k * d, d);
    for (Eigen::Index i = 0; i < k; ++i)
        vb.block(i * d, 0, d, d).diagonal().setConstant(rep.v(static_cast<std::size_t>(i), 0).to_complex());
    Eigen::MatrixXcd y = ax.partialPivLu().solve(vb);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < k; ++i) {
        const ExactScalar& ui = rep.u(0, static_cast<std::size_t>(i));
        if (!ui.is_zero()) out += ui.to_complex() * y.block(i * d, 0, d, d);
    }
    return out;
}

}  // namespace ncfield
