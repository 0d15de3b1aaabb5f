#pragma once

// Random matrix tuples standing in for operator tuples:
//   gue          Hermitian, E|H_ij|^2 = 1/d, spectrum -> semicircle on [-2, 2]
//   haar_unitary Haar-distributed unitaries (QR of Ginibre with phase correction)
//   ginibre      i.i.d. complex Gaussian entries of variance 1/d (non-selfadjoint)

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/ncpoly.hpp"

namespace ncfield {

enum class ModelKind { gue, haar_unitary, ginibre, custom };

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::gue: return "gue";
        case ModelKind::haar_unitary: return "haar";
        case ModelKind::ginibre: return "ginibre";
        case ModelKind::custom: return "custom";
    }
    return "custom";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "gue") return ModelKind::gue;
    if (s == "haar" || s == "haar_unitary") return ModelKind::haar_unitary;
    if (s == "ginibre") return ModelKind::ginibre;
    if (s == "custom") return ModelKind::custom;
    throw InputError("unknown model kind '" + s + "'");
}

struct MatrixModel {
    ModelKind kind = ModelKind::custom;
    int d = 0;
    std::uint64_t seed = 0;
    std::vector<Eigen::MatrixXcd> matrices;  // one per variable, x1 first

    int n_vars() const { return static_cast<int>(matrices.size()); }

    const Eigen::MatrixXcd& var(int i) const {
        if (i < 1 || i > n_vars()) throw UnknownVariable("model has no matrix for x" + std::to_string(i));
        return matrices[static_cast<std::size_t>(i - 1)];
    }

    /// Matrix for a letter; starred letters evaluate to the conjugate transpose.
    Eigen::MatrixXcd letter(const Letter& l) const { return l.starred ? Eigen::MatrixXcd(var(l.var).adjoint()) : var(l.var); }

    /// The tuple of conjugate transposes (X1*, ..., Xn*).
    MatrixModel adjoint() const {
        MatrixModel m = *this;
        m.kind = ModelKind::custom;
        for (auto& x : m.matrices) x = x.adjoint().eval();
        return m;
    }

    static MatrixModel custom(std::vector<Eigen::MatrixXcd> mats) {
        MatrixModel m;
        m.kind = ModelKind::custom;
        m.d = mats.empty() ? 0 : static_cast<int>(mats.front().rows());
        for (const auto& x : mats)
            if (x.rows() != m.d || x.cols() != m.d) throw DimensionMismatch("custom model matrices must be d x d");
        m.matrices = std::move(mats);
        return m;
    }
};

namespace detail {

inline Eigen::MatrixXcd complex_gaussian(int d, double variance, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    Eigen::MatrixXcd g(d, d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
            double re = normal(rng);
            double im = normal(rng);
            g(r, c) = {re, im};
        }
    return g;
}

inline Eigen::MatrixXcd sample_gue(int d, std::mt19937_64& rng) {
    Eigen::MatrixXcd g = complex_gaussian(d, 1.0, rng);
    Eigen::MatrixXcd h = (g + g.adjoint()) / std::sqrt(2.0 * d);
    for (int i = 0; i < d; ++i) h(i, i) = h(i, i).real();
    return h;
}

inline Eigen::MatrixXcd sample_haar(int d, std::mt19937_64& rng) {
    Eigen::MatrixXcd g = complex_gaussian(d, 1.0, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& r = qr.matrixQR();
    for (int j = 0; j < d; ++j) {
        std::complex<double> diag = r(j, j);
        double a = std::abs(diag);
        q.col(j) *= a > 0 ? diag / a : std::complex<double>(1.0);
    }
    return q;
}

}  // namespace detail

/// Samples n independent d x d matrices; bit-identical for equal (kind, d, n, seed).
inline MatrixModel sample(ModelKind kind, int d, int n_vars, std::uint64_t seed) {
    if (d < 1) throw InputError("model dimension must be >= 1");
    if (kind == ModelKind::custom) throw InputError("custom models are built with MatrixModel::custom");
    std::mt19937_64 rng(seed);
    MatrixModel m;
    m.kind = kind;
    m.d = d;
    m.seed = seed;
    m.matrices.reserve(static_cast<std::size_t>(n_vars));
    for (int i = 0; i < n_vars; ++i) {
        switch (kind) {
            case ModelKind::gue: m.matrices.push_back(detail::sample_gue(d, rng)); break;
            case ModelKind::haar_unitary: m.matrices.push_back(detail::sample_haar(d, rng)); break;
            case ModelKind::ginibre: m.matrices.push_back(detail::complex_gaussian(d, 1.0 / d, rng)); break;
            case ModelKind::custom: break;
        }
    }
    return m;
}

}  // namespace ncfield
