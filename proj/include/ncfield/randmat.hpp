#pragma once

// Empirical ranks, spectral distributions and finite-d rank scans for evaluated
// polynomial matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "ncfield/evaluate.hpp"
#include "ncfield/model.hpp"
#include "ncfield/ncmatrix.hpp"
#include "ncfield/parallel.hpp"

namespace ncfield {

/// Singular values above `relative * dim * sigma_max * factor` count towards the rank.
/// A gap ratio below `min_gap` between the last kept and first dropped value is flagged.
struct RankPolicy {
    double relative = 1e-11;
    double min_gap = 1e3;
    double factor = 1.0;
};

struct RankReport {
    std::size_t rank = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    double sigma_max = 0.0;
    double threshold = 0.0;
    double last_kept = 0.0;      // smallest singular value counted
    double first_dropped = 0.0;  // largest singular value discarded
    double gap_ratio = std::numeric_limits<double>::infinity();
    bool gap_ok = true;
    /// Kernel dimension from a column-pivoted QR, independent of the SVD count.
    std::size_t kernel_dim_qr = 0;
};

inline RankReport empirical_rank(const Eigen::MatrixXcd& m, const RankPolicy& policy = {}) {
    RankReport rep;
    rep.rows = static_cast<std::size_t>(m.rows());
    rep.cols = static_cast<std::size_t>(m.cols());
    if (m.size() == 0) {
        rep.kernel_dim_qr = rep.cols;
        return rep;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const Eigen::VectorXd& s = svd.singularValues();
    rep.sigma_max = s.size() ? s(0) : 0.0;
    const double dim = static_cast<double>(std::max(m.rows(), m.cols()));
    rep.threshold = policy.relative * policy.factor * dim * rep.sigma_max;
    std::size_t k = 0;
    if (rep.sigma_max > 0)
        while (k < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(k)) > rep.threshold) ++k;
    rep.rank = k;
    if (k > 0) rep.last_kept = s(static_cast<Eigen::Index>(k - 1));
    if (k < static_cast<std::size_t>(s.size())) rep.first_dropped = s(static_cast<Eigen::Index>(k));
    if (k > 0 && k < static_cast<std::size_t>(s.size())) {
        rep.gap_ratio = rep.first_dropped > 0 ? rep.last_kept / rep.first_dropped : std::numeric_limits<double>::infinity();
        rep.gap_ok = rep.gap_ratio >= policy.min_gap;
    }

    if (rep.sigma_max == 0.0) {
        rep.kernel_dim_qr = rep.cols;
        return rep;
    }
    // Second route: pivoted QR with its cut placed in the middle of the singular-value gap.
    double cut = rep.threshold;
    if (k > 0 && k < static_cast<std::size_t>(s.size()))
        cut = std::sqrt(rep.last_kept * std::max(rep.first_dropped, rep.threshold * 1e-3));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
    qr.setThreshold(cut / qr.maxPivot());
    rep.kernel_dim_qr = static_cast<std::size_t>(qr.dimensionOfKernel());
    return rep;
}

inline bool is_hermitian(const Eigen::MatrixXcd& m, double rel_tol = 1e-10) {
    if (m.rows() != m.cols()) return false;
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

struct Histogram {
    std::vector<double> edges;  // bins + 1 edges
    std::vector<double> mass;   // per bin, sums to 1
};

inline Histogram make_histogram(const std::vector<double>& values, int bins) {
    Histogram h;
    if (values.empty() || bins < 1) return h;
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    h.mass.assign(static_cast<std::size_t>(bins), 0.0);
    for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
    const double w = 1.0 / static_cast<double>(values.size());
    for (double v : values) {
        auto b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        h.mass[static_cast<std::size_t>(b)] += w;
    }
    return h;
}

/// Empirical spectral distribution of an evaluated square matrix.
struct ESD {
    bool hermitian = false;
    int d = 0;
    std::size_t N = 0;
    std::vector<double> real_eigenvalues;                  // filled on the Hermitian path
    std::vector<std::complex<double>> eigenvalues;         // always filled
    Histogram histogram;                                   // over real parts

    std::size_t count() const { return eigenvalues.size(); }

    /// Fraction of eigenvalues with |lambda - center| <= radius.
    double mass_near(std::complex<double> center, double radius) const {
        if (eigenvalues.empty()) return 0.0;
        std::size_t k = 0;
        for (const auto& z : eigenvalues)
            if (std::abs(z - center) <= radius) ++k;
        return static_cast<double>(k) / static_cast<double>(eigenvalues.size());
    }
};

inline ESD esd_of_matrix(const Eigen::MatrixXcd& m, int d, std::size_t N, int bins = 60) {
    if (m.rows() != m.cols()) throw DimensionMismatch("ESD requires a square matrix");
    ESD out;
    out.d = d;
    out.N = N;
    out.hermitian = is_hermitian(m);
    if (out.hermitian) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd& ev = es.eigenvalues();
        out.real_eigenvalues.assign(ev.data(), ev.data() + ev.size());
        for (double v : out.real_eigenvalues) out.eigenvalues.emplace_back(v, 0.0);
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
        const Eigen::VectorXcd& ev = es.eigenvalues();
        out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    }
    std::vector<double> re;
    re.reserve(out.eigenvalues.size());
    for (const auto& z : out.eigenvalues) re.push_back(z.real());
    out.histogram = make_histogram(re, bins);
    return out;
}

inline ESD esd(const NcMatrix& p, const MatrixModel& x, int bins = 60) {
    if (!p.is_square()) throw DimensionMismatch("ESD requires a square matrix");
    return esd_of_matrix(evaluate(p, x), x.d, p.rows(), bins);
}

/// CDF of the standard semicircle law on [-2, 2].
inline double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(x / 2.0) / std::numbers::pi;
}

/// sup_x |F_emp(x) - F_sc(x)| for a real sample.
inline double kolmogorov_distance_semicircle(std::vector<double> values) {
    if (values.empty()) return 1.0;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double f = semicircle_cdf(values[i]);
        dist = std::max({dist, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    return dist;
}

struct ConvergenceRow {
    int d = 0;
    std::size_t rank = 0;
    double rank_over_d = 0.0;
};

/// rank(P(X_d)) / d for each d (model seeds: seed + index).
inline std::vector<ConvergenceRow> rank_convergence(const NcMatrix& p, const std::vector<int>& dims, std::uint64_t seed,
                                                    ModelKind kind = ModelKind::gue, const RankPolicy& policy = {}) {
    std::vector<ConvergenceRow> rows(dims.size());
    parallel_for(dims.size(), [&](std::size_t i) {
        MatrixModel x = sample(kind, dims[i], p.n_vars(), seed + i);
        RankReport rep = empirical_rank(evaluate(p, x), policy);
        rows[i] = {dims[i], rep.rank, static_cast<double>(rep.rank) / dims[i]};
    });
    return rows;
}

struct IntegralityEntry {
    std::size_t index = 0;
    std::size_t N = 0;
    std::size_t rank = 0;
    double rank_over_d = 0.0;
    long nearest = 0;
    double distance = 0.0;
    bool flagged = false;
};

struct IntegralityReport {
    int d = 0;
    ModelKind kind = ModelKind::gue;
    std::uint64_t seed = 0;
    double threshold = 0.02;
    std::vector<IntegralityEntry> entries;

    bool all_pass() const {
        return std::none_of(entries.begin(), entries.end(), [](const auto& e) { return e.flagged; });
    }
};

/// Distance of rank(P(X))/d to the nearest integer for each P (model seeds: seed + index).
inline IntegralityReport atiyah_integrality_scan(const std::vector<NcMatrix>& ps, int d, std::uint64_t seed,
                                                 ModelKind kind = ModelKind::gue, double threshold = 0.02,
                                                 const RankPolicy& policy = {}) {
    IntegralityReport rep;
    rep.d = d;
    rep.kind = kind;
    rep.seed = seed;
    rep.threshold = threshold;
    rep.entries.resize(ps.size());
    parallel_for(ps.size(), [&](std::size_t i) {
        MatrixModel x = sample(kind, d, ps[i].n_vars(), seed + i);
        RankReport r = empirical_rank(evaluate(ps[i], x), policy);
        IntegralityEntry e;
        e.index = i;
        e.N = std::max(ps[i].rows(), ps[i].cols());
        e.rank = r.rank;
        e.rank_over_d = static_cast<double>(r.rank) / d;
        e.nearest = std::lround(e.rank_over_d);
        e.distance = std::abs(e.rank_over_d - static_cast<double>(e.nearest));
        e.flagged = e.distance > threshold;
        rep.entries[i] = e;
    });
    return rep;
}

}  // namespace ncfield
