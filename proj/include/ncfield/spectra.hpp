#pragma once

// Central eigenvalues, atom masses and the entropy dimension delta*.
//
// For a pencil the candidates are the eigenvalues of A0; for a polynomial matrix they are
// clusters in the empirical spectrum of P(X) at a random tuple. Every reported atom is
// certified by rho(P - lambda 1) < N, its mass is (N - rho) / N.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/evaluate.hpp"
#include "ncfield/model.hpp"
#include "ncfield/ncmatrix.hpp"
#include "ncfield/ncrank.hpp"
#include "ncfield/randmat.hpp"
#include "ncfield/scalar.hpp"

namespace ncfield {

enum class CandidateSource { constant_term, numeric_detection };

inline std::string to_string(CandidateSource s) {
    return s == CandidateSource::constant_term ? "constant-term" : "numeric-detection";
}

struct SpectrumEntry {
    std::complex<double> lambda;
    std::optional<ExactScalar> exact;  // set when lambda is known exactly
    std::size_t rho = 0;
    Rational mass;                     // (N - rho) / N
};

/// A numeric atom that could not be certified algebraically.
struct Candidate {
    std::complex<double> center;
    std::size_t count = 0;
    std::string reason;
};

struct Flatness {
    double c1 = 0.0;  // best constant in c1 tr(b) 1 <= L(b)
    double c2 = 0.0;  // best constant in L(b) <= c2 tr(b) 1
    bool flat = false;
};

struct SpectrumReport {
    std::size_t N = 0;
    CandidateSource source = CandidateSource::constant_term;
    std::vector<SpectrumEntry> entries;
    std::vector<Candidate> uncertified;
    Rational dimension = 1;  // delta*
    std::optional<double> normality_defect;
    std::optional<Flatness> flatness;
    std::vector<std::string> warnings;
    int d = 0;
    std::uint64_t seed = 0;

    Rational total_mass() const {
        Rational s = 0;
        for (const auto& e : entries) s += e.mass;
        return s;
    }
};

/// 1 - sum (N - rho)^2 / N^2 over the certified atoms.
inline Rational entropy_dimension(const SpectrumReport& r) {
    if (r.N == 0) return Rational(1);
    Rational s = 0;
    for (const auto& e : r.entries) {
        Rational k(static_cast<long long>(r.N - e.rho));
        s += k * k;
    }
    return Rational(1) - s / Rational(static_cast<long long>(r.N * r.N));
}

namespace detail {

inline Rational mass_of(std::size_t n, std::size_t rho) {
    return Rational(static_cast<long long>(n - rho)) / Rational(static_cast<long long>(n));
}

inline void check_atom_count(const SpectrumReport& r) {
    if (r.entries.size() > r.N)
        throw InvariantViolation(std::to_string(r.entries.size()) + " central eigenvalues certified for N = " +
                                 std::to_string(r.N));
}

}  // namespace detail

struct PencilSpectrumOptions {
    NcRankOptions rank;
    /// Test every eigenvalue of A0 even when the homogeneous part is full.
    bool full_scan = false;
};

/// sigma_full of a square pencil; candidates are the eigenvalues of A0.
inline SpectrumReport central_eigs_pencil(const LinearPencil& a, const PencilSpectrumOptions& opts = {}) {
    if (!a.is_square()) throw DimensionMismatch("central eigenvalues require a square pencil");
    SpectrumReport rep;
    rep.N = a.rows();
    rep.source = CandidateSource::constant_term;
    if (rep.N == 0) return rep;

    LinearPencil hom = a.homogeneous_part();
    bool hom_full = false;
    if (!hom.is_zero()) hom_full = ncrank(hom, opts.rank).rho == rep.N;
    if (hom_full && !opts.full_scan) {
        rep.dimension = entropy_dimension(rep);
        return rep;
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a.constant().to_complex(), false);
    std::vector<std::complex<double>> distinct;
    const double scale = std::max(1.0, a.constant().to_complex().cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        bool seen = std::any_of(distinct.begin(), distinct.end(),
                                [&](auto w) { return std::abs(w - z) < 1e-6 * scale; });
        if (!seen) distinct.push_back(z);
    }
    const NcMatrix m = pencil_to_matrix(a);
    for (auto z : distinct) {
        SpectrumEntry e;
        e.lambda = z;
        auto snapped = snap_gaussian(z, 1000, 1e-6 * scale);
        if (snapped && is_exact_eigenvalue(a.constant(), *snapped)) {
            e.exact = snapped;
            e.lambda = snapped->to_complex();
            e.rho = ncrank(a.shifted(*snapped), opts.rank).rho;
        } else {
            e.rho = ncrank_shifted(m, z, opts.rank).rho;
        }
        if (e.rho < rep.N) {
            e.mass = detail::mass_of(rep.N, e.rho);
            rep.entries.push_back(e);
        }
    }
    if (hom_full && !rep.entries.empty())
        throw InvariantViolation("central eigenvalue found although the homogeneous part is full");
    detail::check_atom_count(rep);
    rep.dimension = entropy_dimension(rep);
    return rep;
}

struct AtomOptions {
    int d = 0;  // 0: about 1000 / N, at least 100
    std::uint64_t seed = 1;
    ModelKind kind = ModelKind::gue;
    bool certify = true;
    long long max_den = 64;
    double snap_tol = 1e-3;
    double cluster_fraction = 0.6;  // candidate needs >= fraction * d / N eigenvalues
    NcRankOptions rank;
};

/// Clusters of eigenvalues inside a window of width 4 d^{-1/2}.
inline std::vector<Candidate> detect_atoms(const std::vector<std::complex<double>>& eigs, int d, std::size_t n,
                                           double fraction = 0.6) {
    std::vector<Candidate> out;
    const double radius = 2.0 / std::sqrt(static_cast<double>(d));
    const double need = fraction * static_cast<double>(d) / static_cast<double>(n);
    std::vector<std::complex<double>> rest = eigs;
    for (std::size_t round = 0; round < 2 * n + 2 && !rest.empty(); ++round) {
        std::size_t best = 0, best_count = 0;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            std::size_t c = 0;
            for (const auto& w : rest)
                if (std::abs(w - rest[i]) <= radius) ++c;
            if (c > best_count) {
                best_count = c;
                best = i;
            }
        }
        if (static_cast<double>(best_count) < need) break;
        // Median of the closest best_count eigenvalues.
        std::vector<std::complex<double>> near = rest;
        const auto seed = rest[best];
        std::nth_element(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(best_count - 1), near.end(),
                         [&](auto a, auto b) { return std::abs(a - seed) < std::abs(b - seed); });
        near.resize(best_count);
        std::vector<double> re, im;
        for (auto z : near) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        std::nth_element(re.begin(), re.begin() + static_cast<std::ptrdiff_t>(re.size() / 2), re.end());
        std::nth_element(im.begin(), im.begin() + static_cast<std::ptrdiff_t>(im.size() / 2), im.end());
        Candidate c;
        c.center = {re[re.size() / 2], im[im.size() / 2]};
        c.count = best_count;
        out.push_back(c);
        std::erase_if(rest, [&](auto z) { return std::abs(z - c.center) <= radius || std::abs(z - seed) <= radius; });
    }
    return out;
}

/// ||X X* - X* X||_F / ||X||_F^2.
inline double normality_defect(const Eigen::MatrixXcd& x) {
    const double nx = x.squaredNorm();
    if (nx == 0.0) return 0.0;
    return (x * x.adjoint() - x.adjoint() * x).norm() / nx;
}

/// sigma_full of a polynomial matrix from numeric atoms of P(X), certified by ncrank.
inline SpectrumReport central_eigs_polymatrix(const NcMatrix& p, const AtomOptions& opts = {}) {
    if (!p.is_square()) throw DimensionMismatch("central eigenvalues require a square matrix");
    SpectrumReport rep;
    rep.N = p.rows();
    rep.source = CandidateSource::numeric_detection;
    if (rep.N == 0) return rep;
    const int d = opts.d > 0 ? opts.d : std::max(100, static_cast<int>(1000 / rep.N));
    rep.d = d;
    rep.seed = opts.seed;

    MatrixModel x = sample(opts.kind, d, std::max(1, p.n_vars()), opts.seed);
    if (p.n_vars() == 0) x.matrices.clear();
    Eigen::MatrixXcd m = evaluate(p, x);
    rep.normality_defect = normality_defect(m);
    if (*rep.normality_defect > 1e-8)
        rep.warnings.push_back("evaluated matrix is not normal (defect " + std::to_string(*rep.normality_defect) +
                               "); atom masses assume normality");
    ESD spec = esd_of_matrix(m, d, rep.N);
    std::vector<Candidate> cands = detect_atoms(spec.eigenvalues, d, rep.N, opts.cluster_fraction);

    for (const auto& c : cands) {
        auto snapped = snap_gaussian(c.center, opts.max_den, opts.snap_tol);
        if (!snapped) {
            rep.uncertified.push_back({c.center, c.count, "no Gaussian rational within tolerance"});
            continue;
        }
        if (!opts.certify) {
            rep.uncertified.push_back({snapped->to_complex(), c.count, "certification disabled"});
            continue;
        }
        try {
            RankResult r = ncrank(p.shifted(*snapped), opts.rank);
            if (r.rho < rep.N) {
                SpectrumEntry e;
                e.lambda = snapped->to_complex();
                e.exact = snapped;
                e.rho = r.rho;
                e.mass = detail::mass_of(rep.N, r.rho);
                rep.entries.push_back(e);
            } else {
                rep.uncertified.push_back({snapped->to_complex(), c.count, "P - lambda is full"});
            }
        } catch (const NoConsensus& err) {
            rep.uncertified.push_back({snapped->to_complex(), c.count, err.what()});
        } catch (const Inconclusive& err) {
            rep.uncertified.push_back({snapped->to_complex(), c.count, err.what()});
        }
    }
    detail::check_atom_count(rep);
    rep.dimension = entropy_dimension(rep);
    return rep;
}

/// (N - rho(P - lambda 1)) / N for each lambda.
inline std::vector<Rational> atom_masses(const NcMatrix& p, const std::vector<ExactScalar>& lambdas,
                                         const NcRankOptions& opts = {}) {
    if (!p.is_square()) throw DimensionMismatch("atom masses require a square matrix");
    std::vector<Rational> out;
    for (const auto& l : lambdas) out.push_back(detail::mass_of(p.rows(), ncrank(p.shifted(l), opts).rho));
    return out;
}

inline Rational entropy_dimension(const NcMatrix& p, const AtomOptions& opts = {}) {
    return entropy_dimension(central_eigs_polymatrix(p, opts));
}

/// Best constants c1, c2 with c1 tr(b) 1 <= L(b) <= c2 tr(b) 1 over a spanning set of rank-one b.
inline Flatness flatness(const LinearPencil& a) {
    LinearPencil hom = a.homogeneous_part();
    const auto n = static_cast<Eigen::Index>(a.rows());
    Flatness f;
    f.c1 = std::numeric_limits<double>::infinity();
    f.c2 = 0.0;
    auto probe = [&](const Eigen::VectorXcd& v) {
        Eigen::MatrixXcd b = v * v.adjoint();
        Eigen::MatrixXcd lb = quantum_op_apply(hom, b) / b.trace().real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(lb, Eigen::EigenvaluesOnly);
        f.c1 = std::min(f.c1, es.eigenvalues().minCoeff());
        f.c2 = std::max(f.c2, es.eigenvalues().maxCoeff());
    };
    const std::complex<double> I(0.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        probe(Eigen::VectorXcd::Unit(n, i));
        for (Eigen::Index j = i + 1; j < n; ++j) {
            probe(Eigen::VectorXcd::Unit(n, i) + Eigen::VectorXcd::Unit(n, j));
            probe(Eigen::VectorXcd::Unit(n, i) + I * Eigen::VectorXcd::Unit(n, j));
        }
    }
    f.flat = f.c1 > 1e-12;
    return f;
}

}  // namespace ncfield
