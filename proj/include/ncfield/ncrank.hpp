#pragma once

// Inner rank over the free field.
//
// Two engines:
//   * operator scaling on a homogeneous square pencil (alternating normalisation of
//     L(I) = sum Ai Ai* and L*(I) = sum Ai* Ai); nonfull verdicts always carry an exact
//     witness subspace V with dim(sum Ai V) < dim V;
//   * substitution of independent random matrices of size d, rho = rank / d.
// ncrank() runs both (plus the zero-pattern test) and refuses to resolve a disagreement.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/evaluate.hpp"
#include "ncfield/exact_matrix.hpp"
#include "ncfield/hollow.hpp"
#include "ncfield/model.hpp"
#include "ncfield/ncmatrix.hpp"
#include "ncfield/parallel.hpp"
#include "ncfield/randmat.hpp"

namespace ncfield {

// ---------------------------------------------------------------------------
// Quantum operator

inline void require_homogeneous_square(const LinearPencil& p, const char* who) {
    if (!p.is_square()) throw DimensionMismatch(std::string(who) + " requires a square pencil");
    if (!p.is_homogeneous()) throw InputError(std::string(who) + " requires a homogeneous pencil (A0 = 0)");
}

/// L(B) = sum_i Ai B Ai*.
inline Eigen::MatrixXcd quantum_op_apply(const LinearPencil& p, const Eigen::MatrixXcd& b) {
    require_homogeneous_square(p, "quantum_op_apply");
    const auto n = static_cast<Eigen::Index>(p.rows());
    if (b.rows() != n || b.cols() != n) throw DimensionMismatch("B has the wrong size");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i <= p.n_vars(); ++i) {
        Eigen::MatrixXcd a = p.coeff(i).to_complex();
        out += a * b * a.adjoint();
    }
    return out;
}

/// Exact L(B).
inline ExactMatrix quantum_op_apply(const LinearPencil& p, const ExactMatrix& b) {
    require_homogeneous_square(p, "quantum_op_apply");
    ExactMatrix out(p.rows(), p.rows());
    for (int i = 1; i <= p.n_vars(); ++i) out += p.coeff(i) * b * p.coeff(i).adjoint();
    return out;
}

// ---------------------------------------------------------------------------
// Exact subspace helpers

namespace detail {

/// Basis of sum_i Ai V.
inline ExactMatrix image_of(const LinearPencil& p, const ExactMatrix& v) {
    std::vector<ExactMatrix> parts;
    for (int i = 1; i <= p.n_vars(); ++i) parts.push_back(p.coeff(i) * v);
    if (parts.empty()) return ExactMatrix(p.rows(), 0);
    return ExactMatrix::hstack(parts).column_basis();
}

/// Basis of {v : Ai v in W for all i}.
inline ExactMatrix preimage_of(const LinearPencil& p, const ExactMatrix& w) {
    const std::size_t n = p.cols();
    ExactMatrix perp = w.cols() == 0 ? ExactMatrix::identity(p.rows()) : w.adjoint().kernel();
    if (perp.cols() == 0) return ExactMatrix::identity(n);
    std::vector<ExactMatrix> rows;
    for (int i = 1; i <= p.n_vars(); ++i) rows.push_back(perp.adjoint() * p.coeff(i));
    if (rows.empty()) return ExactMatrix::identity(n);
    return ExactMatrix::vstack(rows).kernel();
}

/// Numeric subspace -> exact subspace: row-reduce the basis and snap every entry.
inline std::optional<ExactMatrix> snap_subspace(const Eigen::MatrixXcd& basis, long long max_den = 1000,
                                                double tol = 1e-6) {
    const Eigen::Index k = basis.cols(), n = basis.rows();
    if (k == 0) return ExactMatrix(static_cast<std::size_t>(n), 0);
    Eigen::MatrixXcd m = basis.transpose();
    const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < n && row < k; ++col) {
        Eigen::Index best = row;
        for (Eigen::Index r = row + 1; r < k; ++r)
            if (std::abs(m(r, col)) > std::abs(m(best, col))) best = r;
        if (std::abs(m(best, col)) < 1e-8 * scale) continue;
        m.row(row).swap(m.row(best));
        m.row(row) /= m(row, col);
        for (Eigen::Index r = 0; r < k; ++r)
            if (r != row) m.row(r) -= m(r, col) * m.row(row);
        ++row;
    }
    if (row < k) return std::nullopt;
    ExactMatrix out(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            auto s = snap_gaussian(m(r, c), max_den, tol);
            if (!s) return std::nullopt;
            out(static_cast<std::size_t>(c), static_cast<std::size_t>(r)) = *s;
        }
    if (out.rank() != static_cast<std::size_t>(k)) return std::nullopt;
    return out;
}

/// From a candidate V, the largest subspace with the same image; a witness if it shrinks.
inline std::optional<ExactMatrix> close_candidate(const LinearPencil& p, const ExactMatrix& v) {
    ExactMatrix w = image_of(p, v);
    ExactMatrix v2 = preimage_of(p, w);
    if (v2.cols() > w.cols()) return v2;
    return std::nullopt;
}

/// From a candidate image W, its preimage; a witness if it is larger than W.
inline std::optional<ExactMatrix> close_image(const LinearPencil& p, const ExactMatrix& w) {
    ExactMatrix v = preimage_of(p, w);
    if (v.cols() > image_of(p, v).cols()) return v;
    return std::nullopt;
}

}  // namespace detail

/// Exact check that V spans a rank-decreasing direction: rank L(V V*) < rank(V V*).
inline bool verify_witness(const LinearPencil& p, const ExactMatrix& basis) {
    require_homogeneous_square(p, "verify_witness");
    if (basis.rows() != p.rows()) throw DimensionMismatch("witness has the wrong number of rows");
    ExactMatrix b = basis * basis.adjoint();
    const std::size_t rb = b.rank();
    if (rb == 0) return false;
    return quantum_op_apply(p, b).rank() < rb;
}

// ---------------------------------------------------------------------------
// Operator scaling

enum class Verdict { full, nonfull, inconclusive };
enum class CertMethod { scaling, substitution, hollow };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::full: return "full";
        case Verdict::nonfull: return "nonfull";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

inline std::string to_string(CertMethod m) {
    switch (m) {
        case CertMethod::scaling: return "scaling";
        case CertMethod::substitution: return "substitution";
        case CertMethod::hollow: return "hollow";
    }
    return "?";
}

struct FullnessCertificate {
    Verdict verdict = Verdict::inconclusive;
    CertMethod method = CertMethod::scaling;
    std::optional<ExactMatrix> witness;        // basis of V; B = V V*
    std::optional<ZeroBlock> hollow_block;
    double defect = 0.0;                       // last doubly-stochastic defect
    int iterations = 0;
    std::string note;
};

struct ScalingOptions {
    int max_iterations = 0;  // 0: 200 N^2
    /// Try the zero-pattern of a random blow-up kernel when the budget runs out.
    bool kernel_fallback = true;
    std::uint64_t fallback_seed = 7;
};

namespace detail {

inline Eigen::MatrixXcd inverse_sqrt(const Eigen::MatrixXcd& h, bool& singular) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    singular = ev.minCoeff() <= 1e-13 * top;
    if (singular) return {};
    return es.eigenvectors() * ev.cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

inline std::optional<ExactMatrix> witness_from_scalings(const LinearPencil& p, const Eigen::MatrixXcd& ctot,
                                                        const Eigen::MatrixXcd& dtot) {
    const auto n = static_cast<Eigen::Index>(p.rows());
    // The right scaling grows along the shrunk subspace V.
    Eigen::JacobiSVD<Eigen::MatrixXcd> sd(dtot, Eigen::ComputeFullU);
    for (Eigen::Index k = 1; k < n; ++k)
        if (auto v = snap_subspace(sd.matrixU().leftCols(k)))
            if (auto w = close_candidate(p, *v)) return w;
    // The left scaling shrinks along the image A V.
    Eigen::JacobiSVD<Eigen::MatrixXcd> sc(ctot, Eigen::ComputeFullV);
    for (Eigen::Index m = 1; m < n; ++m)
        if (auto w = snap_subspace(sc.matrixV().rightCols(m)))
            if (auto v = close_image(p, *w)) return v;
    return std::nullopt;
}

/// Column support of the kernel of A(X) at a random (Ginibre) blow-up.
inline std::optional<ExactMatrix> witness_from_kernel(const LinearPencil& p, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(p.rows());
    const int d = static_cast<int>(n) + 1;
    MatrixModel x = sample(ModelKind::ginibre, d, p.n_vars(), seed);
    Eigen::MatrixXcd m = evaluate_pencil(p, x.matrices, d);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    RankReport rr = empirical_rank(m);
    const auto kdim = static_cast<Eigen::Index>(m.cols()) - static_cast<Eigen::Index>(rr.rank);
    if (kdim <= 0) return std::nullopt;
    Eigen::MatrixXcd support(n, kdim * d);
    for (Eigen::Index j = 0; j < kdim; ++j) {
        Eigen::VectorXcd z = svd.matrixV().col(m.cols() - 1 - j);
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index c = 0; c < n; ++c) support(c, j * d + a) = z(c * d + a);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> ss(support, Eigen::ComputeFullU);
    RankReport sr = empirical_rank(support, RankPolicy{1e-9, 1.0, 1.0});
    if (sr.rank == 0) return std::nullopt;
    auto v = snap_subspace(ss.matrixU().leftCols(static_cast<Eigen::Index>(sr.rank)));
    if (!v) return std::nullopt;
    return close_candidate(p, *v);
}

}  // namespace detail

/// Fullness of a homogeneous square pencil by operator scaling.
/// Full when sum ||L(I) - I||^2 + ||L*(I) - I||^2 < 1/(N+1); nonfull only with an exact witness.
inline FullnessCertificate fullness_scaling(const LinearPencil& p, const ScalingOptions& opts = {}) {
    require_homogeneous_square(p, "fullness_scaling");
    if (p.is_zero()) throw ZeroPencil("fullness_scaling: pencil is identically zero");
    const std::size_t nn = p.rows();
    const auto n = static_cast<Eigen::Index>(nn);
    FullnessCertificate cert;
    cert.method = CertMethod::scaling;

    auto nonfull = [&](ExactMatrix v, std::string note) {
        cert.verdict = Verdict::nonfull;
        cert.witness = std::move(v);
        cert.note = std::move(note);
        return cert;
    };

    // A common kernel V gives L(VV*) = 0. Otherwise L(I) singular: the whole space is shrunk.
    std::vector<ExactMatrix> cols, rows;
    for (int i = 1; i <= p.n_vars(); ++i) {
        cols.push_back(p.coeff(i));
        rows.push_back(p.coeff(i));
    }
    ExactMatrix common = ExactMatrix::vstack(rows).kernel();
    if (common.cols() > 0) return nonfull(common, "common kernel of the coefficients");
    if (ExactMatrix::hstack(cols).rank() < nn) return nonfull(ExactMatrix::identity(nn), "L(I) is singular");

    std::vector<Eigen::MatrixXcd> a;
    for (int i = 1; i <= p.n_vars(); ++i) a.push_back(p.coeff(i).to_complex());
    Eigen::MatrixXcd ctot = Eigen::MatrixXcd::Identity(n, n), dtot = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const int budget = opts.max_iterations > 0 ? opts.max_iterations : 200 * static_cast<int>(nn * nn);
    const double target = 1.0 / static_cast<double>(nn + 1);
    int next_check = 2 * static_cast<int>(nn);

    for (int t = 0; t <= budget; ++t) {
        Eigen::MatrixXcd lr = Eigen::MatrixXcd::Zero(n, n), lc = Eigen::MatrixXcd::Zero(n, n);
        for (const auto& ai : a) {
            lr += ai * ai.adjoint();
            lc += ai.adjoint() * ai;
        }
        cert.defect = (lr - id).squaredNorm() + (lc - id).squaredNorm();
        cert.iterations = t;
        if (cert.defect < target) {
            cert.verdict = Verdict::full;
            return cert;
        }
        if (t == budget) break;
        bool singular = false;
        if (t % 2 == 0) {
            Eigen::MatrixXcd c = detail::inverse_sqrt(lr, singular);
            if (singular) break;
            for (auto& ai : a) ai = c * ai;
            ctot = c * ctot;
            ctot /= ctot.norm();
        } else {
            Eigen::MatrixXcd dm = detail::inverse_sqrt(lc, singular);
            if (singular) break;
            for (auto& ai : a) ai = ai * dm;
            dtot = dtot * dm;
            dtot /= dtot.norm();
        }
        if (t + 1 == next_check) {
            next_check *= 2;
            if (auto w = detail::witness_from_scalings(p, ctot, dtot)) return nonfull(*w, "collapsing subspace");
        }
    }
    if (auto w = detail::witness_from_scalings(p, ctot, dtot)) return nonfull(*w, "collapsing subspace");
    if (opts.kernel_fallback)
        if (auto w = detail::witness_from_kernel(p, opts.fallback_seed))
            return nonfull(*w, "witness from blow-up kernel support");
    cert.verdict = Verdict::inconclusive;
    cert.note = "iteration budget exhausted";
    return cert;
}

// ---------------------------------------------------------------------------
// Substitution

struct SubstitutionOptions {
    std::vector<int> dims;  // empty: {M + 1, 2 (M + 1)} with M the (linearized) size
    int trials = 2;
    std::uint64_t seed = 1;
    ModelKind kind = ModelKind::gue;
    RankPolicy policy;
};

struct SubstitutionSample {
    int d = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::size_t rank = 0;
    double rank_over_d = 0.0;
    long estimate = 0;
    bool exact_multiple = false;
    double gap_ratio = 0.0;
    bool gap_ok = true;
    std::size_t kernel_dim_qr = 0;
    bool duality_ok = true;  // rank + dim ker == cols * d
};

struct FullnessSummary {
    Verdict verdict = Verdict::inconclusive;
    CertMethod method = CertMethod::scaling;
    double defect = 0.0;
    int iterations = 0;
    bool witness_verified = false;
    std::string note;
};

struct RankResult {
    std::size_t rho = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SubstitutionSample> evidence;
    std::size_t confidence = 0;
    std::size_t linearization_extra = 0;  // c in rho(L) = rho(P) + c
    std::optional<FullnessSummary> fullness;  // scaling / hollow cross-check
    bool engines_agree = true;
    std::vector<std::string> notes;
};

namespace detail {

inline std::string describe(const SubstitutionSample& s) {
    std::ostringstream os;
    os << "d=" << s.d << " trial=" << s.trial << " seed=" << s.seed << " rank=" << s.rank << " rank/d=" << s.rank_over_d
       << " gap=" << s.gap_ratio << (s.gap_ok ? "" : " (gap too small)");
    return os.str();
}

}  // namespace detail

/// rho(P) from ranks of P(X) at independent random tuples; every estimate must agree.
/// `shift` replaces P(X) by P(X) - shift * 1 (square P only).
inline RankResult rank_by_substitution(const NcMatrix& p, const SubstitutionOptions& opts,
                                       std::optional<std::complex<double>> shift = std::nullopt) {
    if (p.has_starred()) throw StarredLetter("substitution rank needs a matrix without starred letters");
    if (opts.trials < 2) throw InputError("substitution needs at least 2 trials");
    if (opts.dims.empty()) throw InputError("substitution needs at least one dimension");
    const std::size_t big = std::max(p.rows(), p.cols());
    for (int d : opts.dims)
        if (d < static_cast<int>(big) + 1)
            throw InputError("substitution dimension " + std::to_string(d) + " is below size + 1 = " +
                             std::to_string(big + 1));
    if (shift && !p.is_square()) throw DimensionMismatch("shifted substitution requires a square matrix");

    RankResult res;
    res.rows = p.rows();
    res.cols = p.cols();
    const std::size_t per = static_cast<std::size_t>(opts.trials);
    res.evidence.resize(opts.dims.size() * per);
    parallel_for(res.evidence.size(), [&](std::size_t idx) {
        const int d = opts.dims[idx / per];
        SubstitutionSample s;
        s.d = d;
        s.trial = static_cast<int>(idx % per);
        s.seed = opts.seed + idx;
        MatrixModel x = sample(opts.kind, d, std::max(1, p.n_vars()), s.seed);
        if (p.n_vars() == 0) x.matrices.clear();
        Eigen::MatrixXcd m = evaluate(p, x);
        if (shift) m.diagonal().array() -= *shift;
        RankReport rr = empirical_rank(m, opts.policy);
        s.rank = rr.rank;
        s.rank_over_d = static_cast<double>(rr.rank) / d;
        s.estimate = std::lround(s.rank_over_d);
        s.exact_multiple = rr.rank % static_cast<std::size_t>(d) == 0;
        s.gap_ratio = rr.gap_ratio;
        s.gap_ok = rr.gap_ok;
        s.kernel_dim_qr = rr.kernel_dim_qr;
        s.duality_ok = rr.rank + rr.kernel_dim_qr == rr.cols;
        res.evidence[idx] = s;
    });

    const long first = res.evidence.front().estimate;
    bool agree = true, gaps = true;
    for (const auto& s : res.evidence) {
        agree = agree && s.estimate == first;
        gaps = gaps && s.gap_ok;
    }
    if (!agree || !gaps) {
        std::vector<std::string> diag;
        for (const auto& s : res.evidence) diag.push_back(detail::describe(s));
        throw NoConsensus(agree ? "singular-value gap below the required ratio" : "substitution estimates disagree",
                          diag);
    }
    res.rho = static_cast<std::size_t>(first);
    res.confidence = res.evidence.size();
    for (const auto& s : res.evidence)
        if (!s.exact_multiple) {
            res.notes.push_back("rank is not an exact multiple of d at d=" + std::to_string(s.d));
            break;
        }
    return res;
}

inline RankResult rank_by_substitution(const NcMatrix& p, const std::vector<int>& dims, int trials, std::uint64_t seed) {
    SubstitutionOptions o;
    o.dims = dims;
    o.trials = trials;
    o.seed = seed;
    return rank_by_substitution(p, o);
}

/// Default dimensions {M + 1, 2 (M + 1)}.
inline std::vector<int> default_dims(std::size_t m) {
    const int a = static_cast<int>(m) + 1;
    return {a, 2 * a};
}

// ---------------------------------------------------------------------------
// Homogenization and linearization

/// A0 + sum Ai xi  ->  A0 x0 + sum Ai xi over n + 1 letters (x0 becomes letter 1).
inline LinearPencil homogenize(const LinearPencil& p) {
    if (!p.is_square()) throw DimensionMismatch("homogenize requires a square pencil");
    std::vector<ExactMatrix> c;
    c.reserve(p.coeffs().size() + 1);
    c.emplace_back(p.rows(), p.cols());
    for (const auto& a : p.coeffs()) c.push_back(a);
    LinearPencil out(p.n_vars() + 1, std::move(c));
#ifdef NCFIELD_CHECKED
    if (!p.is_zero()) {
        SubstitutionOptions o;
        o.dims = default_dims(p.rows());
        o.seed = 9001;
        const std::size_t r_in = rank_by_substitution(pencil_to_matrix(p), o).rho;
        const std::size_t r_out = rank_by_substitution(pencil_to_matrix(out), o).rho;
        if ((r_in == p.rows()) != (r_out == p.rows()))
            throw InvariantViolation("homogenization changed fullness: " + std::to_string(r_in) + " vs " +
                                     std::to_string(r_out));
    }
#endif
    return out;
}

struct Linearization {
    LinearPencil pencil;
    std::size_t extra = 0;  // rho(pencil) = rho(P) + extra
};

/// Repeatedly borders a term a*l*w' (deg >= 2) at (i, j): new index k with
/// L(i,j) -= a l w', L(i,k) = a l, L(k,j) = -w', L(k,k) = 1. The Schur complement
/// of the new unit corner is the old matrix, so the inner rank rises by exactly 1.
inline Linearization linearize(const NcMatrix& p) {
    if (!p.is_square()) throw DimensionMismatch("linearize requires a square matrix");
    if (p.has_starred()) throw StarredLetter("linearize needs a matrix without starred letters");
    const int nv = p.n_vars();
    std::vector<std::vector<NcPoly>> m(p.rows(), std::vector<NcPoly>(p.rows(), NcPoly(nv)));
    for (std::size_t r = 0; r < p.rows(); ++r)
        for (std::size_t c = 0; c < p.cols(); ++c) m[r][c] = p(r, c);
    std::size_t extra = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            while (true) {
                const NcPoly& e = m[i][j];
                auto it = std::find_if(e.terms().begin(), e.terms().end(), [](const auto& t) { return t.first.size() >= 2; });
                if (it == e.terms().end()) break;
                const Word w = it->first;
                const ExactScalar a = it->second;
                const std::size_t k = m.size();
                for (auto& row : m) row.emplace_back(nv);
                m.emplace_back(k + 1, NcPoly(nv));
                m[i][j].add_term(w, a * ExactScalar(-1));
                m[i][k].add_term(Word{w.front()}, a);
                m[k][j].add_term(Word(w.begin() + 1, w.end()), ExactScalar(-1));
                m[k][k].add_term(Word{}, ExactScalar(1));
                ++extra;
            }
        }
    }
    NcMatrix out(m.size(), m.size(), nv);
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < m.size(); ++c) out(r, c) = m[r][c];
    return {matrix_to_pencil(out), extra};
}

// ---------------------------------------------------------------------------
// Cross-validated inner rank

struct NcRankOptions {
    SubstitutionOptions substitution;
    ScalingOptions scaling;
    bool use_scaling = true;
    std::size_t scaling_max_size = 16;  // skip scaling for larger linearizations
    bool require_cross_check = false;   // throw Inconclusive when scaling cannot decide
};

namespace detail {

inline FullnessSummary summarize(const FullnessCertificate& c, const LinearPencil& hom) {
    FullnessSummary s;
    s.verdict = c.verdict;
    s.method = c.method;
    s.defect = c.defect;
    s.iterations = c.iterations;
    s.note = c.note;
    if (c.witness) s.witness_verified = verify_witness(hom, *c.witness);
    return s;
}

inline RankResult ncrank_impl(const NcMatrix& p, const NcRankOptions& opts, std::optional<std::complex<double>> shift) {
    if (p.has_starred()) throw StarredLetter("ncrank needs a matrix without starred letters");
    NcMatrix q = p.padded_square();
    const std::size_t n = q.rows();

    Linearization lin = q.degree() <= 1 ? Linearization{matrix_to_pencil(q), 0} : linearize(q);
    const std::size_t msize = lin.pencil.rows();

    SubstitutionOptions so = opts.substitution;
    if (so.dims.empty()) so.dims = default_dims(msize);
    RankResult res = rank_by_substitution(q, so, shift);
    res.rows = p.rows();
    res.cols = p.cols();
    res.linearization_extra = lin.extra;
    res.rho = std::min(res.rho, std::min(p.rows(), p.cols()));
    if (n == 0) return res;
    const bool sub_full = res.rho == n;

    if (shift) {
        res.notes.push_back("numeric shift: scaling cross-check skipped");
        return res;
    }
    if (auto block = hollow_check(q)) {
        FullnessSummary s;
        s.verdict = Verdict::nonfull;
        s.method = CertMethod::hollow;
        s.witness_verified = true;
        s.note = std::to_string(block->rows.size()) + "x" + std::to_string(block->cols.size()) + " zero block";
        res.fullness = s;
        if (sub_full) {
            res.engines_agree = false;
            throw EngineDisagreement("zero pattern is hollow but substitution reports full rank");
        }
        return res;
    }
    if (!opts.use_scaling || lin.pencil.is_zero()) return res;
    if (msize > opts.scaling_max_size) {
        res.notes.push_back("scaling skipped: linearized size " + std::to_string(msize) + " exceeds " +
                            std::to_string(opts.scaling_max_size));
        return res;
    }
    LinearPencil hom = lin.pencil.is_homogeneous() ? lin.pencil : homogenize(lin.pencil);
    FullnessCertificate cert = fullness_scaling(hom, opts.scaling);
    res.fullness = summarize(cert, hom);
    if (cert.verdict == Verdict::inconclusive) {
        res.notes.push_back("scaling inconclusive after " + std::to_string(cert.iterations) + " iterations");
        if (opts.require_cross_check) throw Inconclusive("scaling did not decide fullness; substitution only");
        return res;
    }
    if (cert.verdict == Verdict::nonfull && !res.fullness->witness_verified)
        throw InvariantViolation("scaling witness failed exact verification");
    const bool scale_full = cert.verdict == Verdict::full;
    if (scale_full != sub_full) {
        res.engines_agree = false;
        throw EngineDisagreement("scaling says " + to_string(cert.verdict) + ", substitution gives rho = " +
                                 std::to_string(res.rho) + " of " + std::to_string(n));
    }
    return res;
}

}  // namespace detail

/// Inner rank with cross-checks (substitution; zero pattern; scaling on the homogenized linearization).
inline RankResult ncrank(const NcMatrix& p, const NcRankOptions& opts = {}) {
    return detail::ncrank_impl(p, opts, std::nullopt);
}

inline RankResult ncrank(const LinearPencil& p, const NcRankOptions& opts = {}) {
    return ncrank(pencil_to_matrix(p), opts);
}

/// rho(P - lambda 1) for a numeric (non-snappable) lambda; substitution only.
inline RankResult ncrank_shifted(const NcMatrix& p, std::complex<double> lambda, const NcRankOptions& opts = {}) {
    return detail::ncrank_impl(p, opts, lambda);
}

/// Fullness certificate for a square pencil: zero pattern, then scaling, then substitution.
inline FullnessCertificate certify_fullness(const LinearPencil& p, const NcRankOptions& opts = {}) {
    if (!p.is_square()) throw DimensionMismatch("certify_fullness requires a square pencil");
    FullnessCertificate cert;
    if (auto block = hollow_check(p)) {
        cert.verdict = Verdict::nonfull;
        cert.method = CertMethod::hollow;
        cert.hollow_block = block;
        return cert;
    }
    if (p.is_zero()) {
        cert.verdict = Verdict::nonfull;
        cert.method = CertMethod::hollow;
        return cert;
    }
    LinearPencil hom = p.is_homogeneous() ? p : homogenize(p);
    cert = fullness_scaling(hom, opts.scaling);
    if (cert.verdict != Verdict::inconclusive) return cert;
    SubstitutionOptions so = opts.substitution;
    if (so.dims.empty()) so.dims = default_dims(p.rows());
    RankResult r = rank_by_substitution(pencil_to_matrix(p), so);
    cert.verdict = r.rho == p.rows() ? Verdict::full : Verdict::nonfull;
    cert.method = CertMethod::substitution;
    cert.note = "scaling inconclusive; substitution rho = " + std::to_string(r.rho);
    return cert;
}

}  // namespace ncfield
