#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using namespace ncfield;

namespace {

LinearPencil pencil(int n, std::vector<ExactMatrix> c) { return LinearPencil(n, std::move(c)); }

NcMatrix text(const std::string& s, int n) { return matrix_from_text(s, n); }

std::size_t sub_rank(const NcMatrix& p, std::size_t m, std::uint64_t seed) {
    return rank_by_substitution(p, default_dims(m), 2, seed).rho;
}

// rank(L(VV*)) < rank(VV*) through floating LU, not the exact routine under test.
bool oracle_witness(const LinearPencil& p, const ExactMatrix& v) {
    Eigen::MatrixXcd b = v.to_complex() * v.to_complex().adjoint();
    Eigen::MatrixXcd lb = Eigen::MatrixXcd::Zero(b.rows(), b.cols());
    double scale = b.norm();
    for (int i = 1; i <= p.n_vars(); ++i) {
        Eigen::MatrixXcd a = p.coeff(i).to_complex();
        lb += a * b * a.adjoint();
        scale = std::max(scale, a.squaredNorm() * b.norm());
    }
    return oracle::lu_rank_abs(lb, 1e-9 * scale) < oracle::lu_rank_abs(b, 1e-9 * scale);
}

}  // namespace

TEST_CASE("quantum_op_apply examples", "[ncrank]") {
    auto id = ExactMatrix::identity(2);
    LinearPencil one = pencil(1, {ExactMatrix(2, 2), id});
    Eigen::MatrixXcd b(2, 2);
    b << 2.0, 1.0, 1.0, 3.0;
    CHECK((quantum_op_apply(one, b) - b).norm() == 0.0);
    CHECK(quantum_op_apply(one, Eigen::MatrixXcd::Zero(2, 2)).norm() == 0.0);

    LinearPencil diag = pencil(2, {ExactMatrix(2, 2), ExactMatrix{{1, 0}, {0, 0}}, ExactMatrix{{0, 0}, {0, 1}}});
    CHECK((quantum_op_apply(diag, Eigen::MatrixXcd::Identity(2, 2)) - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);
    CHECK(quantum_op_apply(diag, id) == id);

    CHECK_THROWS_AS(quantum_op_apply(pencil(1, {id, id}), b), InputError);
    CHECK_THROWS_AS(quantum_op_apply(LinearPencil(2, 3, 1), b), DimensionMismatch);
}

TEST_CASE("quantum operator preserves positivity", "[ncrank][property]") {
    gen::Rng r(31);
    for (int k = 0; k < 50; ++k) {
        const auto n = static_cast<std::size_t>(r.uniform(1, 5));
        LinearPencil p = gen::pencil(r, n, r.uniform(1, 3), true);
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Random(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        Eigen::MatrixXcd lb = quantum_op_apply(p, g * g.adjoint());
        CHECK((lb - lb.adjoint()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(lb);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("fullness_scaling examples", "[ncrank]") {
    SECTION("1x1 nonzero scalar") {
        FullnessCertificate c = fullness_scaling(pencil(1, {ExactMatrix(1, 1), ExactMatrix{{1}}}));
        CHECK(c.verdict == Verdict::full);
        CHECK(c.defect < 0.5);
    }
    SECTION("A1 = E12 alone") {
        ExactMatrix e12{{0, 1}, {0, 0}};
        LinearPencil p = pencil(1, {ExactMatrix(2, 2), e12});
        FullnessCertificate c = fullness_scaling(p);
        REQUIRE(c.verdict == Verdict::nonfull);
        REQUIRE(c.witness);
        // Witness is span(e1), and L(e1 e1*) = 0.
        REQUIRE(c.witness->cols() == 1);
        CHECK((*c.witness)(1, 0).is_zero());
        CHECK(quantum_op_apply(p, *c.witness * c.witness->adjoint()).is_zero());
        CHECK(verify_witness(p, *c.witness));
        CHECK(oracle_witness(p, *c.witness));

        // Enumerated rank-one projectors: the only collapsing direction is e1.
        auto hits = oracle::rank_dropping_projectors({e12.to_complex()});
        REQUIRE(hits.size() == 1);
        CHECK(std::abs(hits[0].v(1)) == 0.0);
        CHECK(hits[0].rank_lb == 0);
    }
    SECTION("[[x1, x2], [0, x1]]") {
        LinearPencil p = matrix_to_pencil(text("x1, x2; 0, x1", 2));
        FullnessCertificate c = fullness_scaling(p);
        CHECK(c.verdict == Verdict::full);
        CHECK(c.defect < 1.0 / 3.0);
        // Substitution oracle at d = 3: rank 6.
        RankResult s = rank_by_substitution(pencil_to_matrix(p), {3}, 2, 4);
        for (const auto& e : s.evidence) CHECK(e.rank == 6);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(fullness_scaling(LinearPencil(2, 2, 2)), ZeroPencil);
        CHECK_THROWS_AS(fullness_scaling(pencil(1, {ExactMatrix::identity(2), ExactMatrix::identity(2)})), InputError);
    }
}

TEST_CASE("collapsing subspace found by the iteration", "[ncrank]") {
    // [[x1, x1 x2], [1, x2]] linearized: nonfull, but no common kernel and L(I) invertible.
    Linearization lin = linearize(text("x1, x1*x2; 1, x2", 2));
    LinearPencil hom = homogenize(lin.pencil);
    FullnessCertificate c = fullness_scaling(hom);
    REQUIRE(c.verdict == Verdict::nonfull);
    REQUIRE(c.witness);
    CHECK(oracle_witness(hom, *c.witness));
    CHECK(sub_rank(pencil_to_matrix(lin.pencil), lin.pencil.rows(), 3) < lin.pencil.rows());
}

TEST_CASE("rank_by_substitution examples", "[ncrank]") {
    RankResult sym = rank_by_substitution(text("x1, x2; x2, x1", 2), {8, 16}, 2, 1);
    CHECK(sym.rho == 2);
    CHECK(sym.confidence == 4);
    for (const auto& s : sym.evidence) {
        CHECK(s.exact_multiple);
        CHECK(s.duality_ok);
        CHECK(s.gap_ok);
    }
    CHECK(rank_by_substitution(NcMatrix(2, 2, 2), {3, 6}, 2, 1).rho == 0);
    CHECK(rank_by_substitution(text("x1, x2; x2, x3", 3), {3, 6}, 2, 1).rho == 2);

    SubstitutionOptions g;
    g.dims = {5, 10};
    g.kind = ModelKind::ginibre;
    CHECK(rank_by_substitution(text("x1, x2; x2, x3", 3), g).rho == 2);
    g.kind = ModelKind::haar_unitary;
    CHECK(rank_by_substitution(text("x1, x1*x2; 1, x2", 2), g).rho == 1);
}

TEST_CASE("rank_by_substitution preconditions and consensus", "[ncrank]") {
    NcMatrix sym = text("x1, x2; x2, x1", 2);
    CHECK_THROWS_AS(rank_by_substitution(sym, {8}, 1, 1), InputError);
    CHECK_THROWS_AS(rank_by_substitution(sym, {2, 8}, 2, 1), InputError);
    CHECK_THROWS_AS(rank_by_substitution(sym, {}, 2, 1), InputError);
    CHECK_THROWS_AS(rank_by_substitution(text("x1'", 1), {3}, 2, 1), StarredLetter);

    // An impossible gap requirement on a rank-deficient matrix.
    SubstitutionOptions o;
    o.dims = {4, 8};
    o.policy.min_gap = 1e300;
    try {
        rank_by_substitution(text("x1, 0; 0, 0", 1), o);
        FAIL("expected NoConsensus");
    } catch (const NoConsensus& e) {
        CHECK(e.diagnostics().size() == 4);
    }
}

TEST_CASE("substitution is deterministic given the seed", "[ncrank][property]") {
    NcMatrix p = text("x1, x1*x2; 1, x2", 2);
    RankResult a = rank_by_substitution(p, {4, 8}, 3, 77), b = rank_by_substitution(p, {4, 8}, 3, 77);
    REQUIRE(a.evidence.size() == 6);
    for (std::size_t i = 0; i < a.evidence.size(); ++i) {
        CHECK(a.evidence[i].seed == 77 + i);
        CHECK(a.evidence[i].rank == b.evidence[i].rank);
        CHECK(a.evidence[i].gap_ratio == b.evidence[i].gap_ratio);
    }
}

TEST_CASE("ncrank examples", "[ncrank]") {
    CHECK(ncrank(text("x1", 1)).rho == 1);

    Linearization lin = linearize(text("x1*x2", 2));
    CHECK(lin.extra == 1);
    CHECK(lin.pencil.rows() == 2);
    CHECK(ncrank(lin.pencil).rho == 2);
    RankResult prod = ncrank(text("x1*x2", 2));
    CHECK(prod.rho == 1);
    CHECK(prod.linearization_extra == 1);

    RankResult gram = ncrank(text("x1, x2; x2, x3", 3));
    CHECK(gram.rho == 2);
    REQUIRE(gram.fullness);
    CHECK(gram.fullness->verdict == Verdict::full);
    CHECK(gram.engines_agree);

    RankResult diag = ncrank(text("x1, 0; 0, 0", 1));
    CHECK(diag.rho == 1);
    REQUIRE(diag.fullness);
    CHECK(diag.fullness->method == CertMethod::hollow);

    CHECK(ncrank(text("x1*x2 - x2*x1", 2)).rho == 1);
    CHECK(ncrank(text("x1, x1*x2; 1, x2", 2)).rho == 1);
    CHECK(ncrank(text("1, x1; x1, 1", 1)).rho == 2);
    CHECK(ncrank(NcMatrix(2, 2, 1)).rho == 0);

    // Rectangular inputs are padded.
    RankResult row = ncrank(text("x1, x2", 2));
    CHECK(row.rho == 1);
    CHECK(row.rows == 1);
    CHECK(row.cols == 2);
    CHECK_THROWS_AS(ncrank(text("x1'", 1)), StarredLetter);
}

TEST_CASE("ncrank on the named matrices", "[ncrank]") {
    // Frozen from substitution at d in {M+1, 2(M+1)}.
    const std::map<std::string, std::size_t> expected = {{"gram3", 2}, {"sym2", 2},      {"diag", 1},   {"upper", 2},
                                                         {"commutator", 1}, {"rank-one", 1}, {"product", 1}};
    for (const auto& [name, txt] : named_matrices()) {
        INFO(name);
        NcMatrix m = matrix_from_text(txt);
        CHECK(ncrank(m).rho == expected.at(name));
        CHECK(sub_rank(m, m.rows() + 4, 11) == expected.at(name));
    }
}

TEST_CASE("homogenize examples", "[ncrank]") {
    auto id = ExactMatrix::identity(2);
    LinearPencil c = homogenize(pencil(0, {id}));
    CHECK(c.n_vars() == 1);
    CHECK(c.is_homogeneous());
    CHECK(c.coeff(1) == id);
    CHECK(fullness_scaling(c).verdict == Verdict::full);

    ExactMatrix e12{{0, 1}, {0, 0}};
    LinearPencil h = homogenize(pencil(1, {ExactMatrix(2, 2), e12}));
    CHECK(h.coeff(1).is_zero());
    CHECK(h.coeff(2) == e12);
    CHECK(fullness_scaling(h).verdict == Verdict::nonfull);

    LinearPencil s = homogenize(pencil(1, {ExactMatrix{{1}}, ExactMatrix{{1}}}));
    CHECK(s.coeff(1) == ExactMatrix{{1}});
    CHECK(s.coeff(2) == ExactMatrix{{1}});
    CHECK(fullness_scaling(s).verdict == Verdict::full);

    CHECK_THROWS_AS(homogenize(LinearPencil(2, 3, 1)), DimensionMismatch);
}

TEST_CASE("method agreement on random pencils", "[ncrank][property]") {
    gen::Rng r(32);
    int decided = 0, nonfull = 0;
    for (int k = 0; k < 100; ++k) {
        const auto n = static_cast<std::size_t>(r.uniform(1, 5));
        const int vars = r.uniform(1, 3);
        const bool hom = r.coin(0.3);
        const bool hidden = k % 2 == 1 && n > 1;
        LinearPencil p = hidden ? gen::hidden_nonfull_pencil(r, n, vars, hom) : gen::pencil(r, n, vars, hom);
        if (p.is_zero()) continue;
        INFO("k=" << k << " n=" << n << " vars=" << vars);
        const bool sub_full = sub_rank(pencil_to_matrix(p), n, 100 + static_cast<std::uint64_t>(k)) == n;
        if (hidden) CHECK_FALSE(sub_full);
        LinearPencil h = hom ? p : homogenize(p);
        FullnessCertificate c = fullness_scaling(h);
        if (c.verdict == Verdict::inconclusive) continue;
        ++decided;
        CHECK((c.verdict == Verdict::full) == sub_full);
        if (c.verdict == Verdict::nonfull) {
            ++nonfull;
            REQUIRE(c.witness);
            CHECK(verify_witness(h, *c.witness));
            CHECK(oracle_witness(h, *c.witness));
        }
    }
    CHECK(decided >= 90);
    CHECK(nonfull >= 40);
}

TEST_CASE("hollow implies nonfull", "[ncrank][property]") {
    gen::Rng r(33);
    for (int k = 0; k < 30; ++k) {
        const auto n = static_cast<std::size_t>(r.uniform(1, 4));
        NcMatrix m = gen::hollow_matrix(r, n, 2, 2);
        REQUIRE(hollow_check(m));
        RankResult res = ncrank(m);
        CHECK(res.rho < n);
        REQUIRE(res.fullness);
        CHECK(res.fullness->verdict == Verdict::nonfull);
    }
}

TEST_CASE("rank bounds under products and diagonal sums", "[ncrank][property]") {
    gen::Rng r(34);
    auto random_linear = [&](std::size_t n) {
        LinearPencil p = r.coin(0.4) && n > 1 ? gen::hidden_nonfull_pencil(r, n, 2, false) : gen::pencil(r, n, 2, false, 0.6);
        return pencil_to_matrix(p);
    };
    for (int k = 0; k < 15; ++k) {
        const auto n = static_cast<std::size_t>(r.uniform(1, 3));
        NcMatrix p = random_linear(n), q = random_linear(n);
        const std::size_t rp = ncrank(p).rho, rq = ncrank(q).rho;
        INFO("k=" << k << " P=" << p.str() << " Q=" << q.str());
        CHECK(ncrank(p * q).rho <= std::min(rp, rq));
        CHECK(ncrank(direct_sum(p, q)).rho == rp + rq);
    }
}

TEST_CASE("invertible congruence leaves rho unchanged", "[ncrank][property]") {
    gen::Rng r(35);
    for (int k = 0; k < 20; ++k) {
        const auto n = static_cast<std::size_t>(r.uniform(1, 4));
        LinearPencil p = k % 2 ? gen::hidden_nonfull_pencil(r, std::max<std::size_t>(n, 2), 2, false) : gen::pencil(r, n, 2, false);
        const std::size_t m = p.rows();
        ExactMatrix u = gen::invertible(r, m, true), v = gen::invertible(r, m);
        const std::size_t before = ncrank(p).rho;
        CHECK(ncrank(p.congruence(u, v)).rho == before);
        // Same through the polynomial-matrix product.
        CHECK(ncrank(u * pencil_to_matrix(p) * v).rho == before);
    }
}

TEST_CASE("linearization adds exactly the bordered corners", "[ncrank][property]") {
    gen::Rng r(36);
    for (int k = 0; k < 25; ++k) {
        const auto n = static_cast<std::size_t>(r.uniform(1, 3));
        NcMatrix p = gen::matrix(r, n, n, 2, 3);
        Linearization lin = linearize(p);
        const std::size_t m = lin.pencil.rows();
        REQUIRE(m == n + lin.extra);

        // Schur complement of the corner block reproduces P(X).
        const int d = 4;
        MatrixModel x = sample(ModelKind::ginibre, d, 2, 900 + static_cast<std::uint64_t>(k));
        Eigen::MatrixXcd l = evaluate(lin.pencil, x);
        const auto a = static_cast<Eigen::Index>(n) * d, b = static_cast<Eigen::Index>(lin.extra) * d;
        Eigen::MatrixXcd schur = l.topLeftCorner(a, a);
        if (b > 0) schur -= l.topRightCorner(a, b) * l.bottomRightCorner(b, b).fullPivLu().solve(l.bottomLeftCorner(b, a));
        Eigen::MatrixXcd direct = oracle::naive_eval(p, x.matrices);
        CHECK((schur - direct).norm() <= 1e-8 * std::max(1.0, direct.norm()));

        INFO(p.str());
        CHECK(sub_rank(pencil_to_matrix(lin.pencil), m, 40 + static_cast<std::uint64_t>(k)) ==
              sub_rank(p, m, 60 + static_cast<std::uint64_t>(k)) + lin.extra);
    }
}

TEST_CASE("certify_fullness routes", "[ncrank]") {
    FullnessCertificate h = certify_fullness(matrix_to_pencil(text("x1, 0; x2, 0", 2)));
    CHECK(h.verdict == Verdict::nonfull);
    CHECK(h.method == CertMethod::hollow);
    REQUIRE(h.hollow_block);
    FullnessCertificate s = certify_fullness(matrix_to_pencil(text("x1, x2; x2, x1", 2)));
    CHECK(s.verdict == Verdict::full);
    CHECK(s.method == CertMethod::scaling);
    CHECK(to_string(Verdict::nonfull) == "nonfull");
    CHECK(to_string(CertMethod::substitution) == "substitution");
}

TEST_CASE("short scaling budget never yields a false nonfull", "[ncrank]") {
    LinearPencil p = matrix_to_pencil(text("x1, 10*x2; 0, x1", 2));
    ScalingOptions o;
    o.max_iterations = 1;
    o.kernel_fallback = false;
    FullnessCertificate c = fullness_scaling(p, o);
    CHECK(c.verdict != Verdict::nonfull);
    if (c.verdict == Verdict::inconclusive) {
        NcRankOptions ro;
        ro.scaling = o;
        ro.require_cross_check = true;
        CHECK_THROWS_AS(ncrank(p, ro), Inconclusive);
        ro.require_cross_check = false;
        RankResult res = ncrank(p, ro);
        CHECK(res.rho == 2);
        CHECK_FALSE(res.notes.empty());
    }
}
