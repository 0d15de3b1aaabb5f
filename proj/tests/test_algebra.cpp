#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using namespace ncfield;

namespace {

NcPoly P(const char* s, int n = 2) { return NcPoly::parse(s, n); }

Word W(std::initializer_list<int> vars) {
    Word w;
    for (int v : vars) w.push_back(Letter{v, false});
    return w;
}

}  // namespace

TEST_CASE("scalar literals and canonical text", "[scalar]") {
    CHECK(ExactScalar::parse("3/2").str() == "3/2");
    CHECK(ExactScalar::parse("1/2i").str() == "1/2i");
    CHECK(ExactScalar::parse("3/2+1/2i").str() == "3/2+1/2i");
    CHECK(ExactScalar::parse("-6/4-2i").str() == "-3/2-2i");
    CHECK(ExactScalar::parse("0").is_zero());
    CHECK(ExactScalar::parse("-1+i") == ExactScalar(Rational(-1), Rational(1)));
    CHECK(ExactScalar::parse("2-i") == ExactScalar(Rational(2), Rational(-1)));
    CHECK(ExactScalar::parse("-i") == ExactScalar(Rational(0), Rational(-1)));
    CHECK_THROWS_AS(ExactScalar::parse("1+in"), Error);
    CHECK_THROWS_AS(ExactScalar::parse("1/0"), Error);
    CHECK_THROWS_AS(ExactScalar::parse("abc"), Error);
    ExactScalar a(Rational(1, 2), Rational(1)), b(Rational(-3), Rational(2, 3));
    CHECK((a * b) / b == a);
    CHECK((a * a.conj()).is_real());
    CHECK(a.norm2() == Rational(5, 4));
    CHECK_THROWS(a / ExactScalar(0));
}

TEST_CASE("best rational and snapping", "[scalar]") {
    CHECK(best_rational(0.3333333333, 64) == Rational(1, 3));
    CHECK(best_rational(-2.5, 64) == Rational(-5, 2));
    auto s = snap_gaussian({0.5 + 1e-5, -0.25}, 64, 1e-3);
    REQUIRE(s);
    CHECK(*s == ExactScalar(Rational(1, 2), Rational(-1, 4)));
    CHECK_FALSE(snap_gaussian({0.123456, 0.0}, 4, 1e-3));
    CHECK(rational_from_double(0.75) == Rational(3, 4));
}

TEST_CASE("poly_add examples", "[ncpoly]") {
    NcPoly x1 = NcPoly::variable(2, 1), x2 = NcPoly::variable(2, 2);
    CHECK((x1 + (-x1)).is_zero());
    NcPoly s = x1 + x2;
    CHECK(s.terms().size() == 2);
    CHECK(s.coefficient(W({1})) == ExactScalar(1));
    CHECK(s.coefficient(W({2})) == ExactScalar(1));
    NcPoly t = (x1 * x2 + NcPoly::one(2)) + x1 * x2;
    CHECK(t == P("2*x1*x2 + 1"));
    CHECK_THROWS_AS(x1 + NcPoly::variable(3, 1), DimensionMismatch);
}

TEST_CASE("poly_mul examples", "[ncpoly]") {
    NcPoly x1 = NcPoly::variable(2, 1), x2 = NcPoly::variable(2, 2);
    CHECK(x1 * x2 != x2 * x1);
    CHECK((x1 * x2).coefficient(W({1, 2})) == ExactScalar(1));
    NcPoly p = P("(1+2i)*x1*x2 - x2 + 3");
    CHECK(NcPoly::one(2) * p == p);
    CHECK((x1 + NcPoly::one(2)) * (x1 - NcPoly::one(2)) == P("x1*x1 - 1"));
    CHECK((p * p).degree() == 4);
}

TEST_CASE("poly_adjoint examples", "[ncpoly]") {
    NcPoly p = NcPoly::monomial(2, W({1, 2}), ExactScalar::i());
    NcPoly expect = NcPoly::monomial(2, Word{Letter{2, true}, Letter{1, true}}, ExactScalar(0, -1));
    CHECK(p.adjoint() == expect);
    NcPoly x1s = NcPoly::variable(2, 1, true);
    CHECK(x1s.adjoint().adjoint() == x1s);
    CHECK(x1s.adjoint() == NcPoly::variable(2, 1));
    NcPoly h = NcPoly::variable(2, 1) + x1s;
    CHECK(h.adjoint() == h);
}

TEST_CASE("canonical polynomial text", "[ncpoly]") {
    NcPoly p = NcPoly::monomial(2, Word{Letter{1, false}, Letter{2, true}}, ExactScalar(Rational(3, 2), Rational(1, 2))) +
               NcPoly::one(2);
    CHECK(p.str() == "(3/2+1/2i)*x1*x2* + 1");
    CHECK(NcPoly(2).str() == "0");
    CHECK(P("x1 - 2*x2*x1").str() == "-2*x2*x1 + x1");
    CHECK(NcPoly::parse(p.str(), 2) == p);
    CHECK_THROWS_AS(P("x3"), UnknownVariable);
    CHECK_THROWS_AS(P("x1 +"), SyntaxError);
}

TEST_CASE("graded lexicographic order", "[ncpoly]") {
    GradedLex lt;
    CHECK(lt(Word{}, W({2})));
    CHECK(lt(W({2}), W({1, 1})));
    CHECK(lt(Word{Letter{1, false}}, Word{Letter{1, true}}));
    CHECK(lt(Word{Letter{1, true}}, Word{Letter{2, false}}));
}

TEST_CASE("ring axioms on random polynomials", "[ncpoly][property]") {
    gen::Rng r(11);
    for (int k = 0; k < 60; ++k) {
        NcPoly a = gen::poly(r, 3, 2, 4, true), b = gen::poly(r, 3, 2, 4, true), c = gen::poly(r, 3, 2, 4, true);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a + b == b + a);
        CHECK((a - a).is_zero());
        if (!a.is_zero() && !b.is_zero()) CHECK((a * b).degree() == a.degree() + b.degree());
    }
}

TEST_CASE("adjoint is an involutive anti-homomorphism", "[ncpoly][property]") {
    gen::Rng r(12);
    for (int k = 0; k < 60; ++k) {
        NcPoly a = gen::poly(r, 2, 3, 4, true), b = gen::poly(r, 2, 3, 4, true);
        CHECK((a * b).adjoint() == b.adjoint() * a.adjoint());
        CHECK((a + b).adjoint() == a.adjoint() + b.adjoint());
        CHECK(a.adjoint().adjoint() == a);
    }
}

TEST_CASE("matrix_to_pencil examples", "[ncpoly]") {
    NcMatrix m(2, 2, 2);
    m(0, 0) = P("x1");
    m(1, 0) = P("x2");
    m(1, 1) = P("1");
    LinearPencil a = matrix_to_pencil(m);
    CHECK(a.coeff(0) == ExactMatrix{{ExactScalar(0), ExactScalar(0)}, {ExactScalar(0), ExactScalar(1)}});
    CHECK(a.coeff(1) == ExactMatrix{{ExactScalar(1), ExactScalar(0)}, {ExactScalar(0), ExactScalar(0)}});
    CHECK(a.coeff(2) == ExactMatrix{{ExactScalar(0), ExactScalar(0)}, {ExactScalar(1), ExactScalar(0)}});
    CHECK(pencil_to_matrix(a) == m);

    LinearPencil z = matrix_to_pencil(NcMatrix(2, 3, 2));
    CHECK(z.is_zero());
    CHECK(z.coeffs().size() == 3);

    NcMatrix sq(1, 1, 1);
    sq(0, 0) = NcPoly::parse("x1*x1", 1);
    CHECK_THROWS_AS(matrix_to_pencil(sq), DegreeTooHigh);
    NcMatrix st(1, 1, 1);
    st(0, 0) = NcPoly::variable(1, 1, true);
    CHECK_THROWS_AS(matrix_to_pencil(st), StarredLetter);
}

TEST_CASE("pencil round trip on random pencils", "[ncpoly][property]") {
    gen::Rng r(13);
    for (int k = 0; k < 30; ++k) {
        LinearPencil a = gen::pencil(r, static_cast<std::size_t>(r.uniform(1, 4)), r.uniform(1, 3), r.coin());
        CHECK(matrix_to_pencil(pencil_to_matrix(a)) == a);
    }
}

TEST_CASE("evaluate examples", "[ncpoly][evaluate]") {
    MatrixModel x = sample(ModelKind::gue, 7, 2, 3);
    Eigen::MatrixXcd id = evaluate(NcMatrix::identity(3, 2), x);
    CHECK((id - Eigen::MatrixXcd::Identity(21, 21)).norm() == 0.0);
    NcMatrix m1(1, 1, 2);
    m1(0, 0) = P("x1");
    CHECK((evaluate(m1, x) - x.var(1)).norm() == 0.0);
    NcMatrix m2(1, 1, 2);
    m2(0, 0) = P("x1*x2 + x2*x1");
    Eigen::MatrixXcd direct = x.var(1) * x.var(2) + x.var(2) * x.var(1);
    CHECK((evaluate(m2, x) - direct).norm() < 1e-13 * direct.norm());
    CHECK_THROWS_AS(evaluate(m2, sample(ModelKind::gue, 7, 3, 3)), DimensionMismatch);
}

TEST_CASE("evaluation agrees with the naive oracle and is multiplicative", "[evaluate][property]") {
    gen::Rng r(14);
    for (int k = 0; k < 15; ++k) {
        const int d = r.uniform(2, 30);
        const std::size_t n1 = static_cast<std::size_t>(r.uniform(1, 3)), n2 = static_cast<std::size_t>(r.uniform(1, 3)),
                          n3 = static_cast<std::size_t>(r.uniform(1, 3));
        NcMatrix p = gen::matrix(r, n1, n2, 2, 2), q = gen::matrix(r, n2, n3, 2, 2);
        for (std::size_t i = 0; i < p.rows(); ++i) p(i, 0) = p(i, 0) + NcPoly::variable(2, 1, true);
        MatrixModel x = sample(ModelKind::ginibre, d, 2, 100 + static_cast<std::uint64_t>(k));
        Eigen::MatrixXcd ep = evaluate(p, x);
        CHECK((ep - oracle::naive_eval(p, x.matrices)).norm() <= 1e-12 * (1 + ep.norm()));
        Eigen::MatrixXcd lhs = evaluate(p * q, x), rhs = ep * evaluate(q, x);
        CHECK((lhs - rhs).norm() <= 1e-9 * (1 + rhs.norm()));
    }
}

TEST_CASE("hollow_check examples", "[hollow]") {
    NcMatrix a(2, 2, 2);
    a(0, 0) = P("x1");
    a(1, 0) = P("x2");
    auto blk = hollow_check(a);
    REQUIRE(blk);
    CHECK(blk->rows == std::vector<std::size_t>{0, 1});
    CHECK(blk->cols == std::vector<std::size_t>{1});

    NcMatrix b(2, 2, 2);
    b(0, 0) = P("x1");
    b(0, 1) = P("x2");
    b(1, 0) = P("x2");
    b(1, 1) = P("x1");
    CHECK_FALSE(hollow_check(b));

    // 3 x 3 with a zero 2 x 2 block top right; oracle: brute force gives best |R|+|C| = 4.
    NcMatrix c(3, 3, 1);
    for (std::size_t i = 0; i < 3; ++i) c(i, 0) = NcPoly::variable(1, 1);
    c(2, 1) = c(2, 2) = NcPoly::one(1);
    CHECK(oracle::best_zero_block(oracle::pattern(c)) == 4);
    auto blk3 = hollow_check(c);
    REQUIRE(blk3);
    CHECK(blk3->rows == std::vector<std::size_t>{0, 1});
    CHECK(blk3->cols == std::vector<std::size_t>{1, 2});

    CHECK_THROWS_AS(hollow_check(NcMatrix(2, 3, 1)), DimensionMismatch);
}

TEST_CASE("hollow_check matches brute force on random patterns", "[hollow][property]") {
    gen::Rng r(15);
    for (int k = 0; k < 400; ++k) {
        const std::size_t n = static_cast<std::size_t>(r.uniform(1, 6));
        const double density = 0.2 + 0.6 * (k % 5) / 4.0;
        std::vector<std::vector<bool>> pat(n, std::vector<bool>(n));
        for (auto& row : pat)
            for (std::size_t c = 0; c < n; ++c) row[c] = r.coin(density);
        auto blk = hollow_block_from_pattern(pat);
        CHECK(blk.has_value() == oracle::brute_hollow(pat));
        if (blk) {
            CHECK(blk->rows.size() + blk->cols.size() > n);
            for (auto i : blk->rows)
                for (auto j : blk->cols) CHECK_FALSE(pat[i][j]);
        }
    }
}

TEST_CASE("expression parser examples", "[ratexpr]") {
    RatExpr e = parse("x2*inv(x1*x2)*x1", 2);
    auto v = [](int i) { return RatExpr::var(i, 2); };
    CHECK(e == (v(2) * (v(1) * v(2)).inv()) * v(1));
    CHECK(parse("inv(x1)", 1) == RatExpr::var(1, 1).inv());
    CHECK(parse("x1 + (2+3i)", 1) == RatExpr::var(1, 1) + RatExpr::constant(ExactScalar(2, 3), 1));
    CHECK(parse("x1 - 2", 1) == RatExpr::var(1, 1) + (-RatExpr::constant(ExactScalar(2), 1)));
    CHECK(parse("-x1*x1", 1) == (-RatExpr::var(1, 1)) * RatExpr::var(1, 1));
    CHECK(parse("x1''", 1) == RatExpr::var(1, 1).star().star());
    CHECK_THROWS_AS(parse("x3", 2), UnknownVariable);
    CHECK_THROWS_AS(parse("x1 +", 1), SyntaxError);
    CHECK_THROWS_AS(parse("inv(x1", 1), SyntaxError);
    try {
        parse("x1 * * x1", 1);
        FAIL("expected a syntax error");
    } catch (const SyntaxError& err) {
        CHECK(err.position() == 5);
    }
}

TEST_CASE("expression adjoint examples", "[ratexpr]") {
    auto x1 = RatExpr::var(1, 2), x2 = RatExpr::var(2, 2);
    CHECK(expr_adjoint(x1) == x1.star());
    CHECK(expr_adjoint(x1 * x2) == expr_adjoint(x2) * expr_adjoint(x1));
    RatExpr a = expr_adjoint((x1 + x1.star()).inv());
    RatExpr b = (x1.star() + x1).inv();
    CHECK(normalize(a) == normalize(b));
}

TEST_CASE("is_polynomial examples", "[ratexpr]") {
    auto p = is_polynomial(parse("x1*x2+1", 2));
    REQUIRE(p);
    CHECK(p->terms().size() == 2);
    CHECK_FALSE(is_polynomial(parse("inv(x1)", 1)));
    auto q = is_polynomial(parse("(x1+1)*(x1-1)", 1));
    REQUIRE(q);
    NcPoly x1 = NcPoly::variable(1, 1), one = NcPoly::one(1);
    CHECK(*q == (x1 + one) * (x1 - one));
}

TEST_CASE("parse of unparse is the identity on random ASTs", "[ratexpr][property]") {
    gen::Rng r(16);
    for (int k = 0; k < 100; ++k) {
        RatExpr e = gen::rat_expr(r, 3, 5, true, true);
        std::string text = unparse(e);
        RatExpr back = parse(text, 3);
        INFO(text);
        CHECK(back == e);
        CHECK(unparse(back) == text);
    }
}

TEST_CASE("adjoint twice is the identity after normalization", "[ratexpr][property]") {
    gen::Rng r(17);
    for (int k = 0; k < 100; ++k) {
        RatExpr e = gen::rat_expr(r, 3, 5, true, true);
        CHECK(normalize(expr_adjoint(expr_adjoint(e))) == normalize(e));
    }
}

TEST_CASE("inv-free expressions evaluate like their polynomials", "[ratexpr][property]") {
    gen::Rng r(18);
    for (int k = 0; k < 40; ++k) {
        RatExpr e = gen::rat_expr(r, 2, 4, false, true);
        auto p = is_polynomial(e);
        REQUIRE(p);
        MatrixModel x = sample(ModelKind::ginibre, r.uniform(1, 20), 2, 200 + static_cast<std::uint64_t>(k));
        Eigen::MatrixXcd a = evaluate_direct(e, x), b = evaluate(*p, x);
        CHECK((a - b).norm() <= 1e-10 * (1 + a.norm()));
    }
}
