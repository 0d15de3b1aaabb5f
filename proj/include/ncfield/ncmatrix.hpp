#pragma once

// Matrices over the free algebra and linear pencils A0 + A1 x1 + ... + An xn.

#include <string>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/exact_matrix.hpp"
#include "ncfield/ncpoly.hpp"

namespace ncfield {

class NcMatrix {
public:
    NcMatrix() = default;
    NcMatrix(std::size_t rows, std::size_t cols, int n_vars)
        : rows_(rows), cols_(cols), n_vars_(n_vars), entries_(rows * cols, NcPoly(n_vars)) {}

    static NcMatrix identity(std::size_t n, int n_vars) {
        NcMatrix m(n, n, n_vars);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = NcPoly::one(n_vars);
        return m;
    }

    static NcMatrix from_scalars(const ExactMatrix& a, int n_vars) {
        NcMatrix m(a.rows(), a.cols(), n_vars);
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = NcPoly::constant(n_vars, a(r, c));
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    int n_vars() const noexcept { return n_vars_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    NcPoly& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const NcPoly& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    /// Assigns an entry after checking it lives over the same variable set.
    void set(std::size_t r, std::size_t c, NcPoly p) {
        if (p.n_vars() != n_vars_) throw DimensionMismatch("entry variable count differs from matrix");
        (*this)(r, c) = std::move(p);
    }

    int degree() const {
        int d = 0;
        for (const auto& e : entries_) d = std::max(d, e.degree());
        return d;
    }

    bool has_starred() const {
        for (const auto& e : entries_)
            if (e.has_starred()) return true;
        return false;
    }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (!e.is_zero()) return false;
        return true;
    }

    NcMatrix adjoint() const {
        NcMatrix m(cols_, rows_, n_vars_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c).adjoint();
        return m;
    }

    /// P - lambda * 1 (square only).
    NcMatrix shifted(const ExactScalar& lambda) const {
        if (!is_square()) throw DimensionMismatch("shift requires a square matrix");
        NcMatrix m = *this;
        for (std::size_t i = 0; i < rows_; ++i) m(i, i) -= NcPoly::constant(n_vars_, lambda);
        return m;
    }

    /// Pads with zero rows/columns to a square matrix.
    NcMatrix padded_square() const {
        std::size_t n = std::max(rows_, cols_);
        NcMatrix m(n, n, n_vars_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
        return m;
    }

    friend NcMatrix operator+(const NcMatrix& a, const NcMatrix& b) {
        a.check_same(b);
        NcMatrix m = a;
        for (std::size_t i = 0; i < m.entries_.size(); ++i) m.entries_[i] += b.entries_[i];
        return m;
    }
    friend NcMatrix operator-(const NcMatrix& a, const NcMatrix& b) {
        a.check_same(b);
        NcMatrix m = a;
        for (std::size_t i = 0; i < m.entries_.size(); ++i) m.entries_[i] -= b.entries_[i];
        return m;
    }
    friend NcMatrix operator*(const NcMatrix& a, const NcMatrix& b) {
        if (a.n_vars_ != b.n_vars_) throw DimensionMismatch("matrices over different variable counts");
        if (a.cols_ != b.rows_) throw DimensionMismatch("NcMatrix product: inner dimensions differ");
        NcMatrix m(a.rows_, b.cols_, a.n_vars_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(r, k).is_zero()) continue;
                for (std::size_t c = 0; c < b.cols_; ++c)
                    if (!b(k, c).is_zero()) m(r, c) += a(r, k) * b(k, c);
            }
        return m;
    }
    friend NcMatrix operator*(const ExactMatrix& s, const NcMatrix& a) { return from_scalars(s, a.n_vars_) * a; }
    friend NcMatrix operator*(const NcMatrix& a, const ExactMatrix& s) { return a * from_scalars(s, a.n_vars_); }

    friend bool operator==(const NcMatrix& a, const NcMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.n_vars_ == b.n_vars_ && a.entries_ == b.entries_;
    }

    /// Block diagonal sum P (+) Q.
    friend NcMatrix direct_sum(const NcMatrix& a, const NcMatrix& b) {
        if (a.n_vars_ != b.n_vars_) throw DimensionMismatch("matrices over different variable counts");
        NcMatrix m(a.rows_ + b.rows_, a.cols_ + b.cols_, a.n_vars_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
        for (std::size_t r = 0; r < b.rows_; ++r)
            for (std::size_t c = 0; c < b.cols_; ++c) m(a.rows_ + r, a.cols_ + c) = b(r, c);
        return m;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t r = 0; r < rows_; ++r) {
            s += r ? "; " : "";
            for (std::size_t c = 0; c < cols_; ++c) s += (c ? ", " : "") + (*this)(r, c).str();
        }
        return s + "]";
    }

private:
    void check_same(const NcMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_ || n_vars_ != b.n_vars_)
            throw DimensionMismatch("NcMatrix shapes or variable counts differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    int n_vars_ = 0;
    std::vector<NcPoly> entries_;
};

/// A0 + A1 x1 + ... + An xn with exact coefficient matrices; coeffs()[0] is A0.
class LinearPencil {
public:
    LinearPencil() = default;
    LinearPencil(std::size_t rows, std::size_t cols, int n_vars)
        : rows_(rows), cols_(cols), n_vars_(n_vars), coeffs_(static_cast<std::size_t>(n_vars) + 1, ExactMatrix(rows, cols)) {}
    LinearPencil(int n_vars, std::vector<ExactMatrix> coeffs) : n_vars_(n_vars), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != static_cast<std::size_t>(n_vars) + 1)
            throw DimensionMismatch("pencil needs n_vars + 1 coefficient matrices");
        rows_ = coeffs_.front().rows();
        cols_ = coeffs_.front().cols();
        for (const auto& a : coeffs_)
            if (a.rows() != rows_ || a.cols() != cols_) throw DimensionMismatch("pencil coefficient shapes differ");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    int n_vars() const noexcept { return n_vars_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    const std::vector<ExactMatrix>& coeffs() const noexcept { return coeffs_; }
    const ExactMatrix& coeff(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
    ExactMatrix& coeff(int i) { return coeffs_.at(static_cast<std::size_t>(i)); }
    const ExactMatrix& constant() const { return coeffs_.front(); }

    bool is_homogeneous() const { return coeffs_.front().is_zero(); }

    bool is_zero() const {
        for (const auto& a : coeffs_)
            if (!a.is_zero()) return false;
        return true;
    }

    /// A - A0.
    LinearPencil homogeneous_part() const {
        LinearPencil p = *this;
        p.coeffs_.front() = ExactMatrix(rows_, cols_);
        return p;
    }

    /// A - lambda * 1 (square only).
    LinearPencil shifted(const ExactScalar& lambda) const {
        if (!is_square()) throw DimensionMismatch("shift requires a square pencil");
        LinearPencil p = *this;
        p.coeffs_.front() -= ExactMatrix::identity(rows_) * lambda;
        return p;
    }

    /// U * A * V applied coefficient-wise.
    LinearPencil congruence(const ExactMatrix& u, const ExactMatrix& v) const {
        std::vector<ExactMatrix> c;
        c.reserve(coeffs_.size());
        for (const auto& a : coeffs_) c.push_back(u * a * v);
        return {n_vars_, std::move(c)};
    }

    friend bool operator==(const LinearPencil& a, const LinearPencil& b) {
        return a.n_vars_ == b.n_vars_ && a.coeffs_ == b.coeffs_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    int n_vars_ = 0;
    std::vector<ExactMatrix> coeffs_;
};

/// Reads off the coefficient matrices of a matrix with entries of degree <= 1.
inline LinearPencil matrix_to_pencil(const NcMatrix& p) {
    LinearPencil out(p.rows(), p.cols(), p.n_vars());
    for (std::size_t r = 0; r < p.rows(); ++r)
        for (std::size_t c = 0; c < p.cols(); ++c)
            for (const auto& [w, coef] : p(r, c).terms()) {
                if (w.size() >= 2)
                    throw DegreeTooHigh("entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                                        ") has degree " + std::to_string(w.size()));
                if (w.empty()) {
                    out.coeff(0)(r, c) = coef;
                    continue;
                }
                if (w[0].starred) throw StarredLetter("pencils over starred letters are not supported");
                out.coeff(w[0].var)(r, c) = coef;
            }
    return out;
}

inline NcMatrix pencil_to_matrix(const LinearPencil& a) {
    NcMatrix m(a.rows(), a.cols(), a.n_vars());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) {
            NcPoly p = NcPoly::constant(a.n_vars(), a.constant()(r, c));
            for (int i = 1; i <= a.n_vars(); ++i)
                p.add_term(Word{Letter{i, false}}, a.coeff(i)(r, c));
            m(r, c) = std::move(p);
        }
    return m;
}

}  // namespace ncfield
