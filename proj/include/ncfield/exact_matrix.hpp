#pragma once

// Dense matrices over the Gaussian rationals with exact elimination.

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/scalar.hpp"

namespace ncfield {

class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ExactMatrix(std::initializer_list<std::initializer_list<ExactScalar>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged initializer for ExactMatrix");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ExactScalar(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    ExactScalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const ExactScalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!x.is_zero()) return false;
        return true;
    }

    ExactMatrix adjoint() const {
        ExactMatrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c).conj();
        return m;
    }

    ExactMatrix transpose() const {
        ExactMatrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
        return m;
    }

    ExactMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        ExactMatrix m(nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
        return m;
    }

    void set_block(std::size_t r0, std::size_t c0, const ExactMatrix& b) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
    }

    ExactMatrix& operator+=(const ExactMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    ExactMatrix& operator-=(const ExactMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    ExactMatrix& operator*=(const ExactScalar& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
    friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
    friend ExactMatrix operator*(ExactMatrix a, const ExactScalar& s) { return a *= s; }
    friend ExactMatrix operator*(const ExactScalar& s, ExactMatrix a) { return a *= s; }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("ExactMatrix product: inner dimensions differ");
        ExactMatrix m(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const ExactScalar& x = a(r, k);
                if (x.is_zero()) continue;
                for (std::size_t c = 0; c < b.cols_; ++c)
                    if (!b(k, c).is_zero()) m(r, c) += x * b(k, c);
            }
        return m;
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    Eigen::MatrixXcd to_complex() const {
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (*this)(r, c).to_complex();
        return m;
    }

    /// Reduced row echelon form; `pivots` receives the pivot column of each nonzero row.
    ExactMatrix rref(std::vector<std::size_t>* pivots = nullptr) const {
        ExactMatrix m = *this;
        std::vector<std::size_t> piv;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t sel = row;
            while (sel < rows_ && m(sel, col).is_zero()) ++sel;
            if (sel == rows_) continue;
            if (sel != row)
                for (std::size_t c = 0; c < cols_; ++c) std::swap(m(sel, c), m(row, c));
            const ExactScalar inv = ExactScalar(1) / m(row, col);
            for (std::size_t c = col; c < cols_; ++c) m(row, c) *= inv;
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == row || m(r, col).is_zero()) continue;
                const ExactScalar f = m(r, col);
                for (std::size_t c = col; c < cols_; ++c)
                    if (!m(row, c).is_zero()) m(r, c) -= f * m(row, c);
            }
            piv.push_back(col);
            ++row;
        }
        if (pivots) *pivots = std::move(piv);
        return m;
    }

    std::size_t rank() const {
        std::vector<std::size_t> piv;
        rref(&piv);
        return piv.size();
    }

    /// Basis of the right kernel, one column per basis vector.
    ExactMatrix kernel() const {
        std::vector<std::size_t> piv;
        ExactMatrix r = rref(&piv);
        std::vector<bool> is_pivot(cols_, false);
        for (auto p : piv) is_pivot[p] = true;
        std::vector<std::size_t> free_cols;
        for (std::size_t c = 0; c < cols_; ++c)
            if (!is_pivot[c]) free_cols.push_back(c);
        ExactMatrix k(cols_, free_cols.size());
        for (std::size_t j = 0; j < free_cols.size(); ++j) {
            k(free_cols[j], j) = ExactScalar(1);
            for (std::size_t i = 0; i < piv.size(); ++i) k(piv[i], j) = -r(i, free_cols[j]);
        }
        return k;
    }

    /// Columns forming a basis of the column space (a subset of the original columns).
    ExactMatrix column_basis() const {
        std::vector<std::size_t> piv;
        rref(&piv);
        ExactMatrix b(rows_, piv.size());
        for (std::size_t j = 0; j < piv.size(); ++j)
            for (std::size_t r = 0; r < rows_; ++r) b(r, j) = (*this)(r, piv[j]);
        return b;
    }

    static ExactMatrix hstack(const std::vector<ExactMatrix>& parts) {
        if (parts.empty()) return {};
        std::size_t rows = parts.front().rows(), cols = 0;
        for (const auto& p : parts) {
            if (p.rows() != rows) throw DimensionMismatch("hstack: row counts differ");
            cols += p.cols();
        }
        ExactMatrix m(rows, cols);
        std::size_t c0 = 0;
        for (const auto& p : parts) {
            m.set_block(0, c0, p);
            c0 += p.cols();
        }
        return m;
    }

    static ExactMatrix vstack(const std::vector<ExactMatrix>& parts) {
        if (parts.empty()) return {};
        std::size_t cols = parts.front().cols(), rows = 0;
        for (const auto& p : parts) {
            if (p.cols() != cols) throw DimensionMismatch("vstack: column counts differ");
            rows += p.rows();
        }
        ExactMatrix m(rows, cols);
        std::size_t r0 = 0;
        for (const auto& p : parts) {
            m.set_block(r0, 0, p);
            r0 += p.rows();
        }
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
    void check_same_shape(const ExactMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("ExactMatrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<ExactScalar> data_;
};

/// Characteristic-style test: is lambda an exact eigenvalue of the square matrix a?
inline bool is_exact_eigenvalue(const ExactMatrix& a, const ExactScalar& lambda) {
    ExactMatrix shifted = a - ExactMatrix::identity(a.rows()) * lambda;
    return shifted.rank() < a.rows();
}

}  // namespace ncfield
