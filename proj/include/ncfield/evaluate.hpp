#pragma once

// Numeric evaluation X |-> P(X) of polynomials, polynomial matrices and pencils.
// A N x M matrix evaluates to an (N d) x (M d) block matrix whose (i, j) block is P_ij(X).

#include <Eigen/Dense>

#include <map>
#include <vector>

#include "ncfield/model.hpp"
#include "ncfield/ncmatrix.hpp"

namespace ncfield {

namespace detail {

/// Caches products of prefixes so that shared words are multiplied once.
class WordEvaluator {
public:
    explicit WordEvaluator(const MatrixModel& x) : x_(x) {}

    const Eigen::MatrixXcd& operator()(const Word& w) {
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
        Eigen::MatrixXcd value;
        if (w.empty()) {
            value = Eigen::MatrixXcd::Identity(x_.d, x_.d);
        } else if (w.size() == 1) {
            value = x_.letter(w[0]);
        } else {
            Word prefix(w.begin(), w.end() - 1);
            const Eigen::MatrixXcd& head = (*this)(prefix);
            value = head * x_.letter(w.back());
        }
        return cache_.emplace(w, std::move(value)).first->second;
    }

private:
    const MatrixModel& x_;
    std::map<Word, Eigen::MatrixXcd, GradedLex> cache_;
};

inline void check_model(int n_vars, const MatrixModel& x) {
    if (x.n_vars() != n_vars)
        throw DimensionMismatch("model supplies " + std::to_string(x.n_vars()) + " matrices for " +
                                std::to_string(n_vars) + " variables");
}

inline Eigen::MatrixXcd evaluate_with(const NcPoly& p, WordEvaluator& words, int d) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& [w, c] : p.terms()) {
        if (w.empty())
            out.diagonal().array() += c.to_complex();
        else
            out += c.to_complex() * words(w);
    }
    return out;
}

}  // namespace detail

inline Eigen::MatrixXcd evaluate(const NcPoly& p, const MatrixModel& x) {
    detail::check_model(p.n_vars(), x);
    detail::WordEvaluator words(x);
    return detail::evaluate_with(p, words, x.d);
}

inline Eigen::MatrixXcd evaluate(const NcMatrix& p, const MatrixModel& x) {
    detail::check_model(p.n_vars(), x);
    const int d = x.d;
    detail::WordEvaluator words(x);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(p.rows()) * d,
                                                  static_cast<Eigen::Index>(p.cols()) * d);
    for (std::size_t r = 0; r < p.rows(); ++r)
        for (std::size_t c = 0; c < p.cols(); ++c) {
            if (p(r, c).is_zero()) continue;
            out.block(static_cast<Eigen::Index>(r) * d, static_cast<Eigen::Index>(c) * d, d, d) =
                detail::evaluate_with(p(r, c), words, d);
        }
    return out;
}

/// A0 (x) 1 + sum_i Ai (x) mats[i-1]; `mats` may be a widened alphabet (e.g. X and X*).
inline Eigen::MatrixXcd evaluate_pencil(const LinearPencil& a, const std::vector<Eigen::MatrixXcd>& mats, int d) {
    if (static_cast<int>(mats.size()) != a.n_vars())
        throw DimensionMismatch("pencil over " + std::to_string(a.n_vars()) + " letters given " +
                                std::to_string(mats.size()) + " matrices");
    const auto rows = static_cast<Eigen::Index>(a.rows());
    const auto cols = static_cast<Eigen::Index>(a.cols());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows * d, cols * d);
    for (int i = 0; i <= a.n_vars(); ++i) {
        const ExactMatrix& coef = a.coeff(i);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) {
                const ExactScalar& s = coef(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
                if (s.is_zero()) continue;
                auto blk = out.block(r * d, c * d, d, d);
                if (i == 0)
                    blk.diagonal().array() += s.to_complex();
                else
                    blk += s.to_complex() * mats[static_cast<std::size_t>(i - 1)];
            }
    }
    return out;
}

inline Eigen::MatrixXcd evaluate(const LinearPencil& a, const MatrixModel& x) {
    detail::check_model(a.n_vars(), x);
    return evaluate_pencil(a, x.matrices, x.d);
}

}  // namespace ncfield
