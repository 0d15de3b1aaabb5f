#pragma once

// Truncated l2 of the free group F_n: reduced words of length <= R, exact sparse operators
// U_i = left multiplication by g_i and the operators V_i, and the commutator check
// (U_i D_j - D_j U_i) delta_h = [i == j] <delta_h, delta_e> delta_e on interior words.
//
// With V_i as defined (strip a trailing g_i) one gets [U_i, V_j] = -[i == j] P_e, since
// (U_i V_i - V_i U_i) delta_e = 0 - V_i delta_{g_i} = -delta_e. The dual system is D_j = -V_j.
//
// Letter code: 2(i-1) is g_i, 2(i-1)+1 is g_i^-1, so g1 < g1^-1 < g2 < ... .

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/scalar.hpp"

namespace ncfield {

using GroupWord = std::vector<int>;

inline int gen_letter(int i) { return 2 * (i - 1); }
inline int inv_letter(int i) { return 2 * (i - 1) + 1; }
inline int letter_inverse(int code) { return code ^ 1; }

inline std::string group_word_str(const GroupWord& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int c : w) {
        if (!s.empty()) s += ' ';
        s += "g" + std::to_string(c / 2 + 1);
        if (c & 1) s += "^-1";
    }
    return s;
}

/// 1 + sum_{k=1..R} 2n (2n-1)^(k-1), as a double (for the size guard).
inline double ball_size_formula(int n, int r) {
    double total = 1.0, layer = 2.0 * n;
    for (int k = 1; k <= r; ++k) {
        total += layer;
        layer *= 2.0 * n - 1.0;
    }
    return total;
}

struct GroupBall {
    int n = 0;
    int R = 0;
    std::vector<GroupWord> words;             // length, then lexicographic
    std::map<GroupWord, std::size_t> index;

    std::size_t size() const { return words.size(); }
    std::optional<std::size_t> find(const GroupWord& w) const {
        auto it = index.find(w);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
    std::size_t interior_count() const {
        return static_cast<std::size_t>(
            std::count_if(words.begin(), words.end(), [&](const auto& w) { return static_cast<int>(w.size()) <= R - 1; }));
    }
};

inline GroupBall build_ball(int n, int r, double max_size = 1e6) {
    if (n < 1) throw InputError("free group needs n >= 1 generators");
    if (r < 1) throw InputError("ball radius must be >= 1");
    if (ball_size_formula(n, r) > max_size)
        throw SizeGuard("ball of radius " + std::to_string(r) + " in F_" + std::to_string(n) + " has " +
                        std::to_string(ball_size_formula(n, r)) + " elements (limit " + std::to_string(max_size) + ")");
    GroupBall b;
    b.n = n;
    b.R = r;
    b.words.push_back({});
    std::size_t layer_begin = 0, layer_end = 1;
    for (int len = 1; len <= r; ++len) {
        for (std::size_t k = layer_begin; k < layer_end; ++k)
            for (int c = 0; c < 2 * n; ++c) {
                const GroupWord& w = b.words[k];
                if (!w.empty() && w.back() == letter_inverse(c)) continue;
                GroupWord x = w;
                x.push_back(c);
                b.words.push_back(std::move(x));
            }
        layer_begin = layer_end;
        layer_end = b.words.size();
    }
    for (std::size_t k = 0; k < b.words.size(); ++k) b.index.emplace(b.words[k], k);
    return b;
}

/// Sparse vector / operator with exact entries.
using SparseVec = std::map<std::size_t, ExactScalar>;

class SparseOp {
public:
    explicit SparseOp(std::size_t dim = 0) : dim_(dim), cols_(dim) {}

    std::size_t dim() const { return dim_; }
    void set(std::size_t row, std::size_t col, const ExactScalar& v) {
        if (v.is_zero())
            cols_.at(col).erase(row);
        else
            cols_.at(col)[row] = v;
    }
    const SparseVec& column(std::size_t c) const { return cols_.at(c); }

    std::size_t nonzeros() const {
        std::size_t k = 0;
        for (const auto& c : cols_) k += c.size();
        return k;
    }

    SparseVec apply(const SparseVec& x) const {
        SparseVec y;
        for (const auto& [c, xv] : x)
            for (const auto& [r, a] : cols_.at(c)) {
                ExactScalar s = y[r] + a * xv;
                if (s.is_zero())
                    y.erase(r);
                else
                    y[r] = s;
            }
        return y;
    }

    friend SparseOp operator*(const SparseOp& a, const SparseOp& b) {
        SparseOp out(a.dim_);
        for (std::size_t c = 0; c < b.dim_; ++c) out.cols_[c] = a.apply(b.cols_[c]);
        return out;
    }

    friend SparseOp operator-(const SparseOp& a, const SparseOp& b) {
        SparseOp out = a;
        for (std::size_t c = 0; c < b.dim_; ++c)
            for (const auto& [r, v] : b.cols_[c]) out.set(r, c, out.get(r, c) - v);
        return out;
    }

    ExactScalar get(std::size_t r, std::size_t c) const {
        auto it = cols_.at(c).find(r);
        return it == cols_.at(c).end() ? ExactScalar(0) : it->second;
    }

private:
    std::size_t dim_;
    std::vector<SparseVec> cols_;
};

namespace detail {

inline std::optional<GroupWord> left_mul(int code, const GroupWord& h) {
    if (!h.empty() && h.front() == letter_inverse(code)) return GroupWord(h.begin() + 1, h.end());
    GroupWord w;
    w.reserve(h.size() + 1);
    w.push_back(code);
    w.insert(w.end(), h.begin(), h.end());
    return w;
}

inline GroupWord right_mul(const GroupWord& h, int code) {
    if (!h.empty() && h.back() == letter_inverse(code)) return GroupWord(h.begin(), h.end() - 1);
    GroupWord w = h;
    w.push_back(code);
    return w;
}

inline void check_generator(int i, const GroupBall& b) {
    if (i < 1 || i > b.n) throw InputError("generator index " + std::to_string(i) + " out of range 1.." + std::to_string(b.n));
}

}  // namespace detail

/// U_i: delta_h -> delta_{g_i h}; images leaving the ball are dropped.
inline SparseOp left_regular(int i, const GroupBall& b) {
    detail::check_generator(i, b);
    SparseOp u(b.size());
    for (std::size_t k = 0; k < b.size(); ++k)
        if (auto img = b.find(*detail::left_mul(gen_letter(i), b.words[k]))) u.set(*img, k, ExactScalar(1));
    return u;
}

/// delta_h -> delta_{h g_i}; images leaving the ball are dropped.
inline SparseOp right_regular(int i, const GroupBall& b) {
    detail::check_generator(i, b);
    SparseOp r(b.size());
    for (std::size_t k = 0; k < b.size(); ++k)
        if (auto img = b.find(detail::right_mul(b.words[k], gen_letter(i)))) r.set(*img, k, ExactScalar(1));
    return r;
}

/// V_i: delta_h -> delta_{h g_i^-1} when h ends with g_i, else 0.
inline SparseOp dual_op(int i, const GroupBall& b) {
    detail::check_generator(i, b);
    SparseOp v(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
        const GroupWord& h = b.words[k];
        if (h.empty() || h.back() != gen_letter(i)) continue;
        v.set(*b.find(GroupWord(h.begin(), h.end() - 1)), k, ExactScalar(1));
    }
    return v;
}

/// D_i = -V_i, the operators satisfying [U_i, D_j] = [i == j] P_e.
inline SparseOp dual_system_op(int i, const GroupBall& b) {
    SparseOp v = dual_op(i, b);
    return SparseOp(b.size()) - v;
}

struct CommutatorCheck {
    int i = 0;
    int j = 0;
    double defect = 0.0;  // max |entry| of the defect over interior columns
    bool pass = false;    // defect exactly zero
    std::size_t checked = 0;
};

/// (U_i D_j - D_j U_i) delta_h - [i == j][h == e] delta_e for every interior h (|h| <= R - 1).
inline CommutatorCheck commutator_defect(int i, int j, const GroupBall& b) {
    SparseOp ui = left_regular(i, b), vj = dual_system_op(j, b);
    SparseOp comm = ui * vj - vj * ui;
    CommutatorCheck out;
    out.i = i;
    out.j = j;
    Rational worst = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (static_cast<int>(b.words[k].size()) > b.R - 1) continue;
        ++out.checked;
        SparseVec col = comm.column(k);
        if (i == j && k == 0) col[0] = col[0] - ExactScalar(1);
        for (const auto& [r, v] : col) worst = std::max(worst, v.norm2());
    }
    out.pass = worst == 0;
    out.defect = std::sqrt(static_cast<double>(worst));
    return out;
}

struct DualCheckReport {
    int n = 0;
    int R = 0;
    std::size_t ball_size = 0;
    std::size_t interior_count = 0;
    std::vector<CommutatorCheck> pairs;

    bool all_pass() const {
        return std::all_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.pass; });
    }
};

inline DualCheckReport dual_system_check(int n, int r) {
    GroupBall b = build_ball(n, r);
    DualCheckReport rep;
    rep.n = n;
    rep.R = r;
    rep.ball_size = b.size();
    rep.interior_count = b.interior_count();
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) rep.pairs.push_back(commutator_defect(i, j, b));
    return rep;
}

}  // namespace ncfield
