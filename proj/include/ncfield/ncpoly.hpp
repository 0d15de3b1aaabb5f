#pragma once

// Noncommutative polynomials over the Gaussian rationals, with a formal involution.

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/scalar.hpp"

namespace ncfield {

/// One variable x_var (1-based), optionally carrying the formal adjoint flag.
struct Letter {
    int var = 1;
    bool starred = false;

    Letter star() const { return {var, !starred}; }
    auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

/// Graded lexicographic order: shorter words first, ties broken letter by letter
/// with x1 < x1* < x2 < x2* < ...
struct GradedLex {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

inline Word word_adjoint(const Word& w) {
    Word r;
    r.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(it->star());
    return r;
}

inline Word concat(const Word& a, const Word& b) {
    Word r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

inline std::string word_str(const Word& w) {
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) s += '*';
        s += 'x' + std::to_string(w[k].var);
        if (w[k].starred) s += '*';
    }
    return s;
}

class NcPoly {
public:
    using TermMap = std::map<Word, ExactScalar, GradedLex>;

    NcPoly() = default;
    explicit NcPoly(int n_vars) : n_vars_(n_vars) {}

    static NcPoly zero(int n_vars) { return NcPoly(n_vars); }
    static NcPoly constant(int n_vars, const ExactScalar& c) { return monomial(n_vars, {}, c); }
    static NcPoly one(int n_vars) { return constant(n_vars, ExactScalar(1)); }
    static NcPoly variable(int n_vars, int var, bool starred = false) {
        return monomial(n_vars, Word{Letter{var, starred}}, ExactScalar(1));
    }
    static NcPoly monomial(int n_vars, const Word& w, const ExactScalar& c) {
        NcPoly p(n_vars);
        for (const auto& l : w)
            if (l.var < 1 || l.var > n_vars)
                throw UnknownVariable("variable x" + std::to_string(l.var) + " outside 1.." + std::to_string(n_vars));
        if (!c.is_zero()) p.terms_.emplace(w, c);
        return p;
    }

    int n_vars() const noexcept { return n_vars_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Maximal word length; 0 for the zero polynomial.
    int degree() const { return terms_.empty() ? 0 : static_cast<int>(terms_.rbegin()->first.size()); }

    bool has_starred() const {
        for (const auto& [w, c] : terms_)
            for (const auto& l : w)
                if (l.starred) return true;
        return false;
    }

    ExactScalar coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? ExactScalar() : it->second;
    }
    ExactScalar constant_term() const { return coefficient({}); }

    void add_term(const Word& w, const ExactScalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    NcPoly& operator+=(const NcPoly& o) {
        check_vars(o);
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    NcPoly& operator-=(const NcPoly& o) {
        check_vars(o);
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    NcPoly& operator*=(const ExactScalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, c] : terms_) c *= s;
        return *this;
    }

    friend NcPoly operator+(NcPoly a, const NcPoly& b) { return a += b; }
    friend NcPoly operator-(NcPoly a, const NcPoly& b) { return a -= b; }
    friend NcPoly operator*(NcPoly a, const ExactScalar& s) { return a *= s; }
    friend NcPoly operator*(const ExactScalar& s, NcPoly a) { return a *= s; }
    NcPoly operator-() const { return *this * ExactScalar(-1); }

    friend NcPoly operator*(const NcPoly& a, const NcPoly& b) {
        a.check_vars(b);
        NcPoly r(a.n_vars_);
        for (const auto& [wa, ca] : a.terms_)
            for (const auto& [wb, cb] : b.terms_) r.add_term(concat(wa, wb), ca * cb);
        return r;
    }

    friend bool operator==(const NcPoly& a, const NcPoly& b) {
        return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
    }

    /// Anti-linear involution: conjugate coefficients, reverse words, toggle stars.
    NcPoly adjoint() const {
        NcPoly r(n_vars_);
        for (const auto& [w, c] : terms_) r.terms_.emplace(word_adjoint(w), c.conj());
        return r;
    }

    /// Canonical text, highest terms first: `(3/2+1/2i)*x1*x2* + 1`.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const Word& w = it->first;
            ExactScalar c = it->second;
            bool negate = c.is_real() && c.re() < 0;
            if (negate) c = -c;
            if (first)
                s += negate ? "-" : "";
            else
                s += negate ? " - " : " + ";
            first = false;
            std::string coef = c.is_real() ? c.str() : "(" + c.str() + ")";
            if (w.empty())
                s += coef;
            else if (c == ExactScalar(1))
                s += word_str(w);
            else
                s += coef + "*" + word_str(w);
        }
        return s;
    }

    static NcPoly parse(std::string_view text, int n_vars);

private:
    void check_vars(const NcPoly& o) const {
        if (n_vars_ != o.n_vars_)
            throw DimensionMismatch("polynomials over " + std::to_string(n_vars_) + " and " +
                                    std::to_string(o.n_vars_) + " variables");
    }

    int n_vars_ = 0;
    TermMap terms_;
};

namespace detail {

class PolyTextParser {
public:
    PolyTextParser(std::string_view t, int n) : t_(t), n_(n) {}

    NcPoly run() {
        NcPoly p(n_);
        skip();
        bool first = true;
        while (true) {
            int sign = 1;
            skip();
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
            } else if (!first) {
                break;
            }
            first = false;
            skip();
            p += term() * ExactScalar(sign);
            skip();
            if (pos_ >= t_.size()) break;
            if (peek() != '+' && peek() != '-') throw SyntaxError("expected '+' or '-'", pos_);
        }
        skip();
        if (pos_ != t_.size()) throw SyntaxError("trailing input", pos_);
        return p;
    }

private:
    char peek() const { return pos_ < t_.size() ? t_[pos_] : '\0'; }
    void skip() {
        while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    }

    // term := factor ('*' factor)*, factor := scalar | '(' scalar ')' | letter
    NcPoly term() {
        NcPoly acc = NcPoly::one(n_);
        while (true) {
            skip();
            acc = acc * factor();
            skip();
            if (peek() == '*') {
                ++pos_;
                continue;
            }
            return acc;
        }
    }

    NcPoly factor() {
        if (peek() == '(') {
            ++pos_;
            skip();
            auto s = scan_literal(t_, pos_);
            if (!s) throw SyntaxError("expected scalar literal", pos_);
            skip();
            if (peek() != ')') throw SyntaxError("expected ')'", pos_);
            ++pos_;
            return NcPoly::constant(n_, *s);
        }
        if (peek() == 'x') {
            std::size_t start = pos_++;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) throw SyntaxError("expected variable index", pos_);
            int idx = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) idx = idx * 10 + (t_[pos_++] - '0');
            if (idx < 1 || idx > n_) throw UnknownVariable("unknown variable at position " + std::to_string(start));
            bool starred = false;
            // A '*' right after a letter is the adjoint flag unless another factor follows.
            if (peek() == '*') {
                std::size_t q = pos_ + 1;
                while (q < t_.size() && std::isspace(static_cast<unsigned char>(t_[q]))) ++q;
                bool factor_follows = q < t_.size() && (t_[q] == 'x' || t_[q] == '(' ||
                                                        std::isdigit(static_cast<unsigned char>(t_[q])));
                if (!factor_follows) {
                    starred = true;
                    ++pos_;
                }
            }
            return NcPoly::variable(n_, idx, starred);
        }
        auto s = scan_literal(t_, pos_);
        if (!s) throw SyntaxError("expected factor", pos_);
        return NcPoly::constant(n_, *s);
    }

    std::string_view t_;
    int n_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline NcPoly NcPoly::parse(std::string_view text, int n_vars) { return detail::PolyTextParser(text, n_vars).run(); }

}  // namespace ncfield
