#pragma once

// Gaussian rationals a + b i with a, b arbitrary-precision rationals.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "ncfield/errors.hpp"

namespace ncfield {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) { return r.str(); }

class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(long long re) : re_(re) {}  // NOLINT: implicit from integers is convenient
    ExactScalar(Rational re, Rational im = Rational(0)) : re_(std::move(re)), im_(std::move(im)) {}

    static ExactScalar i() { return {Rational(0), Rational(1)}; }

    const Rational& re() const noexcept { return re_; }
    const Rational& im() const noexcept { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    ExactScalar conj() const { return {re_, -im_}; }
    Rational norm2() const { return re_ * re_ + im_ * im_; }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re_), static_cast<double>(im_)};
    }

    ExactScalar operator-() const { return {-re_, -im_}; }

    ExactScalar& operator+=(const ExactScalar& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    ExactScalar& operator-=(const ExactScalar& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    ExactScalar& operator*=(const ExactScalar& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    ExactScalar& operator/=(const ExactScalar& o) {
        if (o.is_zero()) throw Error("division of ExactScalar by zero");
        const Rational n = o.norm2();
        Rational r = (re_ * o.re_ + im_ * o.im_) / n;
        Rational m = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
    friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    /// Canonical literal: "3/2", "-1/2i", "3/2+1/2i", "0".
    std::string str() const {
        if (im_ == 0) return re_.str();
        std::string imag = im_.str() + "i";
        if (re_ == 0) return imag;
        return re_.str() + (im_ > 0 ? "+" : "") + imag;
    }

    /// Parses a complete literal (see scan_literal for the accepted forms).
    static ExactScalar parse(std::string_view text);

    friend std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.str(); }

private:
    Rational re_{0};
    Rational im_{0};
};

namespace detail {

inline bool scan_unsigned_rational(std::string_view t, std::size_t& pos, Rational& out) {
    std::size_t p = pos;
    if (p >= t.size() || !std::isdigit(static_cast<unsigned char>(t[p]))) return false;
    std::size_t start = p;
    while (p < t.size() && std::isdigit(static_cast<unsigned char>(t[p]))) ++p;
    BigInt num(std::string(t.substr(start, p - start)));
    BigInt den(1);
    if (p + 1 < t.size() && t[p] == '/' && std::isdigit(static_cast<unsigned char>(t[p + 1]))) {
        ++p;
        std::size_t s2 = p;
        while (p < t.size() && std::isdigit(static_cast<unsigned char>(t[p]))) ++p;
        den = BigInt(std::string(t.substr(s2, p - s2)));
        if (den == 0) return false;
    }
    out = Rational(num, den);
    pos = p;
    return true;
}

inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace detail

/// Scans a Gaussian-rational literal starting at `pos`:
///   [-]r            real
///   [-]r i          imaginary ("3i", "1/2i")
///   [-]r (+|-) [r] i  complex, no whitespace ("2+3i", "-1/2-1i", "-1+i")
/// with r = digits ['/' digits]. On success advances `pos` and returns the value.
inline std::optional<ExactScalar> scan_literal(std::string_view t, std::size_t& pos) {
    std::size_t p = pos;
    bool neg = false;
    if (p < t.size() && t[p] == '-') {
        neg = true;
        ++p;
    }
    Rational first;
    if (!detail::scan_unsigned_rational(t, p, first)) return std::nullopt;
    if (neg) first = -first;
    auto imag_suffix = [&](std::size_t q) {
        return q < t.size() && t[q] == 'i' && (q + 1 >= t.size() || !detail::is_ident_char(t[q + 1]));
    };
    if (imag_suffix(p)) {
        pos = p + 1;
        return ExactScalar(Rational(0), first);
    }
    if (p < t.size() && (t[p] == '+' || t[p] == '-')) {
        std::size_t q = p + 1;
        Rational second(1);
        if ((imag_suffix(q) || detail::scan_unsigned_rational(t, q, second)) && imag_suffix(q)) {
            if (t[p] == '-') second = -second;
            pos = q + 1;
            return ExactScalar(first, second);
        }
    }
    pos = p;
    return ExactScalar(first);
}

inline ExactScalar ExactScalar::parse(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    std::string_view t = text.substr(b, e - b);
    if (t == "i" || t == "-i") return ExactScalar(Rational(0), Rational(t == "i" ? 1 : -1));
    std::size_t pos = 0;
    auto v = scan_literal(t, pos);
    if (!v || pos != t.size()) throw SyntaxError("malformed scalar literal '" + std::string(t) + "'", b + pos);
    return *v;
}

/// Exact rational value of a finite double (dyadic).
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw InputError("non-finite number cannot be made exact");
    int exp = 0;
    double mant = std::frexp(x, &exp);
    auto m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r(m);
    if (exp > 0) r *= Rational(BigInt(1) << exp);
    if (exp < 0) r /= Rational(BigInt(1) << (-exp));
    return r;
}

/// Best rational approximation with denominator <= max_den (continued fractions).
inline Rational best_rational(double x, long long max_den) {
    if (!std::isfinite(x)) throw InputError("cannot approximate non-finite value");
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int iter = 0; iter < 64; ++iter) {
        double a = std::floor(v);
        if (std::abs(a) > 9e15) break;
        auto ai = static_cast<long long>(a);
        long long q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        long long p2 = ai * p1 + p0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = v - a;
        if (frac < 1e-15) break;
        v = 1.0 / frac;
    }
    if (q1 == 0) return Rational(static_cast<long long>(std::llround(x)));
    return Rational(BigInt(p1), BigInt(q1));
}

/// Snaps a complex number to a Gaussian rational with denominators <= max_den,
/// provided the snapped value lies within `tol` of z.
inline std::optional<ExactScalar> snap_gaussian(std::complex<double> z, long long max_den, double tol) {
    ExactScalar s(best_rational(z.real(), max_den), best_rational(z.imag(), max_den));
    if (std::abs(s.to_complex() - z) > tol) return std::nullopt;
    return s;
}

}  // namespace ncfield
