#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "errors.hpp"

namespace mvd {

/// Arbitrary-precision rational number, always held in canonical form:
/// gcd(|num|, den) = 1 and den >= 1. This is the exact realization of the
/// field scalar; the float realization is plain `double`.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(int n) : v_(n) {}

    Rational(long num, long den) {
        if (den == 0) throw DivisionByZero("rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }

    explicit Rational(mpz_class num, mpz_class den = 1) {
        if (den == 0) throw DivisionByZero("rational with zero denominator");
        v_ = mpq_class(std::move(num), std::move(den));
        v_.canonicalize();
    }

    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    /// Parses "num/den" or "num" (base 10).
    static Rational from_string(const std::string& s) {
        mpq_class v;
        if (s.empty() || v.set_str(s, 10) != 0)
            throw ParseError("bad rational literal '" + s + "'");
        if (v.get_den() == 0)
            throw ParseError("zero denominator in '" + s + "'");
        v.canonicalize();
        Rational r;
        r.v_ = std::move(v);
        return r;
    }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return wrap(-v_); }
    Rational operator+(const Rational& o) const { return wrap(v_ + o.v_); }
    Rational operator-(const Rational& o) const { return wrap(v_ - o.v_); }
    Rational operator*(const Rational& o) const { return wrap(v_ * o.v_); }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw DivisionByZero("rational division by zero");
        return wrap(v_ / o.v_);
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    Rational inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero");
        return wrap(1 / v_);
    }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }
    bool operator<(const Rational& o) const { return v_ < o.v_; }
    bool operator<=(const Rational& o) const { return v_ <= o.v_; }
    bool operator>(const Rational& o) const { return v_ > o.v_; }
    bool operator>=(const Rational& o) const { return v_ >= o.v_; }

    Rational abs() const { return wrap(::abs(v_)); }

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    double to_double() const { return v_.get_d(); }

    /// "num/den", with "/den" omitted when den = 1.
    std::string str() const { return v_.get_str(); }

    const mpq_class& raw() const { return v_; }

private:
    static Rational wrap(mpq_class v) {
        Rational r;
        r.v_ = std::move(v);
        return r;
    }

    mpq_class v_;
};

inline Rational operator*(long a, const Rational& b) { return Rational(a) * b; }

template <class K>
struct field_traits;

template <>
struct field_traits<Rational> {
    static constexpr bool exact = true;
    static Rational from_int(long n) { return Rational(n); }
    static bool is_zero(const Rational& x) { return x.is_zero(); }
    static Rational abs(const Rational& x) { return x.abs(); }
    static double to_double(const Rational& x) { return x.to_double(); }
    static std::string to_string(const Rational& x) { return x.str(); }
    static const char* mode_name() { return "exact"; }
};

template <>
struct field_traits<double> {
    static constexpr bool exact = false;
    static double from_int(long n) { return static_cast<double>(n); }
    static bool is_zero(double x) { return x == 0.0; }
    static double abs(double x) { return std::fabs(x); }
    static double to_double(double x) { return x; }
    static std::string to_string(double x) { return std::to_string(x); }
    static const char* mode_name() { return "float"; }
};

template <class K>
inline constexpr bool is_exact_v = field_traits<K>::exact;

} // namespace mvd
