#pragma once

#include <string>

#include <mpfr.h>

#include "advkit/core.hpp"

namespace advkit {

/// Owning wrapper around an MPFR number at a fixed working precision.
class BigFloat {
  public:
    static constexpr mpfr_prec_t kPrecision = 256;  // ~77 decimal digits

    BigFloat();
    explicit BigFloat(long v);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    mpfr_ptr raw() { return value_; }
    mpfr_srcptr raw() const { return value_; }

    double to_double() const;
    std::string to_string(int digits = 40) const;

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.value_, b.value_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.value_, b.value_); }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.value_, b.value_); }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.value_, b.value_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_); }

  private:
    mpfr_t value_;
    bool live_ = false;
};

/// Closed interval [lo, hi] with outward-rounded arithmetic. Every operation
/// returns an enclosure of the exact real result for all operand points.
class Interval {
  public:
    Interval();  // [0, 0]
    explicit Interval(long v);
    Interval(BigFloat lo, BigFloat hi);

    static Interval from_rational(const Rational& q);
    static Interval from_double(double v);
    static Interval pi();
    /// Enclosure of cos(p*pi/q) for integers p, q > 0.
    static Interval cos_pi_fraction(long p, long q);

    const BigFloat& lo() const { return lo_; }
    const BigFloat& hi() const { return hi_; }
    double mid() const;
    double width() const;

    bool contains_zero() const;
    bool certainly_positive() const;
    bool certainly_negative() const;
    bool certainly_nonnegative() const;
    bool certainly_le(const Interval& other) const;   // hi <= other.lo
    bool certainly_lt(const Interval& other) const;   // hi < other.lo
    bool contains(const Rational& q) const;
    bool subset_of(const Interval& other) const;

    Interval operator-() const;
    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b);
    Interval& operator+=(const Interval& b) { return *this = *this + b; }
    Interval& operator-=(const Interval& b) { return *this = *this - b; }
    Interval& operator*=(const Interval& b) { return *this = *this * b; }

    /// Requires lo >= 0.
    Interval sqrt() const;
    /// Base-2 logarithm; requires lo > 0.
    Interval log2() const;
    Interval hull(const Interval& other) const;

    std::string to_string(int digits = 20) const;

  private:
    BigFloat lo_;
    BigFloat hi_;
};

Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);

}  // namespace advkit
