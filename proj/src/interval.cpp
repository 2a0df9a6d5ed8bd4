#include "advkit/interval.hpp"

#include <utility>
#include <vector>

namespace advkit {

BigFloat::BigFloat() {
    mpfr_init2(value_, kPrecision);
    mpfr_set_zero(value_, 1);
    live_ = true;
}

BigFloat::BigFloat(long v) {
    mpfr_init2(value_, kPrecision);
    mpfr_set_si(value_, v, MPFR_RNDN);
    live_ = true;
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(value_, kPrecision);
    mpfr_set(value_, other.value_, MPFR_RNDN);
    live_ = true;
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    // MPFR has no move; swap with a fresh zero so `other` stays valid.
    mpfr_init2(value_, kPrecision);
    mpfr_swap(value_, other.value_);
    live_ = true;
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) mpfr_set(value_, other.value_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    if (this != &other) mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat() {
    if (live_) mpfr_clear(value_);
}

double BigFloat::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string BigFloat::to_string(int digits) const {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
    return std::string(buf.data());
}

namespace {

BigFloat rounded_rational(const Rational& q, mpfr_rnd_t rnd) {
    BigFloat r;
    mpfr_set_q(r.raw(), q.get_mpq_t(), rnd);
    return r;
}

BigFloat min4(const BigFloat& a, const BigFloat& b, const BigFloat& c, const BigFloat& d) {
    const BigFloat* m = &a;
    for (const BigFloat* p : {&b, &c, &d})
        if (*p < *m) m = p;
    return *m;
}

BigFloat max4(const BigFloat& a, const BigFloat& b, const BigFloat& c, const BigFloat& d) {
    const BigFloat* m = &a;
    for (const BigFloat* p : {&b, &c, &d})
        if (*p > *m) m = p;
    return *m;
}

}  // namespace

Interval::Interval() = default;

Interval::Interval(long v) : lo_(v), hi_(v) {}

Interval::Interval(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) throw InternalError("interval with lo > hi");
}

Interval Interval::from_rational(const Rational& q) {
    return Interval(rounded_rational(q, MPFR_RNDD), rounded_rational(q, MPFR_RNDU));
}

Interval Interval::from_double(double v) {
    BigFloat b;
    mpfr_set_d(b.raw(), v, MPFR_RNDN);  // exact at 256 bits
    return Interval(b, b);
}

Interval Interval::pi() {
    BigFloat lo, hi;
    mpfr_const_pi(lo.raw(), MPFR_RNDD);
    mpfr_const_pi(hi.raw(), MPFR_RNDU);
    return Interval(lo, hi);
}

Interval Interval::cos_pi_fraction(long p, long q) {
    if (q <= 0) throw InputError("cos_pi_fraction needs q > 0");
    long period = 2 * q;
    p %= period;
    if (p < 0) p += period;
    if (p > q) p = period - p;  // cos(2pi - t) = cos(t)
    if (p == 0) return Interval(1);
    if (p == q) return Interval(-1);
    if (2 * p == q) return Interval(0);
    // t = p*pi/q lies strictly inside (0, pi) where cos is decreasing.
    BigFloat tlo, thi;
    mpfr_const_pi(tlo.raw(), MPFR_RNDD);
    mpfr_const_pi(thi.raw(), MPFR_RNDU);
    mpfr_mul_si(tlo.raw(), tlo.raw(), p, MPFR_RNDD);
    mpfr_mul_si(thi.raw(), thi.raw(), p, MPFR_RNDU);
    mpfr_div_si(tlo.raw(), tlo.raw(), q, MPFR_RNDD);
    mpfr_div_si(thi.raw(), thi.raw(), q, MPFR_RNDU);
    BigFloat lo, hi;
    mpfr_cos(lo.raw(), thi.raw(), MPFR_RNDD);
    mpfr_cos(hi.raw(), tlo.raw(), MPFR_RNDU);
    return Interval(lo, hi);
}

double Interval::mid() const {
    BigFloat m;
    mpfr_add(m.raw(), lo_.raw(), hi_.raw(), MPFR_RNDN);
    mpfr_div_2ui(m.raw(), m.raw(), 1, MPFR_RNDN);
    return m.to_double();
}

double Interval::width() const {
    BigFloat w;
    mpfr_sub(w.raw(), hi_.raw(), lo_.raw(), MPFR_RNDU);
    return mpfr_get_d(w.raw(), MPFR_RNDU);
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_.raw()) <= 0 && mpfr_sgn(hi_.raw()) >= 0; }
bool Interval::certainly_positive() const { return mpfr_sgn(lo_.raw()) > 0; }
bool Interval::certainly_negative() const { return mpfr_sgn(hi_.raw()) < 0; }
bool Interval::certainly_nonnegative() const { return mpfr_sgn(lo_.raw()) >= 0; }
bool Interval::certainly_le(const Interval& other) const { return hi_ <= other.lo_; }
bool Interval::certainly_lt(const Interval& other) const { return hi_ < other.lo_; }

bool Interval::contains(const Rational& q) const {
    return mpfr_cmp_q(lo_.raw(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.raw(), q.get_mpq_t()) >= 0;
}

bool Interval::subset_of(const Interval& other) const { return other.lo_ <= lo_ && hi_ <= other.hi_; }

Interval Interval::operator-() const {
    BigFloat lo, hi;
    mpfr_neg(lo.raw(), hi_.raw(), MPFR_RNDD);
    mpfr_neg(hi.raw(), lo_.raw(), MPFR_RNDU);
    return Interval(lo, hi);
}

Interval operator+(const Interval& a, const Interval& b) {
    BigFloat lo, hi;
    mpfr_add(lo.raw(), a.lo_.raw(), b.lo_.raw(), MPFR_RNDD);
    mpfr_add(hi.raw(), a.hi_.raw(), b.hi_.raw(), MPFR_RNDU);
    return Interval(lo, hi);
}

Interval operator-(const Interval& a, const Interval& b) {
    BigFloat lo, hi;
    mpfr_sub(lo.raw(), a.lo_.raw(), b.hi_.raw(), MPFR_RNDD);
    mpfr_sub(hi.raw(), a.hi_.raw(), b.lo_.raw(), MPFR_RNDU);
    return Interval(lo, hi);
}

Interval operator*(const Interval& a, const Interval& b) {
    BigFloat p[4], q[4];
    const BigFloat* xs[2] = {&a.lo_, &a.hi_};
    const BigFloat* ys[2] = {&b.lo_, &b.hi_};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mpfr_mul(p[2 * i + j].raw(), xs[i]->raw(), ys[j]->raw(), MPFR_RNDD);
            mpfr_mul(q[2 * i + j].raw(), xs[i]->raw(), ys[j]->raw(), MPFR_RNDU);
        }
    return Interval(min4(p[0], p[1], p[2], p[3]), max4(q[0], q[1], q[2], q[3]));
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw DomainError("interval division by an interval containing zero");
    BigFloat p[4], q[4];
    const BigFloat* xs[2] = {&a.lo_, &a.hi_};
    const BigFloat* ys[2] = {&b.lo_, &b.hi_};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mpfr_div(p[2 * i + j].raw(), xs[i]->raw(), ys[j]->raw(), MPFR_RNDD);
            mpfr_div(q[2 * i + j].raw(), xs[i]->raw(), ys[j]->raw(), MPFR_RNDU);
        }
    return Interval(min4(p[0], p[1], p[2], p[3]), max4(q[0], q[1], q[2], q[3]));
}

Interval Interval::sqrt() const {
    if (mpfr_sgn(lo_.raw()) < 0) throw DomainError("sqrt of an interval reaching below zero");
    BigFloat lo, hi;
    mpfr_sqrt(lo.raw(), lo_.raw(), MPFR_RNDD);
    mpfr_sqrt(hi.raw(), hi_.raw(), MPFR_RNDU);
    return Interval(lo, hi);
}

Interval Interval::log2() const {
    if (mpfr_sgn(lo_.raw()) <= 0) throw DomainError("log2 of a non-positive interval");
    BigFloat lo, hi;
    mpfr_log2(lo.raw(), lo_.raw(), MPFR_RNDD);
    mpfr_log2(hi.raw(), hi_.raw(), MPFR_RNDU);
    return Interval(lo, hi);
}

Interval Interval::hull(const Interval& other) const {
    return Interval(lo_ < other.lo_ ? lo_ : other.lo_, hi_ > other.hi_ ? hi_ : other.hi_);
}

std::string Interval::to_string(int digits) const {
    return "[" + lo_.to_string(digits) + ", " + hi_.to_string(digits) + "]";
}

Interval min(const Interval& a, const Interval& b) {
    return Interval(a.lo() < b.lo() ? a.lo() : b.lo(), a.hi() < b.hi() ? a.hi() : b.hi());
}

Interval max(const Interval& a, const Interval& b) {
    return Interval(a.lo() > b.lo() ? a.lo() : b.lo(), a.hi() > b.hi() ? a.hi() : b.hi());
}

}  // namespace advkit
