#pragma once

// Exact univariate and multilinear polynomial machinery for the promise-OR
// construction. Coefficients involving cos(pi/d) live in the cyclotomic field
// Q(zeta) with zeta = exp(i*pi/d), reduced modulo the 2d-th cyclotomic polynomial.

#include <memory>
#include <string>
#include <vector>

#include "advkit/interval.hpp"
#include "advkit/measures.hpp"
#include "advkit/multipoly.hpp"
#include "json.hpp"

namespace advkit {

class CycloField {
  public:
    /// Q(zeta_m), m >= 1.
    static std::shared_ptr<const CycloField> make(int m);

    int order() const { return m_; }
    int dimension() const { return static_cast<int>(modulus_.size()) - 1; }
    /// Monic minimal polynomial of zeta, ascending coefficients.
    const std::vector<Rational>& modulus() const { return modulus_; }

  private:
    int m_ = 1;
    std::vector<Rational> modulus_;
};

/// Element of a cyclotomic field; without a field it is a plain rational.
class Cyclo {
  public:
    Cyclo() = default;
    Cyclo(long v) : Cyclo(Rational(v)) {}  // NOLINT(google-explicit-constructor)
    Cyclo(const Rational& r);               // NOLINT(google-explicit-constructor)
    Cyclo(std::shared_ptr<const CycloField> field, std::vector<Rational> coeffs);

    /// zeta^j in the given field.
    static Cyclo zeta_power(const std::shared_ptr<const CycloField>& field, long j);
    /// cos(j*pi/d) in Q(zeta_{2d}).
    static Cyclo cos_pi(const std::shared_ptr<const CycloField>& field, long j);

    const std::shared_ptr<const CycloField>& field() const { return field_; }
    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool is_rational() const { return c_.size() <= 1; }
    Rational rational_value() const;  // throws DomainError unless is_rational()

    /// Real-part enclosure sum_j c_j cos(j*pi*2/m).
    Interval enclose() const;
    /// Sign of a real element: exact for zero, interval-decided otherwise.
    int sign() const;

    Cyclo inverse() const;

    Cyclo& operator+=(const Cyclo& o);
    Cyclo& operator-=(const Cyclo& o);
    Cyclo& operator*=(const Cyclo& o);
    friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
    friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
    friend Cyclo operator*(Cyclo a, const Cyclo& b) { return a *= b; }
    friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }
    Cyclo operator-() const { return Cyclo(0) - *this; }
    friend bool operator==(const Cyclo& a, const Cyclo& b) { return a.c_ == b.c_; }

    std::string to_string() const;

  private:
    void normalize();
    static std::shared_ptr<const CycloField> common(const Cyclo& a, const Cyclo& b);

    std::shared_ptr<const CycloField> field_;
    std::vector<Rational> c_;  // trimmed: no trailing zeros
};

template <class C>
class UniPolyT {
  public:
    UniPolyT() = default;
    explicit UniPolyT(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPolyT monomial(int degree, const C& coeff) {
        std::vector<C> c(static_cast<std::size_t>(degree) + 1, C(0));
        c.back() = coeff;
        return UniPolyT(std::move(c));
    }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<C>& coeffs() const { return c_; }
    C coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : C(0); }

    template <class X>
    X operator()(const X& t) const {
        X s(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * t + X(*it);
        return s;
    }

    UniPolyT derivative() const {
        std::vector<C> d;
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * C(static_cast<long>(i)));
        return UniPolyT(std::move(d));
    }

    /// this(inner(t)).
    UniPolyT compose(const UniPolyT& inner) const {
        UniPolyT out;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) out = out * inner + UniPolyT(std::vector<C>{*it});
        return out;
    }

    friend UniPolyT operator+(const UniPolyT& a, const UniPolyT& b) {
        std::vector<C> c(std::max(a.c_.size(), b.c_.size()), C(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return UniPolyT(std::move(c));
    }
    friend UniPolyT operator-(const UniPolyT& a, const UniPolyT& b) { return a + b * C(-1); }
    friend UniPolyT operator*(const UniPolyT& a, const C& s) {
        std::vector<C> c = a.c_;
        for (C& v : c) v *= s;
        return UniPolyT(std::move(c));
    }
    friend UniPolyT operator*(const UniPolyT& a, const UniPolyT& b) {
        if (a.c_.empty() || b.c_.empty()) return UniPolyT();
        std::vector<C> c(a.c_.size() + b.c_.size() - 1, C(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return UniPolyT(std::move(c));
    }
    friend bool operator==(const UniPolyT& a, const UniPolyT& b) { return a.c_ == b.c_; }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == C(0)) c_.pop_back();
    }
    std::vector<C> c_;
};

using UniPoly = UniPolyT<Rational>;
using CycloPoly = UniPolyT<Cyclo>;
using CycloMultiPoly = MultiPolyT<Cyclo>;

/// T_d with integer coefficients, d <= 64.
UniPoly chebyshev(int d);

/// Smallest d with 4d^2/pi^2 >= k, decided with a rigorous enclosure of pi.
int pror_degree(int k);

struct PrOrPoly {
    int k = 0;
    int d = 0;
    std::shared_ptr<const CycloField> field;  // Q(zeta_{2d})
    CycloPoly r;
    /// Interior critical points t_j = (1 - cos(j pi/d)) / (1 - cos(pi/d)) that lie in [0,k].
    std::vector<Cyclo> critical_points;
};

/// r(t) = (1 - T_d(1 - (1 - cos(pi/d)) t)) / 2 with d = pror_degree(k), k <= 64.
/// Checks r(0) = 0, r(1) = 1 exactly and proves 0 <= r <= 1 on [0,k]: the t_j
/// are exact roots of r' (all d-1 of them), r(t_j) is 0 or 1, and r(k) lies in
/// [0,1]. Throws InternalError if any check fails.
PrOrPoly pror_poly(int k);

/// Independent check of the same bound for small k: isolates the real roots of
/// r' on [0,k] by interval bisection and compares them with the t_j. Returns
/// the number of isolated roots; throws InternalError on disagreement.
int isolate_critical_points(const PrOrPoly& p);

/// The promise-OR composed function f o PrOR_k on k*n bits; copy j occupies bits j*k .. j*k+k-1.
PartialFn compose_pror(const PartialFn& f, int k);

/// p with variable j replaced by r(sum of copy j's bits), reduced multilinearly.
/// Throws ResourceError past max_terms monomials.
CycloMultiPoly compose_with_pror(const MultiPoly& p, int k, std::size_t max_terms = std::size_t{1} << 20);

/// True iff |q(x) - F(x)| <= eps at every domain point of F (exact sign decisions).
bool approximates(const CycloMultiPoly& q, const PartialFn& F, const Rational& eps);

/// f'(x) = 1 iff p(x) >= 1/2. Throws InputError naming the point if p leaves [0,1]
/// on the cube or misses f by 1/2 or more on Dom(f).
Completion completion_from_poly(const MultiPoly& p, const PartialFn& f);

/// (2p + 1 - 2eps) / (3 - 2eps).
MultiPoly rescale_poly(const MultiPoly& p, const Rational& eps);

struct BlowupResult {
    std::vector<Block> blocks;  // over k*n bits, sensitive for 0^{kn} in the shifted composition
    long common_denominator = 1;
    Input shift = 0;  // f is replaced by y -> f(y xor shift) so the base input becomes 0^n
    PartialFn composed;  // (f shifted) o PrOR_k
};

/// k*w_B disjoint sensitive blocks per weighted block B, one bit of each copy per block.
/// Throws InputError if k is not a multiple of the common denominator L (message states L)
/// or w is not a valid packing of sensitive blocks at x.
BlowupResult blowup_blocks(const PartialFn& f, Input x, const BlockWeighting& w, int k);

struct FiniteKBound {
    int k = 0;
    Rational eps;
    int adeg = 0;
    Rational fbs;
    Interval lhs;  // adeg * (pi sqrt(k)/2 + 1)
    Interval rhs;  // sqrt((1-2eps)/(2(1-eps)) * k * fbs)
    bool holds = false;  // lhs >= rhs certainly
};

FiniteKBound finite_k_bound(const PartialFn& f, const Rational& eps, int k);

nlohmann::json to_json(const MultiPoly& p);
nlohmann::json to_json(const CycloMultiPoly& p);
nlohmann::json to_json(const Cyclo& c);
MultiPoly multipoly_from_json(const nlohmann::json& j);

}  // namespace advkit
