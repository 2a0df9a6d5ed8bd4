#pragma once

// Multilinear polynomials over {0,1}^n. A monomial is a coordinate mask, so a
// product of monomials is the union of masks (x_i^2 = x_i on the cube).

#include <algorithm>
#include <cstdint>
#include <map>

#include "advkit/boolfn.hpp"

namespace advkit {

template <class C>
class MultiPolyT {
  public:
    using Terms = std::map<std::uint32_t, C>;

    MultiPolyT() = default;
    explicit MultiPolyT(int n) : n_(n) {
        if (n < 0 || n > 32) throw InputError("multilinear polynomial arity must be in [0,32]");
    }

    static MultiPolyT constant(int n, const C& c) {
        MultiPolyT p(n);
        p.add_term(0, c);
        return p;
    }

    /// x_i for a 1-based coordinate i.
    static MultiPolyT variable(int n, int i) {
        if (i < 1 || i > n) throw InputError("variable index out of range");
        MultiPolyT p(n);
        p.add_term(std::uint32_t{1} << (i - 1), C(1));
        return p;
    }

    int arity() const { return n_; }
    const Terms& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    void add_term(std::uint32_t mask, const C& c) {
        if (n_ < 32 && (mask >> n_) != 0) throw InputError("monomial uses a coordinate beyond n");
        auto [it, inserted] = terms_.try_emplace(mask, c);
        if (!inserted) it->second += c;
        if (it->second == C(0)) terms_.erase(it);
    }

    C coefficient(std::uint32_t mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? C(0) : it->second;
    }

    int degree() const {
        int d = -1;  // zero polynomial
        for (const auto& [mask, c] : terms_) d = std::max(d, popcount(mask));
        return d;
    }

    C evaluate(Input x) const {
        C s(0);
        for (const auto& [mask, c] : terms_)
            if ((mask & ~x) == 0) s += c;
        return s;
    }

    MultiPolyT& operator+=(const MultiPolyT& o) {
        check_arity(o);
        for (const auto& [mask, c] : o.terms_) add_term(mask, c);
        return *this;
    }

    MultiPolyT& operator-=(const MultiPolyT& o) {
        check_arity(o);
        for (const auto& [mask, c] : o.terms_) add_term(mask, C(0) - c);
        return *this;
    }

    MultiPolyT& operator*=(const C& s) {
        if (s == C(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [mask, c] : terms_) c *= s;
        return *this;
    }

    friend MultiPolyT operator+(MultiPolyT a, const MultiPolyT& b) { return a += b; }
    friend MultiPolyT operator-(MultiPolyT a, const MultiPolyT& b) { return a -= b; }
    friend MultiPolyT operator*(MultiPolyT a, const C& s) { return a *= s; }

    friend MultiPolyT operator*(const MultiPolyT& a, const MultiPolyT& b) {
        a.check_arity(b);
        MultiPolyT out(a.n_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma | mb, ca * cb);
        return out;
    }

    friend bool operator==(const MultiPolyT& a, const MultiPolyT& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

  private:
    void check_arity(const MultiPolyT& o) const {
        if (o.n_ != n_) throw InputError("polynomial arity mismatch");
    }

    int n_ = 0;
    Terms terms_;
};

using MultiPoly = MultiPolyT<Rational>;

}  // namespace advkit
