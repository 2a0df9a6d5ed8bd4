#include "advkit/poly.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace advkit {

namespace {

using RatVec = std::vector<Rational>;

void trim(RatVec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

RatVec poly_mul(const RatVec& a, const RatVec& b) {
    if (a.empty() || b.empty()) return {};
    RatVec c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    trim(c);
    return c;
}

// Exact quotient of a by a monic b.
RatVec poly_div_exact(RatVec a, const RatVec& b) {
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) throw InternalError("cyclotomic division degree");
    RatVec q(a.size() - db);
    for (std::size_t i = a.size(); i-- > db;) {
        Rational c = a[i];
        q[i - db] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    trim(a);
    if (!a.empty()) throw InternalError("cyclotomic division left a remainder");
    return q;
}

RatVec cyclotomic(int m, std::map<int, RatVec>& memo) {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    RatVec p(static_cast<std::size_t>(m) + 1);
    p[0] = -1;
    p[static_cast<std::size_t>(m)] = 1;
    for (int d = 1; d < m; ++d)
        if (m % d == 0) p = poly_div_exact(p, cyclotomic(d, memo));
    memo[m] = p;
    return p;
}

void reduce(RatVec& c, const RatVec& modulus) {
    const std::size_t deg = modulus.size() - 1;
    for (std::size_t i = c.size(); i-- > deg;) {
        Rational lead = c[i];
        if (lead == 0) continue;
        for (std::size_t j = 0; j <= deg; ++j) c[i - deg + j] -= lead * modulus[j];
    }
    if (c.size() > deg) c.resize(deg);
    trim(c);
}

}  // namespace

std::shared_ptr<const CycloField> CycloField::make(int m) {
    if (m < 1 || m > 256) throw InputError("cyclotomic order must lie in [1,256]");
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const CycloField>> cache;
    static std::map<int, RatVec> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto f = std::make_shared<CycloField>();
    f->m_ = m;
    f->modulus_ = cyclotomic(m, memo);
    cache[m] = f;
    return f;
}

Cyclo::Cyclo(const Rational& r) {
    if (r != 0) c_.push_back(r);
}

Cyclo::Cyclo(std::shared_ptr<const CycloField> field, std::vector<Rational> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
    normalize();
}

void Cyclo::normalize() {
    if (field_) reduce(c_, field_->modulus());
    trim(c_);
}

Cyclo Cyclo::zeta_power(const std::shared_ptr<const CycloField>& field, long j) {
    long m = field->order();
    j %= m;
    if (j < 0) j += m;
    RatVec c(static_cast<std::size_t>(j) + 1);
    c.back() = 1;
    return Cyclo(field, std::move(c));
}

Cyclo Cyclo::cos_pi(const std::shared_ptr<const CycloField>& field, long j) {
    if (field->order() % 2 != 0) throw InputError("cos_pi needs a field of even order 2d");
    return (zeta_power(field, j) + zeta_power(field, -j)) * Cyclo(Rational(1, 2));
}

Rational Cyclo::rational_value() const {
    if (!is_rational()) throw DomainError("cyclotomic element is not rational");
    return c_.empty() ? Rational(0) : c_[0];
}

std::shared_ptr<const CycloField> Cyclo::common(const Cyclo& a, const Cyclo& b) {
    if (a.field_ && b.field_ && a.field_->order() != b.field_->order())
        throw InputError("mixing elements of different cyclotomic fields");
    return a.field_ ? a.field_ : b.field_;
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
    field_ = common(*this, o);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim(c_);
    return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) {
    field_ = common(*this, o);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim(c_);
    return *this;
}

Cyclo& Cyclo::operator*=(const Cyclo& o) {
    field_ = common(*this, o);
    c_ = poly_mul(c_, o.c_);
    normalize();
    return *this;
}

Cyclo Cyclo::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    if (is_rational()) return Cyclo(1 / c_[0]);
    // Solve (this * y) = 1 for y in the power basis.
    const std::size_t n = static_cast<std::size_t>(field_->dimension());
    std::vector<RatVec> a(n, RatVec(n + 1));
    for (std::size_t k = 0; k < n; ++k) {
        RatVec col = (*this * zeta_power(field_, static_cast<long>(k))).c_;
        for (std::size_t r = 0; r < col.size(); ++r) a[r][k] = col[r];
    }
    a[0][n] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw InternalError("singular multiplication matrix in a field");
        std::swap(a[p], a[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    RatVec y(n);
    for (std::size_t c = 0; c < n; ++c) y[c] = a[c][n] / a[c][c];
    return Cyclo(field_, std::move(y));
}

Interval Cyclo::enclose() const {
    if (is_rational()) return Interval::from_rational(rational_value());
    Interval s;
    const long m = field_->order();
    for (std::size_t j = 0; j < c_.size(); ++j)
        if (c_[j] != 0) s += Interval::from_rational(c_[j]) * Interval::cos_pi_fraction(2 * static_cast<long>(j), m);
    return s;
}

int Cyclo::sign() const {
    if (is_zero()) return 0;
    Interval e = enclose();
    if (e.width() >= 1e-30) throw InternalError("cyclotomic enclosure too wide for a sign decision");
    if (e.certainly_positive()) return 1;
    if (e.certainly_negative()) return -1;
    throw InternalError("sign of a nonzero cyclotomic element is undecided at working precision");
}

std::string Cyclo::to_string() const {
    if (is_rational()) return to_exact_string(rational_value());
    std::string s;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        if (!s.empty()) s += " + ";
        s += "(" + to_exact_string(c_[j]) + ")";
        if (j > 0) s += "*z" + std::to_string(field_->order()) + "^" + std::to_string(j);
    }
    return s;
}

UniPoly chebyshev(int d) {
    if (d < 0 || d > 64) throw InputError("chebyshev degree must lie in [0,64]");
    UniPoly prev(std::vector<Rational>{1});
    if (d == 0) return prev;
    UniPoly cur(std::vector<Rational>{0, 1});
    const UniPoly two_t(std::vector<Rational>{0, 2});
    for (int i = 1; i < d; ++i) {
        UniPoly next = two_t * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

int pror_degree(int k) {
    if (k < 1) throw InputError("promise OR needs k >= 1");
    Interval pi2 = Interval::pi() * Interval::pi();
    Interval target = Interval(k) * pi2;
    for (int d = 1;; ++d) {
        Interval lhs(4L * d * d);
        if (target.certainly_le(lhs)) return d;
        if (!lhs.certainly_lt(target)) throw InternalError("cannot decide 4d^2 >= k pi^2");
    }
}

namespace {

CycloPoly to_cyclo(const UniPoly& p) {
    std::vector<Cyclo> c;
    for (const Rational& v : p.coeffs()) c.emplace_back(v);
    return CycloPoly(std::move(c));
}

Cyclo eval(const CycloPoly& p, const Cyclo& t) {
    Cyclo s(0);
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) s = s * t + *it;
    return s;
}

Interval eval_interval(const std::vector<Interval>& coeffs, const Interval& x) {
    Interval s;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * x + *it;
    return s;
}

bool is_zero_or_one(const Cyclo& v) { return v == Cyclo(0) || v == Cyclo(1); }

}  // namespace

PrOrPoly pror_poly(int k) {
    if (k < 1 || k > 64) throw InputError("pror_poly supports 1 <= k <= 64");
    PrOrPoly out;
    out.k = k;
    out.d = pror_degree(k);
    const int d = out.d;
    out.field = CycloField::make(2 * d);
    const Cyclo a = Cyclo(1) - Cyclo::cos_pi(out.field, 1);
    const CycloPoly inner(std::vector<Cyclo>{Cyclo(1), -a});
    const CycloPoly td = to_cyclo(chebyshev(d)).compose(inner);
    out.r = (CycloPoly(std::vector<Cyclo>{Cyclo(1)}) - td) * Cyclo(Rational(1, 2));

    if (out.r.degree() != d) throw InternalError("promise OR polynomial has the wrong degree");
    if (!(eval(out.r, Cyclo(0)) == Cyclo(0))) throw InternalError("r(0) != 0");
    if (!(eval(out.r, Cyclo(1)) == Cyclo(1))) throw InternalError("r(1) != 1");

    const CycloPoly rp = out.r.derivative();
    const Cyclo a_inv = a.inverse();
    std::vector<Cyclo> roots;
    for (int j = 1; j < d; ++j) {
        Cyclo t = (Cyclo(1) - Cyclo::cos_pi(out.field, j)) * a_inv;
        if (!eval(rp, t).is_zero()) throw InternalError("t_j is not a root of r'");
        if (!is_zero_or_one(eval(out.r, t))) throw InternalError("r(t_j) is not 0 or 1");
        for (const Cyclo& s : roots)
            if (s == t) throw InternalError("critical points are not distinct");
        roots.push_back(t);
    }
    if (rp.degree() != d - 1) throw InternalError("r' has unexpected degree");
    Cyclo rk = eval(out.r, Cyclo(k));
    if (!is_zero_or_one(rk) && (rk.sign() < 0 || (Cyclo(1) - rk).sign() < 0))
        throw InternalError("r(k) lies outside [0,1]");
    for (const Cyclo& t : roots)
        if ((t - Cyclo(k)).sign() <= 0) out.critical_points.push_back(t);
    return out;
}

int isolate_critical_points(const PrOrPoly& p) {
    const CycloPoly rp = p.r.derivative();
    const CycloPoly rpp = rp.derivative();
    std::vector<Interval> c1, c2;
    for (const Cyclo& c : rp.coeffs()) c1.push_back(c.enclose());
    for (const Cyclo& c : rpp.coeffs()) c2.push_back(c.enclose());

    struct Root {
        Rational lo, hi;  // lo == hi for an exact rational root
    };
    std::vector<Root> found;
    auto exact_sign = [&](const Rational& t) { return eval(rp, Cyclo(t)).sign(); };

    std::vector<std::pair<Rational, Rational>> stack{{Rational(0), Rational(p.k)}};
    if (exact_sign(0) == 0) found.push_back({0, 0});
    if (exact_sign(p.k) == 0) found.push_back({p.k, p.k});
    const Rational min_width(1, mpz_class(1) << 80);
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        Interval x = Interval::from_rational(lo).hull(Interval::from_rational(hi));
        if (!eval_interval(c1, x).contains_zero()) continue;
        int slo = exact_sign(lo), shi = exact_sign(hi);
        if (!eval_interval(c2, x).contains_zero()) {
            // r' strictly monotone here: one interior root iff the endpoint signs differ strictly.
            if (slo != 0 && shi != 0 && slo != shi) found.push_back({lo, hi});
            continue;
        }
        if (hi - lo < min_width) throw InternalError("root isolation of r' did not converge");
        Rational mid = (lo + hi) / 2;
        if (exact_sign(mid) == 0) found.push_back({mid, mid});
        stack.push_back({lo, mid});
        stack.push_back({mid, hi});
    }
    if (found.size() != p.critical_points.size())
        throw InternalError("isolated " + std::to_string(found.size()) + " roots of r', expected " +
                            std::to_string(p.critical_points.size()));
    for (const Root& root : found) {
        int matches = 0;
        for (const Cyclo& t : p.critical_points) {
            if (root.lo == root.hi) {
                matches += t == Cyclo(root.lo);
            } else {
                matches += (t - Cyclo(root.lo)).sign() > 0 && (Cyclo(root.hi) - t).sign() > 0;
            }
        }
        if (matches != 1) throw InternalError("isolated root does not match a unique critical point");
    }
    return static_cast<int>(found.size());
}

PartialFn compose_pror(const PartialFn& f, int k) {
    const int n = f.arity();
    if (k < 1) throw InputError("k must be positive");
    if (n * k > kMaxArity) throw ResourceError("f o PrOR_k needs " + std::to_string(n * k) + " bits, cap is 16");
    const int total = n * k;
    std::vector<Value> table(std::size_t{1} << total, Value::Undefined);
    const Input copy_mask = (Input{1} << k) - 1;
    for (Input y = 0; y < table.size(); ++y) {
        Input z = 0;
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) {
            int w = popcount((y >> (j * k)) & copy_mask);
            if (w > 1) ok = false;
            if (w == 1) z |= Input{1} << j;
        }
        if (ok && f.in_domain(z)) table[y] = f(z);
    }
    return PartialFn(total, std::move(table));
}

CycloMultiPoly compose_with_pror(const MultiPoly& p, int k, std::size_t max_terms) {
    const int n = p.arity();
    if (n * k > 32) throw ResourceError("composition needs more than 32 variables");
    PrOrPoly pr = pror_poly(k);
    // (sum x)^m reduces to sum over nonempty S of surj(m,|S|) x_S.
    std::vector<Cyclo> by_size(static_cast<std::size_t>(k) + 1, Cyclo(0));
    by_size[0] = pr.r.coeff(0);
    for (int s = 1; s <= k; ++s)
        for (int m = 1; m <= pr.r.degree(); ++m) {
            mpz_class surj = 0, binom = 1;
            for (int i = 0; i <= s; ++i) {
                mpz_class power;
                mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(s - i), static_cast<unsigned long>(m));
                surj += (i % 2 ? -1 : 1) * binom * power;
                binom = binom * (s - i) / (i + 1);
            }
            if (surj != 0) by_size[static_cast<std::size_t>(s)] += pr.r.coeff(m) * Cyclo(Rational(surj));
        }
    std::vector<std::pair<std::uint32_t, Cyclo>> copy_terms;
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << k); ++s)
        if (!by_size[static_cast<std::size_t>(popcount(s))].is_zero())
            copy_terms.emplace_back(s, by_size[static_cast<std::size_t>(popcount(s))]);

    CycloMultiPoly out(n * k);
    for (const auto& [mask, coeff] : p.terms()) {
        std::vector<std::pair<std::uint32_t, Cyclo>> acc{{0u, Cyclo(coeff)}};
        for (int j = 0; j < n; ++j) {
            if (!((mask >> j) & 1U)) continue;
            std::vector<std::pair<std::uint32_t, Cyclo>> next;
            if (acc.size() * copy_terms.size() > max_terms)
                throw ResourceError("composed polynomial exceeds " + std::to_string(max_terms) + " terms");
            for (const auto& [m1, c1] : acc)
                for (const auto& [m2, c2] : copy_terms) next.emplace_back(m1 | (m2 << (j * k)), c1 * c2);
            acc = std::move(next);
        }
        for (const auto& [m, c] : acc) out.add_term(m, c);
        if (out.num_terms() > max_terms)
            throw ResourceError("composed polynomial exceeds " + std::to_string(max_terms) + " terms");
    }
    return out;
}

bool approximates(const CycloMultiPoly& q, const PartialFn& F, const Rational& eps) {
    if (q.arity() != F.arity()) throw InputError("arity mismatch");
    for (Input x : F.domain()) {
        Cyclo diff = q.evaluate(x) - Cyclo(F.bit(x));
        if ((Cyclo(eps) - diff).sign() < 0 || (Cyclo(eps) + diff).sign() < 0) return false;
    }
    return true;
}

namespace {

void require_bounded(const MultiPoly& p) {
    for (Input x = 0; x < (Input{1} << p.arity()); ++x) {
        Rational v = p.evaluate(x);
        if (v < 0 || v > 1)
            throw InputError("polynomial value " + to_exact_string(v) + " at " + bit_string(x, p.arity()) +
                             " leaves [0,1]");
    }
}

}  // namespace

Completion completion_from_poly(const MultiPoly& p, const PartialFn& f) {
    if (p.arity() != f.arity()) throw InputError("arity mismatch");
    require_bounded(p);
    std::vector<int> labels(f.size());
    for (Input x = 0; x < f.size(); ++x) {
        Rational v = p.evaluate(x);
        labels[x] = v >= Rational(1, 2) ? 1 : 0;
        if (f.in_domain(x) && abs(v - f.bit(x)) >= Rational(1, 2))
            throw InputError("polynomial misses f at " + bit_string(x, f.arity()) + " by at least 1/2");
    }
    return Completion{TruthTable(f.arity(), std::move(labels))};
}

MultiPoly rescale_poly(const MultiPoly& p, const Rational& eps) {
    require_bounded(p);
    Rational den = 3 - 2 * eps;
    return p * Rational(2 / den) + MultiPoly::constant(p.arity(), (1 - 2 * eps) / den);
}

BlowupResult blowup_blocks(const PartialFn& f, Input x, const BlockWeighting& w, int k) {
    const int n = f.arity();
    if (!f.in_domain(x)) throw DomainError("blowup base input is outside the domain");
    std::vector<Block> sensitive = sensitive_blocks(f, x);
    mpz_class lcm = 1;
    std::vector<Rational> load(static_cast<std::size_t>(n));
    for (const auto& [b, weight] : w.w) {
        if (weight < 0) throw InputError("negative block weight");
        if (std::find(sensitive.begin(), sensitive.end(), b) == sensitive.end())
            throw InputError("weighted block is not sensitive at " + bit_string(x, n));
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), weight.get_den_mpz_t());
        for (int i = 0; i < n; ++i)
            if (b.contains(i)) load[static_cast<std::size_t>(i)] += weight;
    }
    for (const Rational& l : load)
        if (l > 1) throw InputError("block weighting overloads a coordinate");
    const long L = lcm.get_si();
    if (k < 1 || k % L != 0) throw InputError("k must be a positive multiple of L = " + lcm.get_str());
    std::vector<Value> shifted(f.size());
    for (Input y = 0; y < f.size(); ++y) shifted[y] = f(y ^ x);
    BlowupResult out{{}, L, x, compose_pror(PartialFn(n, shifted), k)};

    std::vector<int> next_bit(static_cast<std::size_t>(n), 0);
    for (const auto& [b, weight] : w.w) {
        Rational copies = weight * k;
        long count = copies.get_num().get_si();
        for (long c = 0; c < count; ++c) {
            std::uint32_t mask = 0;
            for (int j = 0; j < n; ++j)
                if (b.contains(j)) mask |= std::uint32_t{1} << (j * k + next_bit[static_cast<std::size_t>(j)]++);
            out.blocks.push_back(Block{mask});
        }
    }
    std::uint32_t used = 0;
    for (Block b : out.blocks) {
        if ((used & b.bits) != 0) throw InternalError("blown-up blocks overlap");
        used |= b.bits;
        if (!out.composed.in_domain(b.bits) || out.composed.bit(b.bits) == out.composed.bit(0))
            throw InternalError("blown-up block is not sensitive");
    }
    return out;
}

FiniteKBound finite_k_bound(const PartialFn& f, const Rational& eps, int k) {
    FiniteKBound b;
    b.k = k;
    b.eps = eps;
    b.adeg = approx_deg(f, eps).degree;
    b.fbs = fbs(f);
    Interval half_pi_root_k = Interval::pi() * Interval(k).sqrt() / Interval(2);
    b.lhs = Interval(b.adeg) * (half_pi_root_k + Interval(1));
    Interval factor = Interval::from_rational((1 - 2 * eps) / (2 * (1 - eps)));
    b.rhs = (factor * Interval(k) * Interval::from_rational(b.fbs)).sqrt();
    b.holds = b.rhs.certainly_le(b.lhs);
    return b;
}

nlohmann::json to_json(const Cyclo& c) {
    return {{"exact", c.to_string()}, {"decimal", c.enclose().mid()}};
}

nlohmann::json to_json(const MultiPoly& p) {
    nlohmann::json mons = nlohmann::json::array();
    for (const auto& [mask, c] : p.terms()) mons.push_back({{"vars", Block{mask}.coordinates()}, {"coeff", to_exact_string(c)}});
    return {{"n", p.arity()}, {"monomials", mons}};
}

nlohmann::json to_json(const CycloMultiPoly& p) {
    nlohmann::json mons = nlohmann::json::array();
    for (const auto& [mask, c] : p.terms()) mons.push_back({{"vars", Block{mask}.coordinates()}, {"coeff", to_json(c)}});
    return {{"n", p.arity()}, {"monomials", mons}};
}

MultiPoly multipoly_from_json(const nlohmann::json& j) {
    try {
        MultiPoly p(j.at("n").get<int>());
        for (const auto& m : j.at("monomials")) {
            std::uint32_t mask = 0;
            for (int v : m.at("vars").get<std::vector<int>>()) {
                if (v < 1 || v > p.arity()) throw InputError("monomial variable out of range");
                mask |= std::uint32_t{1} << (v - 1);
            }
            p.add_term(mask, parse_rational(m.at("coeff").get<std::string>()));
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed polynomial JSON: ") + e.what());
    }
}

}  // namespace advkit
