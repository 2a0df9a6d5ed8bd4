// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "advkit/cli.hpp"
#include "advkit/conversions.hpp"
#include "advkit/gadgets.hpp"
#include "advkit/liftsim.hpp"
#include "advkit/measures.hpp"
#include "advkit/poly.hpp"

using namespace advkit;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << " first failure: " << what << ";";
            pass = false;
        }
    }
};

Input flip(Input x, std::uint32_t bits) { return x ^ bits; }

// Min-constraint feasibility of q on every pair of differently labelled domain points.
bool min_feasible(const PartialFn& f, const WeightScheme& q) {
    const int n = f.arity();
    auto weight = [&](Input x, int i) {
        const int p = q.position(x);
        return p < 0 ? Rational(0) : q.at(p, i);
    };
    for (Input x : f.domain())
        for (Input y : f.domain()) {
            if (f.bit(x) == f.bit(y)) continue;
            Rational s = 0;
            for (int i = 0; i < n; ++i)
                if (((x ^ y) >> i) & 1U) s += std::min(weight(x, i), weight(y, i));
            if (s < 1) return false;
        }
    return true;
}

Rational max_row(const std::vector<std::vector<Rational>>& rows) {
    Rational best = 0;
    for (const auto& r : rows) {
        Rational s = 0;
        for (const Rational& v : r) s += v;
        best = std::max(best, s);
    }
    return best;
}

// Exact P[Binomial(k, p) >= t] by direct summation.
Rational tail_at_least(int k, const Rational& p, int t) {
    Rational s = 0;
    for (int j = std::max(t, 0); j <= k; ++j) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
        Rational term(c);
        for (int a = 0; a < j; ++a) term *= p;
        for (int a = 0; a < k - j; ++a) term *= 1 - p;
        s += term;
    }
    return s;
}

std::vector<int> bits_of(Input z, int n) {
    std::vector<int> b;
    for (int i = 0; i < n; ++i) b.push_back(static_cast<int>((z >> i) & 1U));
    return b;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    std::size_t instances = 0, checks = 0, failures = 0, errors = 0;
    for (auto [kind, n] : {std::pair{CorpusSpec::Kind::Total, 3}, std::pair{CorpusSpec::Kind::Partial, 2}}) {
        CorpusSpec spec;
        spec.kind = kind;
        spec.n = n;
        const auto corpus = enumerate_corpus(spec);
        o.require(corpus.size() == (kind == CorpusSpec::Kind::Total ? 256U : 80U), "corpus size");
        const VerificationReport rep = verify_relations(spec, corpus, {});
        instances += rep.instances.size();
        for (const auto& i : rep.instances) {
            checks += i.checks.size();
            for (const auto& c : i.checks)
                if (!c.pass) o.require(false, c.name + " at " + i.table);
            if (!i.error.empty()) o.require(false, "error at " + i.table + ": " + i.error);
        }
        failures += rep.failures();
        errors += rep.errors();
    }
    o.detail << " instances=" << instances << " checks=" << checks << " violations=" << failures
             << " errors=" << errors;
    return o;
}

// Adv(PrOR_2): the constrained pairs are (00,10) on bit 1 and (00,01) on bit 2, so an
// optimal scheme uses only a = q(00,1), b = q(00,2), q(10,1) = 1/a, q(01,2) = 1/b.
double grid_adv_pror2() {
    auto obj = [](double a, double b) { return std::max({a + b, 1 / a, 1 / b}); };
    double lo_a = 0.01, hi_a = 3, lo_b = 0.01, hi_b = 3, best = INFINITY, ba = 1, bb = 1;
    for (int level = 0; level < 6; ++level) {
        const int steps = 200;
        const double da = (hi_a - lo_a) / steps, db = (hi_b - lo_b) / steps;
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; j <= steps; ++j) {
                const double a = lo_a + i * da, b = lo_b + j * db, v = obj(a, b);
                if (v < best) best = v, ba = a, bb = b;
            }
        lo_a = std::max(1e-6, ba - 2 * da), hi_a = ba + 2 * da;
        lo_b = std::max(1e-6, bb - 2 * db), hi_b = bb + 2 * db;
    }
    return best;
}

// Lower bound: every distance-1 constrained pair forces q(x,i) >= 1 under min
// constraints. Upper bound: the all-ones scheme when it is feasible.
std::pair<Rational, std::optional<Rational>> cadv_oracle(const PartialFn& f) {
    const int n = f.arity();
    Rational lower = 0;
    WeightScheme ones;
    ones.kind = WeightScheme::Kind::CAdv;
    ones.n = n;
    std::vector<std::vector<Rational>> rows;
    for (Input x : f.domain()) {
        int forced = 0;
        for (int i = 0; i < n; ++i) {
            const Input y = flip(x, 1U << i);
            forced += f.in_domain(y) && f.bit(y) != f.bit(x);
        }
        lower = std::max(lower, Rational(forced));
        ones.inputs.push_back(x);
        for (int i = 0; i < n; ++i) ones.q.push_back(1);
        rows.push_back(std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)));
    }
    if (!min_feasible(f, ones)) return {lower, std::nullopt};
    return {lower, max_row(rows)};
}

Outcome criterion2() {
    Outcome o;
    for (int n = 1; n <= kMaxMeasureArity; ++n) {
        // n singleton blocks pack at 0^n and the all-ones cover meets every block.
        const PartialFn f = or_fn(n);
        bool singletons = true;
        for (int i = 0; i < n; ++i) singletons = singletons && f.bit(1U << i) != f.bit(0);
        o.require(singletons && fbs_at(f, 0).value == n, "fbs(0^n, OR_n) at n=" + std::to_string(n));
    }
    for (int n = 1; n <= 4; ++n) {
        auto [lo, hi] = cadv_oracle(parity_fn(n));
        const Rational v = cadv(parity_fn(n)).value;
        o.require(hi && lo == n && *hi == n && v == n, "CAdv(Parity_n) at n=" + std::to_string(n));
    }
    {
        auto [lo, hi] = cadv_oracle(promise_or_fn(2));
        const Rational v = cadv(promise_or_fn(2)).value;
        o.require(hi && lo == 2 && *hi == 2 && v == 2, "CAdv(PrOR_2)");
    }
    const double grid = grid_adv_pror2();
    GeomOptions tight;
    tight.relative_gap = 1e-6;
    const AdvResult a = adv(promise_or_fn(2), tight);
    const double lo = to_double(a.value.lower), hi = to_double(a.value.upper);
    o.require(std::abs(grid - std::sqrt(2.0)) < 1e-4, "grid oracle near sqrt 2");
    o.require(std::abs(lo - grid) <= 1e-4 && std::abs(hi - grid) <= 1e-4, "Adv(PrOR_2) vs grid");

    // adeg_{1/3}(AND_2) = 1: a constant c needs |c| <= 1/3 and |c - 1| <= 1/3, which is
    // empty; (x1 + x2)/3 attains error 1/3 and stays in [0,1].
    const Rational third(1, 3);
    const bool and_deg0_infeasible = third < 1 - third;
    bool and_deg1 = true;
    for (Input x = 0; x < 4; ++x) {
        const Rational v = Rational(popcount(x)) / 3;
        and_deg1 = and_deg1 && v >= 0 && v <= 1 && abs(v - and_fn(2).bit(x)) <= third;
    }
    const int and_deg = approx_deg(and_fn(2), third).degree;
    o.require(and_deg0_infeasible && and_deg1 && and_deg == 1, "adeg(AND_2)");
    // adeg_{1/3}(XOR_2) = 2: every degree-1 p has p(00) + p(11) = p(01) + p(10) (checked
    // on the monomial basis), but the error bounds force the left side <= 2/3 and the
    // right side >= 4/3. x1 + x2 - 2 x1 x2 is exact.
    bool identity = true;
    for (std::uint32_t mono : {0U, 1U, 2U}) {
        auto m = [&](Input x) { return (x & mono) == mono ? 1 : 0; };
        identity = identity && m(0) + m(3) == m(1) + m(2);
    }
    const bool xor_deg1_infeasible = identity && 2 * third < 2 * (1 - third);
    bool xor_deg2 = true;
    for (Input x = 0; x < 4; ++x) {
        const int v = static_cast<int>(x & 1U) + static_cast<int>(x >> 1) - 2 * static_cast<int>((x & 1U) & (x >> 1));
        xor_deg2 = xor_deg2 && v == parity_fn(2).bit(x);
    }
    const int xor_deg = approx_deg(parity_fn(2), third).degree;
    o.require(xor_deg1_infeasible && xor_deg2 && xor_deg == 2, "adeg(XOR_2)");
    o.detail << std::setprecision(9) << " Adv(PrOR_2) in [" << lo << ", " << hi << "], grid " << grid << "; adeg(AND_2)=" << and_deg
             << " adeg(XOR_2)=" << xor_deg;
    return o;
}

Outcome criterion3() {
    Outcome o;
    const Gadget g = ver();
    const Versatility v = check_versatility(g);
    o.require(v.versatile(), "VER versatile");
    if (!v.versatile()) return o;
    int flipped = 0;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            flipped += g(v.flip->sigma_a[static_cast<std::size_t>(x)], v.flip->sigma_b[static_cast<std::size_t>(y)]) ==
                       1 - g(x, y);
    o.require(flipped == 16, "flip map on 16 inputs");

    Rational mass = 0;
    for (const auto& e : v.self_reduction->support) mass += e.probability;
    o.require(mass == 1, "self-reduction probabilities");
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            std::map<std::pair<int, int>, Rational> image;
            for (const auto& e : v.self_reduction->support)
                image[{e.sigma_a[static_cast<std::size_t>(x)], e.sigma_b[static_cast<std::size_t>(y)]}] += e.probability;
            const auto cls = g.preimage(g(x, y));
            bool uniform = cls.size() == 8 && image.size() == 8;
            for (const auto& xy : cls) uniform = uniform && image[xy] == Rational(1, 8);
            o.require(uniform, "self-reduction image from (" + std::to_string(x) + "," + std::to_string(y) + ")");
        }
    auto embeds = [&](const SubfunctionMatch& m, bool is_and) {
        bool ok = true;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                ok = ok && g(m.rows[static_cast<std::size_t>(a)], m.cols[static_cast<std::size_t>(b)]) ==
                               (is_and ? (a & b) : (a | b));
        return ok;
    };
    o.require(embeds(*v.and_embedding, true), "AND embedding");
    o.require(embeds(*v.or_embedding, false), "OR embedding");

    // s_sample by full enumeration of the per-position self-reduction choices.
    const std::size_t support = v.self_reduction->support.size();
    std::size_t cases = 0;
    for (int m = 1; m <= 2; ++m)
        for (std::uint32_t s = 0; s < (1U << m); ++s) {
            const std::vector<int> bits = bits_of(s, m);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    std::map<Sample, Rational> dist;
                    std::vector<std::size_t> choice(static_cast<std::size_t>(m), 0);
                    while (true) {
                        Rational p = 1;
                        for (std::size_t c : choice) p *= v.self_reduction->support[c].probability;
                        dist[s_sample(g, v, bits, a, b, choice)] += p;
                        std::size_t i = 0;
                        while (i < choice.size() && ++choice[i] == support) choice[i++] = 0;
                        if (i == choice.size()) break;
                    }
                    std::size_t want = 1;
                    for (int i = 0; i < m; ++i) want *= 8;
                    bool ok = dist.size() == want;
                    for (const auto& [w, p] : dist) {
                        ok = ok && p == Rational(1, static_cast<unsigned long>(want));
                        for (int i = 0; i < m; ++i)
                            ok = ok && g(w.x[static_cast<std::size_t>(i)], w.y[static_cast<std::size_t>(i)]) ==
                                           (g(a, b) ^ bits[static_cast<std::size_t>(i)]);
                    }
                    o.require(ok, "s_sample uniformity");
                    ++cases;
                }
        }
    o.detail << " self-reduction support " << support << ", s_sample cases " << cases;
    return o;
}

// r(t) enclosed by Horner evaluation on an interval argument.
Interval enclose_at(const PrOrPoly& p, const Interval& t) {
    Interval s;
    const auto& c = p.r.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * t + it->enclose();
    return s;
}

Outcome criterion4() {
    Outcome o;
    for (int k = 1; k <= 64; ++k) {
        const double target = M_PI * std::sqrt(static_cast<double>(k)) / 2;
        const int d = static_cast<int>(std::ceil(target));
        o.require(std::abs(target - std::round(target)) > 1e-9, "degree oracle is decisive at k=" + std::to_string(k));
        const PrOrPoly p = pror_poly(k);
        o.require(p.d == d && p.r.degree() == d, "degree at k=" + std::to_string(k));
        o.require(p.r(Cyclo(0)) == Cyclo(0) && p.r(Cyclo(1)) == Cyclo(1), "r(0), r(1) at k=" + std::to_string(k));
        // pror_poly proves the bound from the critical points; recheck on a sample of points.
        for (int s = 0; s <= 64; ++s) {
            const Interval v = enclose_at(p, Interval::from_rational(Rational(k * s, 64)));
            o.require(v.lo().to_double() >= -1e-30 && v.hi().to_double() <= 1 + 1e-30,
                      "0 <= r <= 1 at k=" + std::to_string(k));
        }
        if (k <= 16)
            o.require(isolate_critical_points(p) == static_cast<int>(p.critical_points.size()),
                      "critical points isolate at k=" + std::to_string(k));
    }
    auto verify_blocks = [&](const BlowupResult& b, std::size_t want, const std::string& name) {
        std::uint32_t used = 0;
        bool ok = b.blocks.size() == want;
        const PartialFn& F = b.composed;
        for (Block blk : b.blocks) {
            ok = ok && (used & blk.bits) == 0 && F.in_domain(0) && F.in_domain(blk.bits) && F.bit(blk.bits) != F.bit(0);
            used |= blk.bits;
        }
        o.require(ok, name);
    };
    const FbsResult or2 = fbs_at(or_fn(2), 0);
    verify_blocks(blowup_blocks(or_fn(2), 0, or2.packing, 2), static_cast<std::size_t>(2 * 2), "blowup OR_2, k=2");
    const FbsResult maj = fbs_at(majority_fn(3), 0);
    const BlowupResult mb = blowup_blocks(majority_fn(3), 0, maj.packing, 2);
    const Rational want = maj.value * mb.common_denominator;
    o.require(maj.value.get_den() != 1 && want.get_den() == 1, "fractional instance");
    verify_blocks(mb, static_cast<std::size_t>(want.get_num().get_ui()), "blowup MAJ_3, k=L");
    o.detail << " k=1..64 checked; MAJ_3 fbs=" << to_exact_string(maj.value) << " L=" << mb.common_denominator
             << " blocks=" << mb.blocks.size();
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::size_t checked = 0;
    std::vector<PartialFn> corpus;
    for (auto [kind, n] : {std::pair{CorpusSpec::Kind::Total, 3}, std::pair{CorpusSpec::Kind::Partial, 2}}) {
        CorpusSpec spec;
        spec.kind = kind;
        spec.n = n;
        for (auto& inst : enumerate_corpus(spec)) corpus.push_back(*inst.fn);
    }
    for (const PartialFn& f : corpus) {
        const int n = f.arity();
        const std::string name = format_partial_fn(f);
        const CadvResult c = cadv(f);
        const CfbsWitness w = cadv_to_cfbs_witness(f, c.scheme);
        bool completes = true;
        for (Input x : f.domain()) completes = completes && w.completion.total(x) == f.bit(x);
        bool covered = true;
        Rational worst = 0;
        for (const CoverScheme& cs : w.covers) {
            Rational total = 0;
            for (const Rational& q : cs.q) total += q;
            worst = std::max(worst, total);
            for (std::uint32_t b = 1; b < (1U << n); ++b) {
                const Input y = flip(cs.x, b);
                if (w.completion.total(y) == w.completion.total(cs.x)) continue;
                Rational s = 0;
                for (int i = 0; i < n; ++i)
                    if ((b >> i) & 1U) s += cs.q[static_cast<std::size_t>(i)];
                covered = covered && s >= 1;
            }
        }
        o.require(completes && covered && w.covers.size() == f.domain().size(), "cfbs witness at " + name);
        o.require(worst == w.value && w.value <= 2 * c.value, "cfbs witness bound at " + name);

        const AdvResult a = adv(f);
        const Rational A = a.scheme.objective();
        const WeightScheme s = adv_to_cadv_scheme(f, a.scheme, A);
        const bool lib = check_feasible(f, s).ok;
        o.require(lib && min_feasible(f, s), "adv->cadv feasibility at " + name);
        o.require(s.objective() <= 2 * A * A, "adv->cadv bound at " + name);
        ++checked;
    }
    o.detail << " instances=" << checked;
    return o;
}

Outcome criterion6() {
    Outcome o;
    const Gadget g = ver();
    const Rational eps(1, 3);
    std::size_t protocols = 0, pairs = 0;
    double min_bound = INFINITY;
    Rational worst_error = 0;
    for (const PartialFn& fn : {identity_fn(), parity_fn(2), and_fn(2)}) {
        const Relation f = to_relation(fn);
        const int n = f.arity();
        std::size_t correct = 0;
        for (const NamedProtocol& np : standard_protocols(f, g)) {
            if (protocol_error(np.tree, f, g) != 0) continue;
            ++correct;
            const std::string where = format_partial_fn(fn) + " " + np.name;
            const Interval cc_bound = Interval::from_rational(np.tree.depth() + parse_rational("1/100000000000000000000"));
            for (Input z = 0; z < f.size(); ++z) {
                const LiftScheme s = lift_weight_scheme(np.tree, f, g, bits_of(z, n));
                Interval sum;
                for (const Interval& q : s.q) sum += q;
                o.require(s.within_cc && sum.certainly_le(cc_bound), "sum q' <= CC for " + where);
            }
            for (Input z = 0; z < f.size(); ++z)
                for (Input w = 0; w < f.size(); ++w) {
                    if (!f.disjoint(z, w)) continue;
                    const auto zb = bits_of(z, n), wb = bits_of(w, n);
                    const PairBound pb = min_pair_bound(np.tree, f, g, zb, wb);
                    o.require(pb.value.certainly_positive(), "pair bound > 0 for " + where);
                    min_bound = std::min(min_bound, pb.value.lo().to_double());
                    Distinguisher d = build_distinguisher(np.tree, f, g, zb, pb.hybrid, eps);
                    if (!d.case_one && pb.hybrid != wb) d = build_distinguisher(np.tree, f, g, wb, pb.hybrid, eps);
                    o.require(d.case_one && d.k == 20, "distinguisher built for " + where);
                    if (!d.case_one) continue;
                    Rational err = 0;
                    for (std::size_t ab = 0; ab < d.hit.size(); ++ab) {
                        const Rational at_least = tail_at_least(d.k, d.hit[ab], d.threshold);
                        err = std::max(err, d.gadget_value[ab] == 0 ? Rational(1 - at_least) : at_least);
                    }
                    o.require(err == d.error() && err <= eps, "distinguisher error for " + where);
                    worst_error = std::max(worst_error, err);
                    ++pairs;
                }
        }
        o.require(correct >= 3, "three correct protocols for " + format_partial_fn(fn));
        protocols += correct;
    }
    o.detail << " protocols=" << protocols << " pairs=" << pairs << " min pair bound=" << min_bound
             << " worst distinguisher error=" << to_double(worst_error);
    return o;
}

// Direct simulation of the scan, used as a sanity cross-check of the exact values.
std::pair<double, double> simulate_scan(const std::vector<int>& z, double delta, int cap, int trials,
                                        std::mt19937_64& rng, double* sd0, double* sd1) {
    std::bernoulli_distribution err(delta);
    double s0 = 0, s1 = 0, q0 = 0, q1 = 0;
    for (int t = 0; t < trials; ++t) {
        double c0 = 0, c1 = 0;
        for (int b : z) {
            int diff = 0, runs = 0;
            while (runs < cap) {
                ++runs;
                diff += (b ^ static_cast<int>(err(rng))) ? 1 : -1;
                if (diff < 0) break;
            }
            (b ? c1 : c0) += runs;
            if (diff >= 0) break;
        }
        s0 += c0, s1 += c1, q0 += c0 * c0, q1 += c1 * c1;
    }
    const double m0 = s0 / trials, m1 = s1 / trials;
    *sd0 = std::sqrt(std::max(0.0, q0 / trials - m0 * m0) / trials);
    *sd1 = std::sqrt(std::max(0.0, q1 / trials - m1 * m1) / trials);
    return {m0, m1};
}

Outcome criterion7() {
    Outcome o;
    const Rational delta(1, 4);
    // Without a cap, a 0-gadget's walk has drift -(1 - 2 delta) and needs 1/(1 - 2 delta)
    // runs in expectation to reach -1; the cap only shortens the walk.
    const Rational c0_bound = 1 / (1 - 2 * delta);
    const double c1_bound = 16;
    std::mt19937_64 rng(2024);
    std::ostringstream c0s, c1s, dets;
    for (int n : {4, 16, 64}) {
        const int cap = default_schedule_cap(n);
        const std::vector<int> zeros(static_cast<std::size_t>(n), 0), ones(static_cast<std::size_t>(n), 1);
        std::vector<int> first = zeros;
        first[0] = 1;
        const ScheduleStats s0 = noisy_or_schedule(n, zeros, delta, cap);
        o.require(s0.zero_invocations <= c0_bound * n, "C0 bound at n=" + std::to_string(n));
        o.require(s0.detect >= Rational(1, 2), "detection at n=" + std::to_string(n));
        double worst_c1 = 0;
        for (const auto& z : {first, ones}) {
            const ScheduleStats s = noisy_or_schedule(n, z, delta, cap);
            worst_c1 = std::max(worst_c1, s.c1);
            o.require(s.c1 <= c1_bound, "C1 bound at n=" + std::to_string(n));
            double sd0 = 0, sd1 = 0;
            auto [m0, m1] = simulate_scan(z, 0.25, cap, 20000, rng, &sd0, &sd1);
            o.require(std::abs(m0 - to_double(s.zero_invocations)) <= 6 * sd0 + 1e-12 &&
                          std::abs(m1 - to_double(s.one_invocations)) <= 6 * sd1 + 1e-12,
                      "simulation agrees at n=" + std::to_string(n));
        }
        double sd0 = 0, sd1 = 0;
        auto [m0, m1] = simulate_scan(zeros, 0.25, cap, 20000, rng, &sd0, &sd1);
        (void)m1;
        o.require(std::abs(m0 - to_double(s0.zero_invocations)) <= 6 * sd0 + 1e-12,
                  "simulation agrees at n=" + std::to_string(n));
        c0s << (n == 4 ? "" : ", ") << s0.c0;
        c1s << (n == 4 ? "" : ", ") << worst_c1;
        dets << (n == 4 ? "" : ", ") << to_double(s0.detect);
    }
    o.detail << " C0=" << to_double(c0_bound) << " c0(n=4,16,64)=[" << c0s.str() << "] C1=" << c1_bound
             << " c1=[" << c1s.str() << "] detect=[" << dets.str() << "]";
    return o;
}

double naive_cmi(const JointDistribution& j, const std::vector<int>& a, const std::vector<int>& b,
                 const std::vector<int>& c) {
    auto h = [&](std::vector<int> vars) {
        double s = 0;
        for (const auto& [k, p] : j.marginal(vars)) {
            const double v = to_double(p);
            if (v > 0) s -= v * std::log2(v);
        }
        return s;
    };
    auto cat = [](std::vector<int> x, const std::vector<int>& y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    return h(cat(a, c)) + h(cat(b, c)) - h(cat(cat(a, b), c)) - (c.empty() ? 0.0 : h(c));
}

Outcome criterion8() {
    Outcome o;
    std::mt19937_64 rng(1000);
    std::uniform_int_distribution<int> size(2, 3), weight(0, 6);
    int joints = 0;
    double worst_chain = 0;
    while (joints < 1000) {
        const int sa = size(rng), sb = size(rng), sc = size(rng), sd = size(rng);
        JointDistribution j;
        j.names = {"A", "B", "C", "D"};
        std::vector<int> w(static_cast<std::size_t>(sa * sb * sc * sd));
        int total = 0;
        for (int& v : w) total += v = weight(rng);
        if (total == 0) continue;
        for (int k = 0; k < static_cast<int>(w.size()); ++k)
            if (w[static_cast<std::size_t>(k)])
                j.entries.push_back({{k % sa, (k / sa) % sb, (k / (sa * sb)) % sc, k / (sa * sb * sc)},
                                     Rational(w[static_cast<std::size_t>(k)], total)});
        ++joints;
        const Interval ab_d = cond_mutual_info(j, {0}, {1}, {3});
        const Interval a_bc_d = cond_mutual_info(j, {0}, {1, 2}, {3});
        const Interval ac_bd = cond_mutual_info(j, {0}, {2}, {1, 3});
        o.require(ab_d.lo().to_double() >= -1e-30 && a_bc_d.lo().to_double() >= -1e-30 &&
                      ac_bd.lo().to_double() >= -1e-30,
                  "nonnegativity");
        const double cap = std::log2(static_cast<double>(std::min(j.marginal({0}).size(), j.marginal({1}).size())));
        o.require(ab_d.hi().to_double() <= cap + 1e-30, "log-min cap");
        const double chain = std::abs((a_bc_d - ab_d - ac_bd).mid());
        worst_chain = std::max(worst_chain, chain);
        o.require(chain <= 1e-30, "chain rule");
        o.require(std::abs(ab_d.mid() - naive_cmi(j, {0}, {1}, {3})) < 1e-9, "double-precision oracle");
    }
    o.detail << " joints=" << joints << " worst chain-rule gap=" << worst_chain;
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 exhaustive inequality sweep", criterion1}, {"2 anchor values", criterion2},
        {"3 gadget versatility", criterion3},          {"4 promise-OR polynomials", criterion4},
        {"5 conversion round-trips", criterion5},      {"6 lifting simulation", criterion6},
        {"7 scheduler scaling", criterion7},           {"8 information identities", criterion8}};
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %s: %s (%.1fs)%s\n", name.c_str(), o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
