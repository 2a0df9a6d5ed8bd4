#include "advkit/liftsim.hpp"

#include <algorithm>
#include <cmath>

namespace advkit {

void ProtocolTree::validate() const {
    if (alice_inputs == 0 || bob_inputs == 0) throw InputError("protocol needs nonempty input sets");
    if (randomness.empty()) throw InputError("protocol needs at least one random string");
    Rational total = 0;
    for (const Rational& p : randomness) {
        if (p < 0) throw InputError("negative randomness probability");
        total += p;
    }
    if (total != 1) throw InputError("randomness probabilities sum to " + to_exact_string(total));
    if (nodes.empty()) throw InputError("protocol has no nodes");
    const std::size_t rs = randomness.size();
    std::vector<int> parents(nodes.size(), 0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const ProtocolNode& nd = nodes[k];
        const std::string where = "node " + std::to_string(k);
        if (nd.leaf) {
            if (nd.output.size() != bob_inputs) throw InputError(where + ": output table needs one row per Bob input");
            for (const auto& row : nd.output) {
                if (row.size() != rs) throw InputError(where + ": output row needs one entry per random string");
                for (int o : row)
                    if (o < 0) throw InputError(where + ": negative output symbol");
            }
            continue;
        }
        const std::size_t inputs = nd.speaker == Speaker::Alice ? alice_inputs : bob_inputs;
        if (nd.msg.size() != inputs) throw InputError(where + ": message table needs one row per speaker input");
        for (const auto& row : nd.msg) {
            if (row.size() != rs) throw InputError(where + ": message row needs one entry per random string");
            for (int b : row)
                if (b != 0 && b != 1) throw InputError(where + ": message bits must be 0 or 1");
        }
        for (int c : nd.child) {
            if (c <= 0 || static_cast<std::size_t>(c) >= nodes.size())
                throw InputError(where + ": child index out of range");
            ++parents[static_cast<std::size_t>(c)];
        }
    }
    for (std::size_t k = 1; k < nodes.size(); ++k)
        if (parents[k] != 1) throw InputError("node " + std::to_string(k) + " has " + std::to_string(parents[k]) + " parents");
    // With one parent each and no edge into the root, every node is reached iff there is no cycle.
    std::vector<int> stack{0};
    std::size_t seen = 0;
    while (!stack.empty()) {
        int k = stack.back();
        stack.pop_back();
        ++seen;
        if (!nodes[static_cast<std::size_t>(k)].leaf)
            for (int c : nodes[static_cast<std::size_t>(k)].child) stack.push_back(c);
    }
    if (seen != nodes.size()) throw InputError("protocol nodes do not form a tree rooted at node 0");
    if (depth() > kMaxProtocolDepth) throw ResourceError("protocol depth exceeds " + std::to_string(kMaxProtocolDepth));
}

int ProtocolTree::depth() const {
    std::function<int(int)> rec = [&](int k) {
        const ProtocolNode& nd = nodes[static_cast<std::size_t>(k)];
        if (nd.leaf) return 0;
        return 1 + std::max(rec(nd.child[0]), rec(nd.child[1]));
    };
    return nodes.empty() ? 0 : rec(0);
}

Run run_protocol(const ProtocolTree& p, std::size_t x, std::size_t y, std::size_t r) {
    if (x >= p.alice_inputs || y >= p.bob_inputs || r >= p.randomness.size())
        throw InputError("protocol input out of range");
    Run out;
    int k = 0;
    while (true) {
        if (static_cast<std::size_t>(k) >= p.nodes.size()) throw InputError("protocol walks off the node list");
        const ProtocolNode& nd = p.nodes[static_cast<std::size_t>(k)];
        if (nd.leaf) {
            out.leaf = k;
            out.output = nd.output.at(y).at(r);
            return out;
        }
        const int bit = nd.msg.at(nd.speaker == Speaker::Alice ? x : y).at(r);
        out.transcript.push_back(bit);
        if (out.transcript.size() > static_cast<std::size_t>(kMaxProtocolDepth) * 4)
            throw InputError("protocol path does not terminate");
        k = nd.child[static_cast<std::size_t>(bit)];
    }
}

ProtocolTree build_protocol(std::size_t alice_inputs, std::size_t bob_inputs, std::vector<Rational> randomness,
                            const std::vector<Speaker>& rounds, const MessageFn& message, const OutputFn& output) {
    if (rounds.size() > static_cast<std::size_t>(kMaxProtocolDepth))
        throw ResourceError("protocol depth exceeds " + std::to_string(kMaxProtocolDepth));
    ProtocolTree p;
    p.alice_inputs = alice_inputs;
    p.bob_inputs = bob_inputs;
    p.randomness = std::move(randomness);
    const std::size_t rs = p.randomness.size();
    std::function<int(std::vector<int>&)> grow = [&](std::vector<int>& prefix) {
        const int id = static_cast<int>(p.nodes.size());
        p.nodes.emplace_back();
        if (prefix.size() == rounds.size()) {
            std::vector<std::vector<int>> table(bob_inputs, std::vector<int>(rs));
            for (std::size_t y = 0; y < bob_inputs; ++y)
                for (std::size_t r = 0; r < rs; ++r) table[y][r] = output(y, r, prefix);
            p.nodes[static_cast<std::size_t>(id)].leaf = true;
            p.nodes[static_cast<std::size_t>(id)].output = std::move(table);
            return id;
        }
        const Speaker s = rounds[prefix.size()];
        const std::size_t inputs = s == Speaker::Alice ? alice_inputs : bob_inputs;
        std::vector<std::vector<int>> table(inputs, std::vector<int>(rs));
        for (std::size_t u = 0; u < inputs; ++u)
            for (std::size_t r = 0; r < rs; ++r) table[u][r] = message(s, u, r, prefix);
        std::array<int, 2> kids{};
        for (int bit = 0; bit < 2; ++bit) {
            prefix.push_back(bit);
            kids[static_cast<std::size_t>(bit)] = grow(prefix);
            prefix.pop_back();
        }
        ProtocolNode& nd = p.nodes[static_cast<std::size_t>(id)];
        nd.speaker = s;
        nd.msg = std::move(table);
        nd.child = kids;
        return id;
    };
    std::vector<int> prefix;
    grow(prefix);
    p.validate();
    return p;
}

namespace {

std::size_t power(std::size_t base, std::size_t e) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < e; ++i) out *= base;
    return out;
}

void check_shape(const ProtocolTree& p, const Gadget& g, std::size_t n) {
    p.validate();
    if (p.alice_inputs != power(static_cast<std::size_t>(g.x_size), n) ||
        p.bob_inputs != power(static_cast<std::size_t>(g.y_size), n))
        throw InputError("protocol inputs do not match " + std::to_string(n) + " gadget copies");
}

Input inner_string(const Gadget& g, std::size_t n, std::size_t x, std::size_t y) {
    Input z = 0;
    for (std::size_t i = 0; i < n; ++i)
        z |= static_cast<Input>(g(digit(x, g.x_size, static_cast<int>(i)), digit(y, g.y_size, static_cast<int>(i))))
             << i;
    return z;
}

Input pack(const std::vector<int>& bits) {
    Input z = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1) throw InputError("inner strings are bit vectors");
        z |= static_cast<Input>(bits[i]) << i;
    }
    return z;
}

// Calls visit(x, y, probability) over the product of uniform preimages of v.
template <class Visit>
void for_each_lifted(const Gadget& g, const std::vector<int>& v, Visit visit) {
    std::vector<std::vector<std::pair<int, int>>> pre;
    Rational prob = 1;
    for (int b : v) {
        pre.push_back(g.preimage(b));
        if (pre.back().empty()) throw InputError("gadget never takes the value " + std::to_string(b));
        prob /= static_cast<unsigned long>(pre.back().size());
    }
    std::vector<std::size_t> idx(v.size(), 0);
    std::vector<int> xs(v.size()), ys(v.size());
    while (true) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            xs[i] = pre[i][idx[i]].first;
            ys[i] = pre[i][idx[i]].second;
        }
        visit(compose_index(xs, g.x_size), compose_index(ys, g.y_size), xs, ys, prob);
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == pre[i].size()) idx[i++] = 0;
        if (i == idx.size()) break;
    }
}

Interval plogp_sum(const std::map<std::vector<int>, Rational>& m) {
    Interval h;
    for (const auto& [key, p] : m) {
        if (p == 0) continue;
        Interval ip = Interval::from_rational(p);
        h -= ip * ip.log2();
    }
    return h;
}

std::vector<int> concat(std::initializer_list<const std::vector<int>*> parts) {
    std::vector<int> out;
    for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
}

const Rational& lookup(const std::map<std::vector<int>, Rational>& m, const std::vector<int>& key) {
    auto it = m.find(key);
    if (it == m.end()) throw InternalError("marginal lookup failed");
    return it->second;
}

Rational ceil_rational(const Rational& q) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(c);
}

}  // namespace

Rational protocol_error(const ProtocolTree& p, const Relation& f, const Gadget& g) {
    const std::size_t n = static_cast<std::size_t>(f.arity());
    check_shape(p, g, n);
    Rational worst = 0;
    for (std::size_t x = 0; x < p.alice_inputs; ++x)
        for (std::size_t y = 0; y < p.bob_inputs; ++y) {
            const std::uint32_t ok = f.valid(inner_string(g, n, x, y));
            Rational err = 0;
            for (std::size_t r = 0; r < p.randomness.size(); ++r) {
                const int o = run_protocol(p, x, y, r).output;
                if (o >= 32 || !((ok >> o) & 1U)) err += p.randomness[r];
            }
            worst = std::max(worst, err);
        }
    return worst;
}

int JointDistribution::index(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputError("no variable named " + name);
    return static_cast<int>(it - names.begin());
}

std::vector<int> JointDistribution::indices(const std::vector<std::string>& ns) const {
    std::vector<int> out;
    for (const auto& s : ns) out.push_back(index(s));
    return out;
}

std::map<std::vector<int>, Rational> JointDistribution::marginal(const std::vector<int>& vars) const {
    for (int v : vars)
        if (v < 0 || static_cast<std::size_t>(v) >= names.size()) throw InputError("variable index out of range");
    std::map<std::vector<int>, Rational> out;
    std::vector<int> key(vars.size());
    for (const auto& [vals, p] : entries) {
        for (std::size_t k = 0; k < vars.size(); ++k) key[k] = vals[static_cast<std::size_t>(vars[k])];
        out[key] += p;
    }
    return out;
}

Rational JointDistribution::total() const {
    Rational t = 0;
    for (const auto& e : entries) t += e.second;
    return t;
}

JointDistribution transcript_joint(const ProtocolTree& p, const Gadget& g, const std::vector<int>& z) {
    const std::size_t n = z.size();
    check_shape(p, g, n);
    if (p.randomness.size() > kMaxRandomness)
        throw ResourceError("more than " + std::to_string(kMaxRandomness) + " random strings");
    std::size_t count = p.randomness.size() << n;
    for (int b : z) {
        count *= g.preimage(b).size();
        if (count > kMaxJointEntries) throw ResourceError("joint distribution exceeds 2^26 entries");
    }
    JointDistribution j;
    for (const char* prefix : {"X", "Y", "D", "U"})
        for (std::size_t i = 1; i <= n; ++i) j.names.push_back(prefix + std::to_string(i));
    j.names.push_back("R");
    j.names.push_back("T");
    j.entries.reserve(count);
    const Rational dprob = Rational(1, static_cast<unsigned long>(std::size_t{1} << n));
    for_each_lifted(g, z, [&](std::size_t x, std::size_t y, const std::vector<int>& xs, const std::vector<int>& ys,
                              const Rational& px) {
        for (std::size_t d = 0; d < (std::size_t{1} << n); ++d)
            for (std::size_t r = 0; r < p.randomness.size(); ++r) {
                if (p.randomness[r] == 0) continue;
                std::vector<int> vals(4 * n + 2);
                for (std::size_t i = 0; i < n; ++i) {
                    const int di = static_cast<int>((d >> i) & 1U);
                    vals[i] = xs[i];
                    vals[n + i] = ys[i];
                    vals[2 * n + i] = di;
                    vals[3 * n + i] = di == 0 ? xs[i] : ys[i];
                }
                vals[4 * n] = static_cast<int>(r);
                vals[4 * n + 1] = run_protocol(p, x, y, r).leaf;
                j.entries.emplace_back(std::move(vals), px * dprob * p.randomness[r]);
            }
    });
    if (j.total() != 1) throw InternalError("joint distribution does not sum to 1");
    for (std::size_t i = 0; i < n; ++i) {
        auto xy = j.marginal({static_cast<int>(i), static_cast<int>(n + i)});
        const auto pre = g.preimage(z[i]);
        if (xy.size() != pre.size()) throw InternalError("input marginal has the wrong support");
        for (const auto& [key, pr] : xy)
            if (pr != Rational(1, static_cast<unsigned long>(pre.size())) || g(key[0], key[1]) != z[i])
                throw InternalError("input marginal is not uniform on the preimage");
        auto dm = j.marginal({static_cast<int>(2 * n + i)});
        if (dm.size() != 2 || dm.begin()->second != Rational(1, 2)) throw InternalError("D marginal is not uniform");
    }
    return j;
}

Interval entropy(const JointDistribution& j, const std::vector<int>& vars) { return plogp_sum(j.marginal(vars)); }

Interval cond_mutual_info(const JointDistribution& j, const std::vector<int>& a, const std::vector<int>& b,
                          const std::vector<int>& c) {
    const auto abc = j.marginal(concat({&a, &b, &c}));
    const auto ac = j.marginal(concat({&a, &c}));
    const auto bc = j.marginal(concat({&b, &c}));
    const auto cm = j.marginal(c);
    bool independent = true;
    std::vector<int> ka, kb, kc;
    for (const auto& [key, p] : abc) {
        if (p == 0) continue;
        ka.assign(key.begin(), key.begin() + static_cast<long>(a.size()));
        kb.assign(key.begin() + static_cast<long>(a.size()), key.begin() + static_cast<long>(a.size() + b.size()));
        kc.assign(key.begin() + static_cast<long>(a.size() + b.size()), key.end());
        if (p * lookup(cm, kc) != lookup(ac, concat({&ka, &kc})) * lookup(bc, concat({&kb, &kc}))) {
            independent = false;
            break;
        }
    }
    if (independent) return Interval();
    return plogp_sum(ac) + plogp_sum(bc) - plogp_sum(abc) - plogp_sum(cm);
}

Interval cond_mutual_info_by_name(const JointDistribution& j, const std::vector<std::string>& a,
                                  const std::vector<std::string>& b, const std::vector<std::string>& c) {
    return cond_mutual_info(j, j.indices(a), j.indices(b), j.indices(c));
}

LiftScheme lift_weight_scheme(const ProtocolTree& p, const Relation& f, const Gadget& g, const std::vector<int>& z) {
    const int n = f.arity();
    if (z.size() != static_cast<std::size_t>(n)) throw InputError("z has the wrong length");
    pack(z);
    const JointDistribution j = transcript_joint(p, g, z);
    auto range = [](int from, int to) {
        std::vector<int> v;
        for (int k = from; k < to; ++k) v.push_back(k);
        return v;
    };
    const std::vector<int> xs = range(0, n), ys = range(n, 2 * n), dur = range(2 * n, 4 * n + 1);
    const std::vector<int> t{4 * n + 1};
    LiftScheme s;
    s.z = z;
    for (int i = 0; i < n; ++i) {
        const std::vector<int> xi{i}, yi{n + i};
        const std::vector<int> xlt = range(0, i), ylt = range(n, n + i);
        const Interval first = cond_mutual_info(j, xi, t, concat({&xlt, &ys, &dur}));
        const Interval second = cond_mutual_info(j, yi, t, concat({&ylt, &xs, &dur}));
        const Interval literal = cond_mutual_info(j, xi, t, concat({&ylt, &xs, &dur}));
        s.q.push_back(first + second);
        s.literal.push_back(first + literal);
        s.sum += s.q.back();
    }
    s.cc = p.depth();
    s.within_cc = s.sum.certainly_le(Interval(s.cc) + Interval::from_rational(parse_rational("1/100000000000000000000")));
    return s;
}

PairBound min_pair_bound(const ProtocolTree& p, const Relation& f, const Gadget& g, const std::vector<int>& z,
                         const std::vector<int>& w) {
    if (z.size() != static_cast<std::size_t>(f.arity()) || w.size() != z.size())
        throw InputError("z and w must have the arity of f");
    const Input zi = pack(z), wi = pack(w);
    if (zi == wi) throw InputError("z and w coincide");
    if (!f.disjoint(zi, wi)) throw InputError("f(z) and f(w) intersect");
    PairBound out;
    out.qz = lift_weight_scheme(p, f, g, z);
    out.qw = lift_weight_scheme(p, f, g, w);
    out.hybrid = z;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] == w[i]) continue;
        const Interval& a = out.qz.q[i];
        const Interval& b = out.qw.q[i];
        out.value += min(a, b);
        if (a.mid() <= b.mid()) {
            out.b1.push_back(static_cast<int>(i));
            out.hybrid[i] = w[i];
        } else {
            out.b2.push_back(static_cast<int>(i));
        }
    }
    out.protocol_error = protocol_error(p, f, g);
    return out;
}

Rational output_probability(const ProtocolTree& p, const Gadget& g, const std::vector<int>& v, std::uint32_t labels) {
    check_shape(p, g, v.size());
    pack(v);
    Rational total = 0;
    for_each_lifted(g, v, [&](std::size_t x, std::size_t y, const std::vector<int>&, const std::vector<int>&,
                              const Rational& px) {
        for (std::size_t r = 0; r < p.randomness.size(); ++r) {
            const int o = run_protocol(p, x, y, r).output;
            if (o < 32 && ((labels >> o) & 1U)) total += px * p.randomness[r];
        }
    });
    return total;
}

Rational binomial_upper_tail(int k, const Rational& p, int t) {
    if (k < 0) throw InputError("negative number of trials");
    Rational total = 0;
    for (int j = std::max(t, 0); j <= k; ++j) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
        Rational term = Rational(c);
        for (int s = 0; s < j; ++s) term *= p;
        for (int s = j; s < k; ++s) term *= 1 - p;
        total += term;
    }
    return total;
}

int boosting_runs(const Rational& eps) {
    if (eps <= 0 || eps >= 1) throw InputError("eps must lie in (0, 1)");
    const Interval inv = Interval::from_rational(1 / eps);
    BigFloat lo, hi;
    mpfr_log(lo.raw(), inv.lo().raw(), MPFR_RNDD);
    mpfr_log(hi.raw(), inv.hi().raw(), MPFR_RNDU);
    const Interval x = Interval(lo, hi) * Interval::from_rational(2 / (eps * eps));
    BigFloat clo, chi;
    mpfr_ceil(clo.raw(), x.lo().raw());
    mpfr_ceil(chi.raw(), x.hi().raw());
    if (!(clo == chi)) throw InternalError("run count is too close to an integer to round");
    const double k = clo.to_double();
    if (k > 1e6) throw ResourceError("eps is too small for exact boosting");
    return static_cast<int>(k);
}

namespace {

int acceptance_threshold(const Rational& eps, int k) { return static_cast<int>(ceil_rational((1 - eps) * k).get_d()); }

}  // namespace

Rational Distinguisher::error_with(int runs) const {
    if (!case_one) throw InputError("no distinguisher was built");
    const int t = acceptance_threshold(eps, runs);
    Rational worst = 0;
    for (std::size_t k = 0; k < hit.size(); ++k) {
        const Rational up = binomial_upper_tail(runs, hit[k], t);
        worst = std::max(worst, gadget_value[k] ? up : Rational(1 - up));
    }
    return worst;
}

Distinguisher build_distinguisher(const ProtocolTree& p, const Relation& f, const Gadget& g, const std::vector<int>& z,
                                   const std::vector<int>& v, const Rational& eps) {
    const std::size_t n = static_cast<std::size_t>(f.arity());
    if (z.size() != n || v.size() != n) throw InputError("z and v must have the arity of f");
    check_shape(p, g, n);
    const std::uint32_t target = f.valid(pack(z));
    pack(v);
    Distinguisher d;
    d.eps = eps;
    for (std::size_t i = 0; i < n; ++i)
        if (z[i] != v[i]) d.block.push_back(static_cast<int>(i));
    if (d.block.empty()) throw InputError("z and v coincide");
    d.hypothesis = output_probability(p, g, v, target);
    d.case_one = d.hypothesis <= Rational(1, 2);
    if (!d.case_one) return d;

    const Versatility vers = check_versatility(g);
    if (!vers.flip || !vers.self_reduction) throw InputError("gadget lacks a flip map or a self-reduction");
    const auto& support = vers.self_reduction->support;
    d.k = boosting_runs(eps);
    d.threshold = acceptance_threshold(eps, d.k);

    // Random string layout: one self-reduction index per block position, one
    // preimage pair per other position, then the protocol's own string.
    std::vector<std::size_t> radix;
    std::vector<Rational> weight;
    std::vector<std::vector<std::pair<int, int>>> outside(n);
    std::vector<int> s;
    for (int i : d.block) s.push_back(z[static_cast<std::size_t>(i)]);
    std::vector<bool> in_block(n, false);
    for (int i : d.block) in_block[static_cast<std::size_t>(i)] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (!in_block[i]) outside[i] = g.preimage(z[i]);
    std::size_t total = p.randomness.size();
    for (std::size_t i = 0; i < d.block.size(); ++i) total *= support.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!in_block[i]) total *= outside[i].size();
    if (total * static_cast<std::size_t>(std::max(g.x_size, g.y_size)) * p.nodes.size() > kMaxJointEntries)
        throw ResourceError("distinguisher tables exceed 2^26 entries");

    struct Decoded {
        std::vector<std::size_t> sr;
        std::vector<int> ox, oy;
        std::size_t r = 0;
        Rational prob;
    };
    std::vector<Decoded> decoded(total);
    for (std::size_t code = 0; code < total; ++code) {
        Decoded& dc = decoded[code];
        std::size_t c = code;
        dc.prob = 1;
        for (std::size_t b = 0; b < d.block.size(); ++b) {
            dc.sr.push_back(c % support.size());
            dc.prob *= support[c % support.size()].probability;
            c /= support.size();
        }
        dc.ox.assign(n, 0);
        dc.oy.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (in_block[i]) continue;
            const auto& pr = outside[i][c % outside[i].size()];
            dc.ox[i] = pr.first;
            dc.oy[i] = pr.second;
            dc.prob /= static_cast<unsigned long>(outside[i].size());
            c /= outside[i].size();
        }
        dc.r = c;
        dc.prob *= p.randomness[c];
    }
    // Alice's view of the lifted input uses her gadget input, the public
    // self-reduction indices and her half of the private pairs; Bob's likewise.
    auto lift = [&](bool alice, int own, const Decoded& dc) {
        Sample smp = alice ? s_sample(g, vers, s, own, 0, dc.sr) : s_sample(g, vers, s, 0, own, dc.sr);
        std::vector<int> digits = alice ? dc.ox : dc.oy;
        for (std::size_t b = 0; b < d.block.size(); ++b)
            digits[static_cast<std::size_t>(d.block[b])] = alice ? smp.x[b] : smp.y[b];
        return compose_index(digits, alice ? g.x_size : g.y_size);
    };

    ProtocolTree& q = d.single_run;
    q.alice_inputs = static_cast<std::size_t>(g.x_size);
    q.bob_inputs = static_cast<std::size_t>(g.y_size);
    for (const Decoded& dc : decoded) q.randomness.push_back(dc.prob);
    q.nodes.resize(p.nodes.size());
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
        const ProtocolNode& src = p.nodes[k];
        ProtocolNode& dst = q.nodes[k];
        dst.leaf = src.leaf;
        dst.speaker = src.speaker;
        dst.child = src.child;
        const bool alice = !src.leaf && src.speaker == Speaker::Alice;
        const std::size_t inputs = alice ? q.alice_inputs : q.bob_inputs;
        auto& table = src.leaf ? dst.output : dst.msg;
        table.assign(inputs, std::vector<int>(total));
        for (std::size_t u = 0; u < inputs; ++u)
            for (std::size_t c = 0; c < total; ++c) {
                const std::size_t lifted = lift(alice, static_cast<int>(u), decoded[c]);
                if (src.leaf) {
                    const int o = src.output[lifted][decoded[c].r];
                    table[u][c] = o < 32 && ((target >> o) & 1U) ? 1 : 0;
                } else {
                    table[u][c] = src.msg[lifted][decoded[c].r];
                }
            }
    }
    q.validate();

    const Rational on_z = output_probability(p, g, z, target);
    d.error_zero = 0;
    d.error_one = 0;
    for (int a = 0; a < g.x_size; ++a)
        for (int b = 0; b < g.y_size; ++b) {
            Rational h = 0;
            for (std::size_t c = 0; c < total; ++c)
                if (run_protocol(q, static_cast<std::size_t>(a), static_cast<std::size_t>(b), c).output == 1)
                    h += q.randomness[c];
            const int gv = g(a, b);
            if (h != (gv ? d.hypothesis : on_z)) throw InternalError("embedded run does not follow the lifted distribution");
            d.hit.push_back(h);
            d.gadget_value.push_back(gv);
            const Rational up = binomial_upper_tail(d.k, h, d.threshold);
            if (gv)
                d.error_one = std::max(d.error_one, up);
            else
                d.error_zero = std::max(d.error_zero, Rational(1 - up));
        }
    return d;
}

int default_schedule_cap(int n) {
    if (n < 1) throw InputError("n must be positive");
    int lg = 0;
    while ((1 << lg) < n) ++lg;
    return 8 * std::max(lg, 1);
}

ScheduleStats noisy_or_schedule(int n, const std::vector<int>& z, const Rational& delta, int cap) {
    if (n < 1 || z.size() != static_cast<std::size_t>(n)) throw InputError("z must have length n");
    if (delta < 0 || delta >= Rational(1, 2)) throw InputError("delta must lie in [0, 1/2)");
    if (cap < 1) throw InputError("cap must be positive");
    pack(z);
    ScheduleStats st;
    st.n = n;
    st.cap = cap;
    st.delta = delta;
    // Per gadget value: expected runs and probability of being labelled 1. The
    // state is #1 - #0 among the runs so far; it is absorbed at -1.
    Rational runs[2], label1[2];
    for (int b = 0; b < 2; ++b) {
        const Rational up = b ? 1 - delta : delta;
        std::vector<Rational> alive(static_cast<std::size_t>(cap) + 2, Rational(0));
        alive[0] = 1;
        runs[b] = 0;
        for (int t = 0; t < cap; ++t) {
            std::vector<Rational> next(alive.size(), Rational(0));
            for (std::size_t s = 0; s + 1 < alive.size(); ++s) {
                if (alive[s] == 0) continue;
                runs[b] += alive[s];
                next[s + 1] += alive[s] * up;
                if (s > 0) next[s - 1] += alive[s] * (1 - up);
            }
            alive = std::move(next);
        }
        label1[b] = 0;
        for (const Rational& m : alive) label1[b] += m;
    }
    Rational reach = 1;
    st.zero_invocations = 0;
    st.one_invocations = 0;
    for (int b : z) {
        (b ? st.one_invocations : st.zero_invocations) += reach * runs[b];
        reach *= 1 - label1[b];
    }
    st.detect = label1[1];
    st.false_alarm = label1[0];
    st.output_one = 1 - reach;
    st.c0 = to_double(st.zero_invocations) / n;
    st.c1 = to_double(st.one_invocations) / std::max(1.0, std::log2(static_cast<double>(n)));
    return st;
}

nlohmann::json to_json(const ProtocolTree& p) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const ProtocolNode& nd : p.nodes) {
        if (nd.leaf)
            nodes.push_back({{"outputs", nd.output}});
        else
            nodes.push_back({{"speaker", nd.speaker == Speaker::Alice ? "alice" : "bob"},
                             {"msg_table", nd.msg},
                             {"children", {nd.child[0], nd.child[1]}}});
    }
    nlohmann::json r = nlohmann::json::array();
    for (const Rational& q : p.randomness) r.push_back(to_exact_string(q));
    return {{"alice_inputs", p.alice_inputs}, {"bob_inputs", p.bob_inputs}, {"randomness", r}, {"nodes", nodes}};
}

ProtocolTree protocol_from_json(const nlohmann::json& j) {
    ProtocolTree p;
    try {
        p.alice_inputs = j.at("alice_inputs").get<std::size_t>();
        p.bob_inputs = j.at("bob_inputs").get<std::size_t>();
        if (j.contains("randomness"))
            for (const auto& q : j.at("randomness")) p.randomness.push_back(parse_rational(q.get<std::string>()));
        else
            p.randomness.push_back(1);
        for (const auto& jn : j.at("nodes")) {
            ProtocolNode nd;
            if (jn.contains("outputs")) {
                nd.leaf = true;
                nd.output = jn.at("outputs").get<std::vector<std::vector<int>>>();
            } else {
                const std::string s = jn.at("speaker").get<std::string>();
                if (s != "alice" && s != "bob") throw InputError("speaker must be alice or bob");
                nd.speaker = s == "alice" ? Speaker::Alice : Speaker::Bob;
                nd.msg = jn.at("msg_table").get<std::vector<std::vector<int>>>();
                const auto kids = jn.at("children").get<std::vector<int>>();
                if (kids.size() != 2) throw InputError("internal nodes need two children");
                nd.child = {kids[0], kids[1]};
            }
            p.nodes.push_back(std::move(nd));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad protocol JSON: ") + e.what());
    }
    if (p.randomness.size() > kMaxRandomness)
        throw ResourceError("more than " + std::to_string(kMaxRandomness) + " random strings");
    p.validate();
    return p;
}

namespace {

nlohmann::json interval_json(const Interval& v) {
    return {{"mid", v.mid()}, {"lo", v.lo().to_string(30)}, {"hi", v.hi().to_string(30)}};
}

}  // namespace

nlohmann::json to_json(const LiftScheme& s) {
    nlohmann::json q = nlohmann::json::array(), lit = nlohmann::json::array();
    for (const Interval& v : s.q) q.push_back(interval_json(v));
    for (const Interval& v : s.literal) lit.push_back(interval_json(v));
    return {{"z", s.z}, {"q", q}, {"literal", lit}, {"sum", interval_json(s.sum)}, {"cc", s.cc}, {"within_cc", s.within_cc}};
}

nlohmann::json to_json(const ScheduleStats& s) {
    return {{"n", s.n},
            {"cap", s.cap},
            {"delta", to_exact_string(s.delta)},
            {"zero_invocations", to_exact_string(s.zero_invocations)},
            {"one_invocations", to_exact_string(s.one_invocations)},
            {"detect", to_exact_string(s.detect)},
            {"false_alarm", to_exact_string(s.false_alarm)},
            {"output_one", to_exact_string(s.output_one)},
            {"c0", s.c0},
            {"c1", s.c1}};
}

}  // namespace advkit

namespace advkit {

ProtocolTree constant_protocol(std::size_t alice_inputs, std::size_t bob_inputs, int output) {
    return build_protocol(alice_inputs, bob_inputs, {Rational(1)}, {},
                          [](Speaker, std::size_t, std::size_t, const std::vector<int>&) { return 0; },
                          [output](std::size_t, std::size_t, const std::vector<int>&) { return output; });
}

namespace {

int bits_for(std::size_t count) {
    int b = 0;
    while ((std::size_t{1} << b) < count) ++b;
    return b;
}

std::size_t read_bits(const std::vector<int>& t, std::size_t from, int count) {
    std::size_t v = 0;
    for (int k = 0; k < count; ++k) v |= static_cast<std::size_t>(t[from + static_cast<std::size_t>(k)]) << k;
    return v;
}

int least_label(std::uint32_t mask) { return mask == 0 ? 0 : __builtin_ctz(mask); }

}  // namespace

std::vector<NamedProtocol> standard_protocols(const Relation& f, const Gadget& g) {
    const std::size_t n = static_cast<std::size_t>(f.arity());
    const std::size_t xs = power(static_cast<std::size_t>(g.x_size), n);
    const std::size_t ys = power(static_cast<std::size_t>(g.y_size), n);
    const int xb = bits_for(xs), yb = bits_for(ys), lb = bits_for(f.alphabet_size());
    const int gy = bits_for(static_cast<std::size_t>(g.y_size));
    auto answer = [&, n](std::size_t x, std::size_t y) { return least_label(f.valid(inner_string(g, n, x, y))); };
    auto alice_bits = [](std::size_t x, std::size_t k) { return static_cast<int>((x >> k) & 1U); };
    std::vector<NamedProtocol> out;

    std::vector<Speaker> reveal(static_cast<std::size_t>(xb), Speaker::Alice);
    auto reveal_msg = [&](Speaker, std::size_t x, std::size_t, const std::vector<int>& t) {
        return alice_bits(x, t.size());
    };
    auto reveal_out = [&](std::size_t y, std::size_t, const std::vector<int>& t) {
        return answer(read_bits(t, 0, xb), y);
    };
    out.push_back({"alice-reveals", build_protocol(xs, ys, {Rational(1)}, reveal, reveal_msg, reveal_out)});

    std::vector<Speaker> padded = reveal;
    padded.push_back(Speaker::Bob);
    out.push_back({"alice-reveals-padded",
                   build_protocol(xs, ys, {Rational(1)}, padded,
                                  [&](Speaker s, std::size_t x, std::size_t r, const std::vector<int>& t) {
                                      return s == Speaker::Bob ? 0 : reveal_msg(s, x, r, t);
                                  },
                                  reveal_out)});

    const std::size_t pads = std::size_t{1} << xb;
    out.push_back({"alice-reveals-masked",
                   build_protocol(xs, ys, std::vector<Rational>(pads, Rational(1, static_cast<unsigned long>(pads))),
                                  reveal,
                                  [&](Speaker, std::size_t x, std::size_t r, const std::vector<int>& t) {
                                      return alice_bits(x ^ r, t.size());
                                  },
                                  [&](std::size_t y, std::size_t r, const std::vector<int>& t) {
                                      return answer(read_bits(t, 0, xb) ^ r, y);
                                  })});

    std::vector<Speaker> bob_first(static_cast<std::size_t>(yb), Speaker::Bob);
    for (int k = 0; k < lb; ++k) bob_first.push_back(Speaker::Alice);
    out.push_back({"bob-reveals-alice-answers",
                   build_protocol(xs, ys, {Rational(1)}, bob_first,
                                  [&](Speaker s, std::size_t u, std::size_t, const std::vector<int>& t) {
                                      if (s == Speaker::Bob) return alice_bits(u, t.size());
                                      const std::size_t y = read_bits(t, 0, yb);
                                      return alice_bits(static_cast<std::size_t>(answer(u, y)), t.size() - yb);
                                  },
                                  [&](std::size_t, std::size_t, const std::vector<int>& t) {
                                      return static_cast<int>(read_bits(t, static_cast<std::size_t>(yb), lb));
                                  })});

    std::vector<Speaker> per_copy;
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < gy; ++k) per_copy.push_back(Speaker::Bob);
        per_copy.push_back(Speaker::Alice);
    }
    const std::size_t stride = static_cast<std::size_t>(gy) + 1;
    if (per_copy.size() <= static_cast<std::size_t>(kMaxProtocolDepth))
        out.push_back({"copywise",
                       build_protocol(xs, ys, {Rational(1)}, per_copy,
                                      [&](Speaker s, std::size_t u, std::size_t, const std::vector<int>& t) {
                                          const std::size_t i = t.size() / stride, k = t.size() % stride;
                                          if (s == Speaker::Bob)
                                              return alice_bits(static_cast<std::size_t>(digit(u, g.y_size, static_cast<int>(i))), k);
                                          const int yi = static_cast<int>(read_bits(t, i * stride, gy));
                                          return g(digit(u, g.x_size, static_cast<int>(i)), yi);
                                      },
                                      [&](std::size_t, std::size_t, const std::vector<int>& t) {
                                          Input z = 0;
                                          for (std::size_t i = 0; i < n; ++i)
                                              z |= static_cast<Input>(t[i * stride + static_cast<std::size_t>(gy)]) << i;
                                          return least_label(f.valid(z));
                                      })});
    return out;
}

}  // namespace advkit
