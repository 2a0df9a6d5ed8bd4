#include "advkit/gadgets.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace advkit {

Gadget::Gadget(int xs, int ys, std::vector<int> e) : x_size(xs), y_size(ys), entries(std::move(e)) {
    if (xs < 1 || ys < 1) throw InputError("gadget input sets must be nonempty");
    if (entries.size() != static_cast<std::size_t>(xs) * static_cast<std::size_t>(ys))
        throw InputError("gadget matrix has " + std::to_string(entries.size()) + " entries, expected " +
                         std::to_string(xs * ys));
    for (int v : entries)
        if (v != 0 && v != 1) throw InputError("gadget entries must be 0 or 1");
}

std::vector<std::pair<int, int>> Gadget::preimage(int value) const {
    std::vector<std::pair<int, int>> out;
    for (int x = 0; x < x_size; ++x)
        for (int y = 0; y < y_size; ++y)
            if ((*this)(x, y) == value) out.emplace_back(x, y);
    return out;
}

Gadget ver() {
    std::vector<int> e(16);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) e[static_cast<std::size_t>(x * 4 + y)] = (x + y) % 4 >= 2 ? 1 : 0;
    return Gadget(4, 4, std::move(e));
}

std::optional<SubfunctionMatch> find_subfunction(const Gadget& g, const Matrix2& target) {
    for (int r0 = 0; r0 < g.x_size; ++r0)
        for (int r1 = r0 + 1; r1 < g.x_size; ++r1)
            for (int c0 = 0; c0 < g.y_size; ++c0)
                for (int c1 = c0 + 1; c1 < g.y_size; ++c1)
                    for (int enc = 0; enc < 4; ++enc) {
                        SubfunctionMatch m{{r0, r1}, {c0, c1}};
                        if (enc & 2) std::swap(m.rows[0], m.rows[1]);
                        if (enc & 1) std::swap(m.cols[0], m.cols[1]);
                        bool ok = true;
                        for (int a = 0; a < 2 && ok; ++a)
                            for (int b = 0; b < 2 && ok; ++b)
                                ok = g(m.rows[static_cast<std::size_t>(a)], m.cols[static_cast<std::size_t>(b)]) ==
                                     target[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                        if (ok) return m;
                    }
    return std::nullopt;
}

bool is_flip_map(const Gadget& g, const FlipMap& m) {
    if (static_cast<int>(m.sigma_a.size()) != g.x_size || static_cast<int>(m.sigma_b.size()) != g.y_size) return false;
    for (int x = 0; x < g.x_size; ++x)
        for (int y = 0; y < g.y_size; ++y)
            if (g(m.sigma_a[static_cast<std::size_t>(x)], m.sigma_b[static_cast<std::size_t>(y)]) != 1 - g(x, y))
                return false;
    return true;
}

namespace {

bool is_permutation_of(const Permutation& p, int size) {
    if (static_cast<int>(p.size()) != size) return false;
    std::vector<char> seen(static_cast<std::size_t>(size), 0);
    for (int v : p) {
        if (v < 0 || v >= size || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = 1;
    }
    return true;
}

Permutation identity_perm(int size) {
    Permutation p(static_cast<std::size_t>(size));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

bool augment(int x, const std::vector<std::vector<int>>& adj, std::vector<int>& match_right, std::vector<char>& seen) {
    for (int r : adj[static_cast<std::size_t>(x)]) {
        if (seen[static_cast<std::size_t>(r)]) continue;
        seen[static_cast<std::size_t>(r)] = 1;
        int& owner = match_right[static_cast<std::size_t>(r)];
        if (owner < 0 || augment(owner, adj, match_right, seen)) {
            owner = x;
            return true;
        }
    }
    return false;
}

int mod(long v, int m) {
    long r = v % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

std::optional<FlipMap> flip_map(const Gadget& g) {
    if (g.y_size > 10) throw ResourceError("flip-map search over S_Y is capped at |Y| = 10");
    Permutation sb = identity_perm(g.y_size);
    do {
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.x_size));
        bool hopeless = false;
        for (int x = 0; x < g.x_size && !hopeless; ++x) {
            for (int x2 = 0; x2 < g.x_size; ++x2) {
                bool ok = true;
                for (int y = 0; y < g.y_size && ok; ++y) ok = g(x2, sb[static_cast<std::size_t>(y)]) == 1 - g(x, y);
                if (ok) adj[static_cast<std::size_t>(x)].push_back(x2);
            }
            hopeless = adj[static_cast<std::size_t>(x)].empty();
        }
        if (hopeless) continue;
        std::vector<int> match_right(static_cast<std::size_t>(g.x_size), -1);
        int matched = 0;
        for (int x = 0; x < g.x_size; ++x) {
            std::vector<char> seen(static_cast<std::size_t>(g.x_size), 0);
            matched += augment(x, adj, match_right, seen);
        }
        if (matched != g.x_size) continue;
        FlipMap m{Permutation(static_cast<std::size_t>(g.x_size)), sb};
        for (int r = 0; r < g.x_size; ++r) m.sigma_a[static_cast<std::size_t>(match_right[static_cast<std::size_t>(r)])] = r;
        if (!is_flip_map(g, m)) throw InternalError("flip-map matching produced an invalid map");
        return m;
    } while (std::next_permutation(sb.begin(), sb.end()));
    return std::nullopt;
}

bool is_self_reduction(const Gadget& g, const SelfReduction& sr, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (sr.support.empty()) return fail("empty support");
    Rational total = 0;
    bool uniform = true;
    for (const auto& e : sr.support) {
        if (!is_permutation_of(e.sigma_a, g.x_size) || !is_permutation_of(e.sigma_b, g.y_size))
            return fail("support element is not a permutation pair");
        if (e.probability <= 0) return fail("nonpositive probability " + to_exact_string(e.probability));
        total += e.probability;
        uniform = uniform && e.probability == sr.support.front().probability;
    }
    if (total != 1) return fail("probabilities sum to " + to_exact_string(total));
    const std::size_t cells = static_cast<std::size_t>(g.x_size) * static_cast<std::size_t>(g.y_size);
    const std::size_t ones = g.preimage(1).size();
    const std::size_t class_size[2] = {cells - ones, ones};
    for (int x = 0; x < g.x_size; ++x)
        for (int y = 0; y < g.y_size; ++y) {
            const int value = g(x, y);
            // Uniform supports compare integer hit counts; otherwise exact rationals.
            std::vector<std::uint64_t> hits(uniform ? cells : 0, 0);
            std::vector<Rational> mass(uniform ? 0 : cells);
            for (const auto& e : sr.support) {
                int x2 = e.sigma_a[static_cast<std::size_t>(x)], y2 = e.sigma_b[static_cast<std::size_t>(y)];
                if (g(x2, y2) != value)
                    return fail("element maps (" + std::to_string(x) + "," + std::to_string(y) + ") across values");
                std::size_t cell = static_cast<std::size_t>(x2) * static_cast<std::size_t>(g.y_size) + static_cast<std::size_t>(y2);
                if (uniform)
                    ++hits[cell];
                else
                    mass[cell] += e.probability;
            }
            const std::size_t k = class_size[value];
            for (std::size_t cell = 0; cell < cells; ++cell) {
                if (g.entries[cell] != value) continue;
                bool ok = uniform ? hits[cell] * k == sr.support.size() : mass[cell] * static_cast<long>(k) == 1;
                if (!ok)
                    return fail("image of (" + std::to_string(x) + "," + std::to_string(y) +
                                ") is not uniform on its value class");
            }
        }
    return true;
}

namespace {

SelfReduction uniform_over(std::vector<std::pair<Permutation, Permutation>> pairs) {
    SelfReduction sr;
    Rational p(1, static_cast<unsigned long>(pairs.size()));
    for (auto& [a, b] : pairs) sr.support.push_back({std::move(a), std::move(b), p});
    return sr;
}

}  // namespace

std::optional<SelfReduction> self_reduction(const Gadget& g, std::string* diagnostics) {
    if (g.x_size > 8 || g.y_size > 8) throw InputError("self-reduction search requires |X|, |Y| <= 8");
    std::string log;
    auto finish = [&](std::optional<SelfReduction> r) {
        if (diagnostics) *diagnostics = log;
        return r;
    };
    std::string why;
    if (g.x_size == g.y_size) {
        const int m = g.x_size;
        auto shifted = [&](const Permutation& a, const Permutation& b, int r) {
            Permutation sa(a.size()), sb(b.size());
            for (int v = 0; v < m; ++v) {
                sa[static_cast<std::size_t>(v)] = mod(a[static_cast<std::size_t>(v)] + r, m);
                sb[static_cast<std::size_t>(v)] = mod(b[static_cast<std::size_t>(v)] - r, m);
            }
            return std::make_pair(sa, sb);
        };
        std::vector<std::pair<Permutation, Permutation>> shifts;
        for (int r = 0; r < m; ++r) shifts.push_back(shifted(identity_perm(m), identity_perm(m), r));
        SelfReduction plain = uniform_over(shifts);
        if (is_self_reduction(g, plain, &why)) return finish(plain);
        log += "shift family alone: " + why + "\n";
        std::vector<int> units;
        for (int a = 1; a < m; ++a)
            if (std::gcd(a, m) == 1) units.push_back(a);
        if (m == 1) units.push_back(0);
        std::size_t tried = 0;
        for (int a : units)
            for (int b = 0; b < m; ++b)
                for (int c : units)
                    for (int e = 0; e < m; ++e) {
                        Permutation pa(static_cast<std::size_t>(m)), pb(static_cast<std::size_t>(m));
                        for (int v = 0; v < m; ++v) {
                            pa[static_cast<std::size_t>(v)] = mod(static_cast<long>(a) * v + b, m);
                            pb[static_cast<std::size_t>(v)] = mod(static_cast<long>(c) * v + e, m);
                        }
                        std::vector<std::pair<Permutation, Permutation>> pairs = shifts;
                        for (int r = 0; r < m; ++r) pairs.push_back(shifted(pa, pb, r));
                        SelfReduction sr = uniform_over(std::move(pairs));
                        ++tried;
                        if (is_self_reduction(g, sr)) return finish(sr);
                    }
        log += "shift family with one affine pair: none of " + std::to_string(tried) + " candidates\n";
    } else {
        log += "shift family skipped: |X| != |Y|\n";
    }
    if (g.x_size <= 4 && g.y_size <= 4) {
        std::vector<std::pair<Permutation, Permutation>> preserving;
        Permutation pa = identity_perm(g.x_size);
        do {
            Permutation pb = identity_perm(g.y_size);
            do {
                bool ok = true;
                for (int x = 0; x < g.x_size && ok; ++x)
                    for (int y = 0; y < g.y_size && ok; ++y)
                        ok = g(pa[static_cast<std::size_t>(x)], pb[static_cast<std::size_t>(y)]) == g(x, y);
                if (ok) preserving.emplace_back(pa, pb);
            } while (std::next_permutation(pb.begin(), pb.end()));
        } while (std::next_permutation(pa.begin(), pa.end()));
        SelfReduction sr = uniform_over(preserving);
        if (is_self_reduction(g, sr, &why)) return finish(sr);
        log += "uniform over " + std::to_string(preserving.size()) + " value-preserving pairs: " + why + "\n";
    } else {
        log += "brute-force fallback skipped: |X| or |Y| above 4\n";
    }
    return finish(std::nullopt);
}

Versatility check_versatility(const Gadget& g) {
    Versatility v;
    v.flip = flip_map(g);
    v.self_reduction = self_reduction(g, &v.diagnostics);
    v.and_embedding = find_subfunction(g, kAndMatrix);
    v.or_embedding = find_subfunction(g, kOrMatrix);
    if (!v.flip) v.diagnostics += "no flip map\n";
    if (!v.and_embedding) v.diagnostics += "no AND submatrix\n";
    if (!v.or_embedding) v.diagnostics += "no OR submatrix\n";
    return v;
}

Sample s_sample(const Gadget& g, const Versatility& v, const std::vector<int>& s, int a, int b,
                const std::vector<std::size_t>& randomness) {
    if (!v.flip || !v.self_reduction) throw InputError("s-sampling needs a flip map and a self-reduction");
    if (a < 0 || a >= g.x_size || b < 0 || b >= g.y_size) throw InputError("gadget input out of range");
    if (randomness.size() != s.size()) throw InputError("one randomness index is needed per position");
    const auto& support = v.self_reduction->support;
    Sample out{std::vector<int>(s.size()), std::vector<int>(s.size())};
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (randomness[i] >= support.size()) throw InputError("randomness index out of range");
        const auto& e = support[randomness[i]];
        int x = e.sigma_a[static_cast<std::size_t>(a)];
        int y = e.sigma_b[static_cast<std::size_t>(b)];
        if (s[i]) {
            x = v.flip->sigma_a[static_cast<std::size_t>(x)];
            y = v.flip->sigma_b[static_cast<std::size_t>(y)];
        }
        out.x[i] = x;
        out.y[i] = y;
    }
    return out;
}

std::vector<std::pair<Sample, Rational>> s_sample_distribution(const Gadget& g, const Versatility& v,
                                                               const std::vector<int>& s, int a, int b) {
    if (!v.self_reduction) throw InputError("s-sampling needs a self-reduction");
    const auto& support = v.self_reduction->support;
    std::map<Sample, Rational> dist;
    std::vector<std::size_t> r(s.size(), 0);
    while (true) {
        Rational p = 1;
        for (std::size_t idx : r) p *= support[idx].probability;
        dist[s_sample(g, v, s, a, b, r)] += p;
        std::size_t i = 0;
        while (i < r.size() && ++r[i] == support.size()) r[i++] = 0;
        if (i == r.size()) break;
    }
    return {dist.begin(), dist.end()};
}

int ComposedMatrix::at(std::size_t x, std::size_t y) const {
    std::uint32_t m = mask(x, y);
    return popcount(m) == 1 ? __builtin_ctz(m) : -1;
}

int digit(std::size_t index, int base, int i) {
    for (int k = 0; k < i; ++k) index /= static_cast<std::size_t>(base);
    return static_cast<int>(index % static_cast<std::size_t>(base));
}

std::size_t compose_index(const std::vector<int>& digits, int base) {
    std::size_t idx = 0;
    for (std::size_t k = digits.size(); k-- > 0;) idx = idx * static_cast<std::size_t>(base) + static_cast<std::size_t>(digits[k]);
    return idx;
}

namespace {

template <class Valid>
ComposedMatrix compose_impl(int n, std::size_t alphabet, const Gadget& g, Valid valid) {
    ComposedMatrix out;
    out.n = n;
    out.alphabet = alphabet;
    out.rows = 1;
    out.cols = 1;
    for (int i = 0; i < n; ++i) {
        out.rows *= static_cast<std::size_t>(g.x_size);
        out.cols *= static_cast<std::size_t>(g.y_size);
        if (out.rows * out.cols > kMaxComposedEntries)
            throw ResourceError("composed matrix exceeds 2^24 entries");
    }
    out.valid.resize(out.rows * out.cols);
    for (std::size_t xr = 0; xr < out.rows; ++xr)
        for (std::size_t yc = 0; yc < out.cols; ++yc) {
            Input z = 0;
            std::size_t xs = xr, ys = yc;
            for (int i = 0; i < n; ++i) {
                int xi = static_cast<int>(xs % static_cast<std::size_t>(g.x_size));
                int yi = static_cast<int>(ys % static_cast<std::size_t>(g.y_size));
                xs /= static_cast<std::size_t>(g.x_size);
                ys /= static_cast<std::size_t>(g.y_size);
                if (g(xi, yi)) z |= Input{1} << i;
            }
            out.valid[xr * out.cols + yc] = valid(z);
        }
    return out;
}

}  // namespace

ComposedMatrix compose(const PartialFn& f, const Gadget& g) {
    return compose_impl(f.arity(), 2, g,
                        [&](Input z) { return f.in_domain(z) ? std::uint32_t{1} << f.bit(z) : std::uint32_t{0}; });
}

ComposedMatrix compose(const Relation& r, const Gadget& g) {
    return compose_impl(r.arity(), r.alphabet_size(), g, [&](Input z) { return r.valid(z); });
}

GadgetFamilyMember parity_family(int n) {
    if (n < 1 || n > 3) throw ResourceError("the parity gadget family is built for 1 <= n <= 3");
    GadgetFamilyMember out;
    out.n = n;
    const Gadget v = ver();
    ComposedMatrix c = compose(parity_fn(n), v);
    std::vector<int> e(c.valid.size());
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = c.valid[k] == 2 ? 1 : 0;
    out.gadget = Gadget(static_cast<int>(c.rows), static_cast<int>(c.cols), std::move(e));
    const Gadget& gn = out.gadget;
    const std::size_t size = c.rows;

    auto vflip = flip_map(v);
    auto vsr = self_reduction(v);
    if (!vflip || !vsr) throw InternalError("VER lost its versatility witnesses");

    // Flip one inner copy.
    FlipMap flip{Permutation(size), Permutation(size)};
    for (std::size_t idx = 0; idx < size; ++idx) {
        std::vector<int> dx(static_cast<std::size_t>(n)), dy(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) dx[static_cast<std::size_t>(i)] = dy[static_cast<std::size_t>(i)] = digit(idx, 4, i);
        dx[0] = vflip->sigma_a[static_cast<std::size_t>(dx[0])];
        dy[0] = vflip->sigma_b[static_cast<std::size_t>(dy[0])];
        flip.sigma_a[idx] = static_cast<int>(compose_index(dx, 4));
        flip.sigma_b[idx] = static_cast<int>(compose_index(dy, 4));
    }
    if (!is_flip_map(gn, flip)) throw InternalError("composite flip map is invalid");

    // Even-size subsets of flipped copies composed with independent per-copy reductions.
    SelfReduction sr;
    const std::size_t per = vsr->support.size();
    std::size_t tuples = 1;
    for (int i = 0; i < n; ++i) tuples *= per;
    for (std::uint32_t subset = 0; subset < (1U << n); ++subset) {
        if (popcount(subset) % 2) continue;
        for (std::size_t t = 0; t < tuples; ++t) {
            SelfReduction::Element el{Permutation(size), Permutation(size), Rational(1, 1U << (n - 1))};
            std::vector<std::size_t> pick(static_cast<std::size_t>(n));
            std::size_t rest = t;
            for (int i = 0; i < n; ++i) {
                pick[static_cast<std::size_t>(i)] = rest % per;
                rest /= per;
                el.probability *= vsr->support[pick[static_cast<std::size_t>(i)]].probability;
            }
            for (std::size_t idx = 0; idx < size; ++idx) {
                std::vector<int> dx(static_cast<std::size_t>(n)), dy(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    const auto& comp = vsr->support[pick[static_cast<std::size_t>(i)]];
                    int xi = comp.sigma_a[static_cast<std::size_t>(digit(idx, 4, i))];
                    int yi = comp.sigma_b[static_cast<std::size_t>(digit(idx, 4, i))];
                    if ((subset >> i) & 1U) {
                        xi = vflip->sigma_a[static_cast<std::size_t>(xi)];
                        yi = vflip->sigma_b[static_cast<std::size_t>(yi)];
                    }
                    dx[static_cast<std::size_t>(i)] = xi;
                    dy[static_cast<std::size_t>(i)] = yi;
                }
                el.sigma_a[idx] = static_cast<int>(compose_index(dx, 4));
                el.sigma_b[idx] = static_cast<int>(compose_index(dy, 4));
            }
            sr.support.push_back(std::move(el));
        }
    }
    std::string why;
    if (!is_self_reduction(gn, sr, &why)) throw InternalError("composite self-reduction fails: " + why);

    out.versatility.flip = std::move(flip);
    out.versatility.self_reduction = std::move(sr);
    out.versatility.and_embedding = find_subfunction(gn, kAndMatrix);
    out.versatility.or_embedding = find_subfunction(gn, kOrMatrix);

    auto and1 = find_subfunction(v, kAndMatrix);
    const std::size_t strings = std::size_t{1} << n;
    for (std::size_t j = 0; j < strings; ++j) {
        std::vector<int> dx(static_cast<std::size_t>(n)), dy(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            dx[static_cast<std::size_t>(i)] = and1->rows[(j >> i) & 1U];
            dy[static_cast<std::size_t>(i)] = and1->cols[(j >> i) & 1U];
        }
        out.ip_rows.push_back(compose_index(dx, 4));
        out.ip_cols.push_back(compose_index(dy, 4));
    }
    for (std::size_t j = 0; j < strings; ++j)
        for (std::size_t k = 0; k < strings; ++k)
            if (gn(static_cast<int>(out.ip_rows[j]), static_cast<int>(out.ip_cols[k])) !=
                popcount(static_cast<std::uint32_t>(j & k)) % 2)
                throw InternalError("inner-product embedding fails");
    return out;
}

nlohmann::json to_json(const Gadget& g) {
    nlohmann::json rows = nlohmann::json::array();
    for (int x = 0; x < g.x_size; ++x) {
        std::string r;
        for (int y = 0; y < g.y_size; ++y) r += g(x, y) ? '1' : '0';
        rows.push_back(r);
    }
    return {{"X_size", g.x_size}, {"Y_size", g.y_size}, {"rows", rows}};
}

Gadget gadget_from_json(const nlohmann::json& j) {
    try {
        int xs = j.at("X_size").get<int>(), ys = j.at("Y_size").get<int>();
        const auto& rows = j.at("rows");
        if (static_cast<int>(rows.size()) != xs) throw InputError("gadget JSON row count differs from X_size");
        std::vector<int> e;
        for (const auto& r : rows) {
            std::string s = r.get<std::string>();
            if (static_cast<int>(s.size()) != ys) throw InputError("gadget JSON row length differs from Y_size");
            for (char ch : s) {
                if (ch != '0' && ch != '1') throw InputError("gadget JSON rows must be bit strings");
                e.push_back(ch - '0');
            }
        }
        return Gadget(xs, ys, std::move(e));
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(std::string("malformed gadget JSON: ") + ex.what());
    }
}

nlohmann::json to_json(const Versatility& v) {
    nlohmann::json j;
    j["versatile"] = v.versatile();
    if (v.flip) j["flip"] = {{"sigma_a", v.flip->sigma_a}, {"sigma_b", v.flip->sigma_b}};
    if (v.self_reduction) {
        nlohmann::json s = nlohmann::json::array();
        for (const auto& e : v.self_reduction->support)
            s.push_back({{"sigma_a", e.sigma_a}, {"sigma_b", e.sigma_b}, {"probability", to_exact_string(e.probability)}});
        j["self_reduction"] = s;
    }
    auto emb = [](const SubfunctionMatch& m) { return nlohmann::json{{"rows", m.rows}, {"cols", m.cols}}; };
    if (v.and_embedding) j["and_embedding"] = emb(*v.and_embedding);
    if (v.or_embedding) j["or_embedding"] = emb(*v.or_embedding);
    if (!v.diagnostics.empty()) j["diagnostics"] = v.diagnostics;
    return j;
}

}  // namespace advkit
