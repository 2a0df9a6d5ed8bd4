#include "advkit/measures.hpp"

#include <algorithm>
#include <map>

namespace advkit {

int WeightScheme::position(Input x) const {
    auto it = std::find(inputs.begin(), inputs.end(), x);
    return it == inputs.end() ? -1 : static_cast<int>(it - inputs.begin());
}

Rational WeightScheme::row_sum(int pos) const {
    Rational s = 0;
    for (int i = 0; i < n; ++i) s += at(pos, i);
    return s;
}

Rational WeightScheme::objective() const {
    Rational best = 0;
    for (int pos = 0; pos < static_cast<int>(inputs.size()); ++pos) best = std::max(best, row_sum(pos));
    return best;
}

std::string to_string(WeightScheme::Kind kind) {
    switch (kind) {
        case WeightScheme::Kind::Adv: return "adv";
        case WeightScheme::Kind::CAdv: return "cadv";
        case WeightScheme::Kind::Adv1: return "adv1";
    }
    return "?";
}

Rational BlockWeighting::total() const {
    Rational s = 0;
    for (const auto& [b, v] : w) s += v;
    return s;
}

Rational CoverScheme::total() const {
    Rational s = 0;
    for (const Rational& v : q) s += v;
    return s;
}

bool CoverScheme::covers(const std::vector<Block>& blocks) const {
    for (Block b : blocks) {
        Rational s = 0;
        for (int i = 0; i < static_cast<int>(q.size()); ++i)
            if (b.contains(i)) s += q[static_cast<std::size_t>(i)];
        if (s < 1) return false;
    }
    return true;
}

namespace {

void check_arity(int n) {
    if (n > kMaxMeasureArity)
        throw ResourceError("measure supports n <= " + std::to_string(kMaxMeasureArity) + ", got n=" +
                            std::to_string(n));
}

void pack(const std::vector<Block>& blocks, std::size_t from, std::uint32_t used, int current, int& best) {
    best = std::max(best, current);
    // Every further block needs at least one unused coordinate among those still reachable.
    std::uint32_t reachable = 0;
    for (std::size_t i = from; i < blocks.size(); ++i)
        if ((blocks[i].bits & used) == 0) reachable |= blocks[i].bits;
    if (current + popcount(reachable) <= best) return;
    for (std::size_t i = from; i < blocks.size(); ++i)
        if ((blocks[i].bits & used) == 0) pack(blocks, i + 1, used | blocks[i].bits, current + 1, best);
}

int max_packing(const std::vector<Block>& blocks) {
    int best = 0;
    pack(blocks, 0, 0, 0, best);
    return best;
}

std::uint32_t block_set_key(const std::vector<Block>& blocks) {
    std::uint32_t key = 0;
    for (Block b : blocks) key |= std::uint32_t{1} << (b.bits - 1);
    return key;
}

// Shared depth-first search over completions for cbs and cfbs. Prunes with the
// block sensitivity of blocks whose endpoints are already labelled.
template <class T, class LeafValue>
CriticalResult<T> critical_search(const Relation& r, LeafValue leaf_value) {
    check_arity(r.arity());
    CompletionEnumerator layout(r);
    const std::vector<Input>& free = layout.free_inputs();
    const auto& choices = layout.choices();
    std::vector<Input> crit = critical_inputs(r);
    std::vector<int> labels = layout.fixed().labels();

    CriticalResult<T> result;
    bool have = false;

    auto finish_completion = [&](std::vector<int>& lab) {
        TruthTable total(r.arity(), lab);
        ++result.completions;
        T worst{};
        std::optional<Input> arg;
        for (Input x : crit) {
            T v = leaf_value(total, x);
            if (!arg || v > worst) {
                worst = v;
                arg = x;
            }
            if (have && !(worst < result.value)) return;
        }
        if (!have || worst < result.value) {
            result.value = worst;
            result.argmax = arg;
            result.completion = Completion{total};
            have = true;
        }
    };

    std::vector<std::size_t> stack_choice;
    auto dfs = [&](auto&& self, std::size_t k) -> void {
        if (have) {
            TruthTable partial(r.arity(), labels);
            for (Input x : crit)
                if (!(T(bs_at(partial, x)) < result.value)) return;
        }
        if (k == free.size()) {
            finish_completion(labels);
            return;
        }
        for (int c : choices[k]) {
            labels[free[k]] = c;
            self(self, k + 1);
        }
        labels[free[k]] = TruthTable::kUndefined;
    };
    dfs(dfs, 0);
    return result;
}

}  // namespace

int bs_at(const TruthTable& table, Input x) {
    check_arity(table.arity());
    return max_packing(minimal_sensitive_blocks(table, x));
}

int bs_at(const PartialFn& f, Input x) { return bs_at(f.table(), x); }

int bs(const PartialFn& f) {
    int best = 0;
    for (Input x : f.domain()) best = std::max(best, bs_at(f, x));
    return best;
}

FbsResult fbs_of_blocks(int n, const std::vector<Block>& blocks) {
    FbsResult res;
    res.cover.q.assign(static_cast<std::size_t>(n), Rational(0));
    if (blocks.empty()) return res;
    LinearProgram lp(Sense::Maximize);
    for (Block b : blocks) lp.add_variable("w_" + std::to_string(b.bits), 1);
    std::vector<int> row_of(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        std::vector<LinearTerm> terms;
        for (std::size_t k = 0; k < blocks.size(); ++k)
            if (blocks[k].contains(i)) terms.push_back({static_cast<int>(k), 1});
        if (!terms.empty()) row_of[static_cast<std::size_t>(i)] = lp.add_constraint(terms, Cmp::LessEq, 1, "coord" + std::to_string(i + 1));
    }
    LpSolution sol = solve_lp_exact(lp);
    if (sol.status != LpStatus::Optimal || !verify_solution(lp, sol))
        throw InternalError("fractional block sensitivity LP failed to certify");
    res.value = sol.value;
    for (std::size_t k = 0; k < blocks.size(); ++k)
        if (sol.primal[k] != 0) res.packing.w.emplace_back(blocks[k], sol.primal[k]);
    for (int i = 0; i < n; ++i)
        if (row_of[static_cast<std::size_t>(i)] >= 0)
            res.cover.q[static_cast<std::size_t>(i)] = sol.dual[static_cast<std::size_t>(row_of[static_cast<std::size_t>(i)])];
    return res;
}

FbsResult fbs_at(const TruthTable& table, Input x) {
    check_arity(table.arity());
    FbsResult res = fbs_of_blocks(table.arity(), minimal_sensitive_blocks(table, x));
    res.packing.x = x;
    res.cover.x = x;
    if (res.packing.total() != res.value || res.cover.total() != res.value ||
        !res.cover.covers(sensitive_blocks(table, x)))
        throw InternalError("fractional block sensitivity witnesses disagree");
    return res;
}

FbsResult fbs_at(const PartialFn& f, Input x) { return fbs_at(f.table(), x); }

Rational fbs(const PartialFn& f) {
    Rational best = 0;
    for (Input x : f.domain()) best = std::max(best, fbs_at(f, x).value);
    return best;
}

CriticalResult<int> cbs(const Relation& r) {
    return critical_search<int>(r, [](const TruthTable& t, Input x) { return bs_at(t, x); });
}

CriticalResult<int> cbs(const PartialFn& f) { return cbs(to_relation(f)); }

CriticalResult<Rational> cfbs(const Relation& r) {
    std::map<std::uint32_t, Rational> memo;
    return critical_search<Rational>(r, [&memo](const TruthTable& t, Input x) {
        std::vector<Block> blocks = minimal_sensitive_blocks(t, x);
        std::uint32_t key = block_set_key(blocks);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Rational v = fbs_of_blocks(t.arity(), blocks).value;
        memo.emplace(key, v);
        return v;
    });
}

CriticalResult<Rational> cfbs(const PartialFn& f) { return cfbs(to_relation(f)); }

namespace {

GeomPair make_pair(const GeomProgram& p, int a, int b) {
    GeomPair pr{a, b, {}};
    Input diff = p.inputs[static_cast<std::size_t>(a)] ^ p.inputs[static_cast<std::size_t>(b)];
    for (int i = 0; i < p.n; ++i)
        if ((diff >> i) & 1U) pr.indices.push_back(i);
    return pr;
}

template <class Constrained>
GeomProgram build_program(int n, std::vector<Input> inputs, bool singleton, Constrained constrained) {
    GeomProgram p;
    p.n = n;
    p.inputs = std::move(inputs);
    for (int a = 0; a < static_cast<int>(p.inputs.size()); ++a)
        for (int b = a + 1; b < static_cast<int>(p.inputs.size()); ++b) {
            Input x = p.inputs[static_cast<std::size_t>(a)], y = p.inputs[static_cast<std::size_t>(b)];
            if (!constrained(x, y)) continue;
            if (singleton && popcount(x ^ y) != 1) continue;
            p.pairs.push_back(make_pair(p, a, b));
        }
    return p;
}

WeightScheme scheme_from(const GeomProgram& p, WeightScheme::Kind kind, std::vector<Rational> q) {
    WeightScheme s;
    s.kind = kind;
    s.n = p.n;
    s.inputs = p.inputs;
    s.q = std::move(q);
    if (s.q.empty()) s.q.assign(p.num_weights(), Rational(0));
    return s;
}

AdvResult run_adv(const GeomProgram& p, WeightScheme::Kind kind, const GeomOptions& options) {
    GeomResult g = solve_geom_min(p, options);
    AdvResult res;
    res.scheme = scheme_from(p, kind, g.value.witness_primal);
    res.value = std::move(g.value);
    res.certificate = std::move(g.certificate);
    return res;
}

}  // namespace

GeomProgram adversary_program(const PartialFn& f, bool singleton) {
    check_arity(f.arity());
    return build_program(f.arity(), f.domain(), singleton, [&](Input x, Input y) { return f.bit(x) != f.bit(y); });
}

GeomProgram adversary_program(const Relation& r, bool singleton) {
    check_arity(r.arity());
    std::vector<Input> all(r.size());
    for (Input x = 0; x < r.size(); ++x) all[x] = x;
    return build_program(r.arity(), std::move(all), singleton, [&](Input x, Input y) { return r.disjoint(x, y); });
}

CadvResult cadv(const GeomProgram& p) {
    CadvResult res;
    if (p.pairs.empty()) {
        res.scheme = scheme_from(p, WeightScheme::Kind::CAdv, {});
        return res;
    }
    LinearProgram lp(Sense::Minimize);
    const int top = lp.add_variable("T", 1);
    std::vector<int> qvar(p.num_weights(), -1);
    auto q_of = [&](int pos, int i) {
        int& v = qvar[p.weight_index(pos, i)];
        if (v < 0) v = lp.add_variable("q_" + bit_string(p.inputs[static_cast<std::size_t>(pos)], p.n) + "_" + std::to_string(i + 1));
        return v;
    };
    for (std::size_t k = 0; k < p.pairs.size(); ++k) {
        const GeomPair& pr = p.pairs[k];
        std::vector<LinearTerm> sum;
        for (int i : pr.indices) {
            int t = lp.add_variable("t_" + std::to_string(k) + "_" + std::to_string(i + 1));
            lp.add_constraint({{t, 1}, {q_of(pr.x, i), -1}}, Cmp::LessEq, 0);
            lp.add_constraint({{t, 1}, {q_of(pr.y, i), -1}}, Cmp::LessEq, 0);
            sum.push_back({t, 1});
        }
        lp.add_constraint(sum, Cmp::GreaterEq, 1, "pair" + std::to_string(k));
    }
    for (int pos = 0; pos < static_cast<int>(p.inputs.size()); ++pos) {
        std::vector<LinearTerm> row{{top, 1}};
        for (int i = 0; i < p.n; ++i)
            if (qvar[p.weight_index(pos, i)] >= 0) row.push_back({qvar[p.weight_index(pos, i)], -1});
        if (row.size() > 1) lp.add_constraint(row, Cmp::GreaterEq, 0, "epi" + std::to_string(pos));
    }
    LpSolution sol = solve_lp_exact(lp);
    if (sol.status != LpStatus::Optimal || !verify_solution(lp, sol))
        throw InternalError("classical adversary LP failed to certify");
    std::vector<Rational> q(p.num_weights());
    for (std::size_t w = 0; w < q.size(); ++w)
        if (qvar[w] >= 0) q[w] = sol.primal[static_cast<std::size_t>(qvar[w])];
    res.value = sol.value;
    res.scheme = scheme_from(p, WeightScheme::Kind::CAdv, std::move(q));
    res.lp_iterations = sol.iterations;
    if (res.scheme.objective() != res.value) throw InternalError("classical adversary scheme objective mismatch");
    return res;
}

CadvResult cadv(const PartialFn& f) { return cadv(adversary_program(f)); }
CadvResult cadv(const Relation& r) { return cadv(adversary_program(r)); }

AdvResult adv(const PartialFn& f, const GeomOptions& o) { return run_adv(adversary_program(f), WeightScheme::Kind::Adv, o); }
AdvResult adv(const Relation& r, const GeomOptions& o) { return run_adv(adversary_program(r), WeightScheme::Kind::Adv, o); }
AdvResult adv1(const PartialFn& f, const GeomOptions& o) {
    return run_adv(adversary_program(f, true), WeightScheme::Kind::Adv1, o);
}
AdvResult adv1(const Relation& r, const GeomOptions& o) {
    return run_adv(adversary_program(r, true), WeightScheme::Kind::Adv1, o);
}

std::vector<std::uint32_t> degree_lp_monomials(int n, int d) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m)
        if (popcount(m) <= d) out.push_back(m);
    return out;
}

LinearProgram degree_lp(const PartialFn& f, int d, const Rational& eps) {
    const int n = f.arity();
    std::vector<std::uint32_t> monomials = degree_lp_monomials(n, d);
    LinearProgram lp(Sense::Minimize);
    for (std::uint32_t m : monomials) {
        lp.add_variable("cp_" + std::to_string(m));
        lp.add_variable("cm_" + std::to_string(m));
    }
    for (Input x = 0; x < f.size(); ++x) {
        std::vector<LinearTerm> terms;
        for (std::size_t k = 0; k < monomials.size(); ++k)
            if ((monomials[k] & ~x) == 0) {
                terms.push_back({static_cast<int>(2 * k), 1});
                terms.push_back({static_cast<int>(2 * k + 1), -1});
            }
        Rational lo = 0, hi = 1;
        if (f.in_domain(x)) {
            if (f.bit(x) == 0)
                hi = eps;
            else
                lo = 1 - eps;
        }
        std::string name = "x" + bit_string(x, n);
        if (lo == hi) {
            lp.add_constraint(terms, Cmp::Equal, lo, name);
        } else {
            lp.add_constraint(terms, Cmp::GreaterEq, lo, name + "_lo");
            lp.add_constraint(terms, Cmp::LessEq, hi, name + "_hi");
        }
    }
    return lp;
}

DegreeResult approx_deg(const PartialFn& f, const Rational& eps) {
    if (eps < 0 || eps >= Rational(1, 2)) throw InputError("eps must lie in [0, 1/2)");
    check_arity(f.arity());
    DegreeResult res;
    res.eps = eps;
    std::vector<Rational> last_farkas;
    for (int d = 0; d <= f.arity(); ++d) {
        LinearProgram lp = degree_lp(f, d, eps);
        LpSolution sol = solve_lp_exact(lp);
        if (!verify_solution(lp, sol)) throw InternalError("degree LP failed to certify");
        if (sol.status == LpStatus::Infeasible) {
            last_farkas = sol.dual;
            continue;
        }
        res.degree = d;
        res.witness = MultiPoly(f.arity());
        std::vector<std::uint32_t> monomials = degree_lp_monomials(f.arity(), d);
        for (std::size_t k = 0; k < monomials.size(); ++k)
            res.witness.add_term(monomials[k], sol.primal[2 * k] - sol.primal[2 * k + 1]);
        res.infeasibility = std::move(last_farkas);
        return res;
    }
    throw InternalError("no polynomial of degree <= n satisfies the degree LP");
}

DegreeResult exact_deg(const PartialFn& f) { return approx_deg(f, 0); }

}  // namespace advkit
