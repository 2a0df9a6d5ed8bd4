#include "advkit/conversions.hpp"

#include <algorithm>

#include "advkit/interval.hpp"

namespace advkit {

namespace {

// sqrt(p) split into an exact rational part (p a rational square) or an enclosure.
bool exact_sqrt(const Rational& p, Rational& out) {
    if (mpz_perfect_square_p(p.get_num_mpz_t()) == 0 || mpz_perfect_square_p(p.get_den_mpz_t()) == 0) return false;
    mpz_class num, den;
    mpz_sqrt(num.get_mpz_t(), p.get_num_mpz_t());
    mpz_sqrt(den.get_mpz_t(), p.get_den_mpz_t());
    out = Rational(num, den);
    out.canonicalize();
    return true;
}

Feasibility check_program(const GeomProgram& p, const WeightScheme& q) {
    Feasibility res;
    if (q.n != p.n) {
        res.problem = "scheme arity " + std::to_string(q.n) + " differs from " + std::to_string(p.n);
        return res;
    }
    if (q.q.size() != q.inputs.size() * static_cast<std::size_t>(q.n)) {
        res.problem = "scheme has " + std::to_string(q.q.size()) + " weights for " + std::to_string(q.inputs.size()) +
                      " inputs";
        return res;
    }
    for (const Rational& w : q.q)
        if (w < 0) {
            res.problem = "negative weight " + to_exact_string(w);
            return res;
        }
    std::vector<int> pos(p.inputs.size());
    for (std::size_t k = 0; k < p.inputs.size(); ++k) {
        pos[k] = q.position(p.inputs[k]);
        if (pos[k] < 0) {
            res.problem = "scheme has no weights for input " + bit_string(p.inputs[k], p.n);
            return res;
        }
    }
    const bool cadv = q.kind == WeightScheme::Kind::CAdv;
    Rational best_exact;
    double best = 0;
    for (const GeomPair& pr : p.pairs) {
        const int a = pos[static_cast<std::size_t>(pr.x)], b = pos[static_cast<std::size_t>(pr.y)];
        Rational exact = 0;
        Interval rest;
        bool inexact = false;
        for (int i : pr.indices) {
            const Rational& u = q.at(a, i);
            const Rational& v = q.at(b, i);
            if (cadv) {
                exact += std::min(u, v);
                continue;
            }
            Rational prod = u * v, root;
            if (exact_sqrt(prod, root)) {
                exact += root;
            } else {
                rest += Interval::from_rational(prod).sqrt();
                inexact = true;
            }
        }
        bool ok;
        double lhs;
        if (inexact) {
            Interval total = rest + Interval::from_rational(exact);
            ok = Interval(1).certainly_le(total);
            lhs = total.mid();
        } else {
            ok = exact >= 1;
            lhs = to_double(exact);
        }
        const Input x = p.inputs[static_cast<std::size_t>(pr.x)], y = p.inputs[static_cast<std::size_t>(pr.y)];
        bool tighter;
        if (!res.tightest)
            tighter = true;
        else if (!inexact && !res.tightest->lhs_exact.empty())
            tighter = exact < best_exact;
        else
            tighter = lhs < best;
        if (tighter) {
            best = lhs;
            best_exact = exact;
            res.tightest = PairCheck{x, y, lhs, inexact ? std::string() : to_exact_string(exact)};
        }
        if (!ok && !res.violation) res.violation = Feasibility::Violation{x, y, 1 - lhs};
    }
    res.ok = !res.violation;
    return res;
}

bool lex_less(Input a, Input b, int n) { return bit_string(a, n) < bit_string(b, n); }

}  // namespace

Feasibility check_feasible(const PartialFn& f, const WeightScheme& q) {
    return check_program(adversary_program(f, q.kind == WeightScheme::Kind::Adv1), q);
}

Feasibility check_feasible(const Relation& r, const WeightScheme& q) {
    return check_program(adversary_program(r, q.kind == WeightScheme::Kind::Adv1), q);
}

CfbsWitness cadv_to_cfbs_witness(const PartialFn& f, const WeightScheme& q) {
    if (q.kind != WeightScheme::Kind::CAdv) throw InputError("expected a classical adversary scheme");
    Feasibility feas = check_feasible(f, q);
    if (!feas.problem.empty()) throw InputError("malformed scheme: " + feas.problem);
    if (!feas.ok)
        throw InputError("scheme violates the pair (" + bit_string(feas.violation->x, f.arity()) + ", " +
                         bit_string(feas.violation->y, f.arity()) + ")");
    const int n = f.arity();
    const std::vector<Input> dom = f.domain();
    if (dom.empty()) throw InputError("function has an empty domain");
    CfbsWitness w;
    std::vector<int> labels(f.size());
    for (Input z = 0; z < f.size(); ++z) {
        Input chosen = dom.front();
        Rational best;
        bool first = true;
        for (Input zp : dom) {
            const int pos = q.position(zp);
            Rational cost = 0;
            for (int i = 0; i < n; ++i)
                if (((zp ^ z) >> i) & 1U) cost += q.at(pos, i);
            if (first || cost < best || (cost == best && lex_less(zp, chosen, n))) {
                best = cost;
                chosen = zp;
                first = false;
            }
        }
        w.nearest.push_back(chosen);
        labels[z] = f.bit(chosen);
    }
    w.completion = Completion{TruthTable(n, std::move(labels))};
    if (!w.completion.completes(f)) throw InternalError("nearest-point completion disagrees with f");
    w.value = 0;
    for (Input x : dom) {
        const int pos = q.position(x);
        CoverScheme c{x, std::vector<Rational>(static_cast<std::size_t>(n))};
        for (int i = 0; i < n; ++i) c.q[static_cast<std::size_t>(i)] = 2 * q.at(pos, i);
        if (!c.covers(sensitive_blocks(w.completion.total, x)))
            throw InternalError("doubled weights fail to cover a sensitive block at " + bit_string(x, n));
        w.value = std::max(w.value, c.total());
        w.covers.push_back(std::move(c));
    }
    return w;
}

std::vector<CoverScheme> optimal_covers(const PartialFn& f, const Completion& completion) {
    if (!completion.completes(f)) throw InputError("not a completion of f");
    std::vector<CoverScheme> out;
    for (Input x : f.domain()) out.push_back(fbs_at(completion.total, x).cover);
    return out;
}

CadvFromCovers cfbs_to_cadv_scheme(const PartialFn& f, const Completion& completion,
                                   const std::vector<CoverScheme>& covers) {
    const int n = f.arity();
    if (!completion.completes(f)) throw InputError("not a completion of f");
    const std::vector<Input> dom = f.domain();
    if (covers.size() != dom.size()) throw InputError("one cover is needed per domain input");
    CadvFromCovers out;
    for (WeightScheme* s : {&out.factor1, &out.factor2}) {
        s->kind = WeightScheme::Kind::CAdv;
        s->n = n;
        s->inputs = dom;
        s->q.assign(dom.size() * static_cast<std::size_t>(n), Rational(0));
    }
    for (std::size_t k = 0; k < dom.size(); ++k) {
        const CoverScheme& c = covers[k];
        if (c.x != dom[k]) throw InputError("cover " + std::to_string(k) + " is not for input " + bit_string(dom[k], n));
        if (c.q.size() != static_cast<std::size_t>(n)) throw InputError("cover has the wrong length");
        for (const Rational& v : c.q)
            if (v < 0) throw InputError("negative cover weight");
        for (Block b : sensitive_blocks(completion.total, c.x))
            if (!c.covers({b}))
                throw InputError("cover at " + bit_string(c.x, n) + " misses sensitive block " +
                                 bit_string(b.bits, n));
        for (int i = 0; i < n; ++i) {
            out.factor1.at(static_cast<int>(k), i) = c.q[static_cast<std::size_t>(i)];
            out.factor2.at(static_cast<int>(k), i) = 2 * c.q[static_cast<std::size_t>(i)];
        }
    }
    out.feasible1 = check_feasible(f, out.factor1);
    out.feasible2 = check_feasible(f, out.factor2);
    return out;
}

WeightScheme adv_to_cadv_scheme(const PartialFn& f, const WeightScheme& q, const Rational& A) {
    if (q.kind != WeightScheme::Kind::Adv) throw InputError("expected a positive adversary scheme");
    Feasibility feas = check_feasible(f, q);
    if (!feas.problem.empty()) throw InputError("malformed scheme: " + feas.problem);
    if (!feas.ok)
        throw InputError("scheme violates the pair (" + bit_string(feas.violation->x, f.arity()) + ", " +
                         bit_string(feas.violation->y, f.arity()) + ")");
    if (A < q.objective())
        throw InputError("A = " + to_exact_string(A) + " is below the objective " + to_exact_string(q.objective()));
    WeightScheme out = q;
    out.kind = WeightScheme::Kind::CAdv;
    for (Rational& v : out.q) v *= 2 * A;
    if (!check_feasible(f, out).ok) throw InternalError("scaled adversary scheme is not CAdv-feasible");
    return out;
}

nlohmann::json to_json(const WeightScheme& q) {
    nlohmann::json rows = nlohmann::json::array();
    for (int pos = 0; pos < static_cast<int>(q.inputs.size()); ++pos) {
        nlohmann::json r = nlohmann::json::array();
        for (int i = 0; i < q.n; ++i) r.push_back(to_exact_string(q.at(pos, i)));
        rows.push_back({{"x", bit_string(q.inputs[static_cast<std::size_t>(pos)], q.n)}, {"q", r}});
    }
    return {{"kind", to_string(q.kind)}, {"n", q.n}, {"objective", to_exact_string(q.objective())}, {"weights", rows}};
}

nlohmann::json to_json(const Feasibility& r) {
    nlohmann::json j{{"ok", r.ok}};
    if (!r.problem.empty()) j["problem"] = r.problem;
    if (r.violation) j["violation"] = {{"x", r.violation->x}, {"y", r.violation->y}, {"slack", r.violation->slack}};
    if (r.tightest) {
        j["tightest"] = {{"x", r.tightest->x}, {"y", r.tightest->y}, {"lhs", r.tightest->lhs}};
        if (!r.tightest->lhs_exact.empty()) j["tightest"]["lhs_exact"] = r.tightest->lhs_exact;
    }
    return j;
}

nlohmann::json to_json(const CfbsWitness& w, int n) {
    nlohmann::json covers = nlohmann::json::array();
    for (const CoverScheme& c : w.covers) {
        nlohmann::json q = nlohmann::json::array();
        for (const Rational& v : c.q) q.push_back(to_exact_string(v));
        covers.push_back({{"x", bit_string(c.x, n)}, {"q", q}});
    }
    nlohmann::json nearest = nlohmann::json::array();
    for (Input z : w.nearest) nearest.push_back(bit_string(z, n));
    std::string table;
    for (int v : w.completion.total.labels()) table += static_cast<char>('0' + v);
    return {{"completion", table}, {"nearest", nearest}, {"covers", covers},
            {"value", to_exact_string(w.value)}, {"tie_break", w.tie_break}};
}

}  // namespace advkit
