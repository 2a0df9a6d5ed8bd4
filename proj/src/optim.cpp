#include "advkit/optim.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "advkit/interval.hpp"

namespace advkit {

CertifiedValue certify(const LinearProgram& lp, const LpSolution& sol) {
    if (sol.status != LpStatus::Optimal) throw InternalError("certify needs an optimal LP solution");
    if (!verify_solution(lp, sol)) throw InternalError("LP solution failed independent verification");
    CertifiedValue cv;
    cv.lower = sol.value;
    cv.upper = sol.value;
    cv.witness_primal = sol.primal;
    cv.witness_dual = sol.dual;
    cv.dual_description = "lp dual";
    return cv;
}

namespace {

void validate(const GeomProgram& p) {
    if (p.n <= 0) throw InputError("geometric program needs n >= 1");
    const int m = static_cast<int>(p.inputs.size());
    for (const GeomPair& pr : p.pairs) {
        if (pr.x < 0 || pr.x >= m || pr.y < 0 || pr.y >= m || pr.x == pr.y)
            throw InputError("pair references invalid input positions");
        if (pr.indices.empty()) throw InputError("pair with empty index set");
        for (int i : pr.indices)
            if (i < 0 || i >= p.n) throw InputError("pair index out of range");
    }
}

Interval pair_sum(const GeomProgram& p, const GeomPair& pr, const std::vector<Rational>& q) {
    Interval g;
    for (int i : pr.indices) {
        Rational prod = q[p.weight_index(pr.x, i)] * q[p.weight_index(pr.y, i)];
        g += Interval::from_rational(prod).sqrt();
    }
    return g;
}

// Barrier for min s*t - sum log(t - sum_i q_x) - sum log(g_xy - 1) - sum log q.
class Barrier {
  public:
    explicit Barrier(const GeomProgram& p) : p_(p), var_of_(p.num_weights(), -1) {
        for (const GeomPair& pr : p.pairs)
            for (int i : pr.indices)
                for (int pos : {pr.x, pr.y}) {
                    std::size_t w = p.weight_index(pos, i);
                    if (var_of_[w] < 0) {
                        var_of_[w] = static_cast<int>(weight_of_.size());
                        weight_of_.push_back(w);
                    }
                }
        t_var_ = static_cast<int>(weight_of_.size());
    }

    int dim() const { return t_var_ + 1; }
    int t_var() const { return t_var_; }
    int var_of(std::size_t w) const { return var_of_[w]; }
    const std::vector<std::size_t>& weights() const { return weight_of_; }

    double q(const Eigen::VectorXd& z, int pos, int i) const {
        int v = var_of_[p_.weight_index(pos, i)];
        return v < 0 ? 0.0 : z[v];
    }

    double slack_row(const Eigen::VectorXd& z, int pos) const {
        double s = z[t_var_];
        for (int i = 0; i < p_.n; ++i) s -= q(z, pos, i);
        return s;
    }

    double pair_value(const Eigen::VectorXd& z, const GeomPair& pr) const {
        double g = 0;
        for (int i : pr.indices) g += std::sqrt(q(z, pr.x, i) * q(z, pr.y, i));
        return g;
    }

    bool feasible(const Eigen::VectorXd& z) const {
        for (int k = 0; k < t_var_; ++k)
            if (!(z[k] > 0)) return false;
        for (int pos = 0; pos < static_cast<int>(p_.inputs.size()); ++pos)
            if (!(slack_row(z, pos) > 0)) return false;
        for (const GeomPair& pr : p_.pairs)
            if (!(pair_value(z, pr) > 1)) return false;
        return true;
    }

    double value(const Eigen::VectorXd& z, double s) const {
        double phi = s * z[t_var_];
        for (int k = 0; k < t_var_; ++k) phi -= std::log(z[k]);
        for (int pos = 0; pos < static_cast<int>(p_.inputs.size()); ++pos) phi -= std::log(slack_row(z, pos));
        for (const GeomPair& pr : p_.pairs) phi -= std::log(pair_value(z, pr) - 1);
        return phi;
    }

    void derivatives(const Eigen::VectorXd& z, double s, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
        const int d = dim();
        grad.setZero(d);
        hess.setZero(d, d);
        grad[t_var_] = s;
        for (int k = 0; k < t_var_; ++k) {
            grad[k] -= 1 / z[k];
            hess(k, k) += 1 / (z[k] * z[k]);
        }
        for (int pos = 0; pos < static_cast<int>(p_.inputs.size()); ++pos) {
            double h = slack_row(z, pos);
            std::vector<int> vars{t_var_};
            std::vector<double> dh{1.0};
            for (int i = 0; i < p_.n; ++i) {
                int v = var_of_[p_.weight_index(pos, i)];
                if (v >= 0) {
                    vars.push_back(v);
                    dh.push_back(-1.0);
                }
            }
            for (std::size_t a = 0; a < vars.size(); ++a) {
                grad[vars[a]] -= dh[a] / h;
                for (std::size_t b = 0; b < vars.size(); ++b) hess(vars[a], vars[b]) += dh[a] * dh[b] / (h * h);
            }
        }
        for (const GeomPair& pr : p_.pairs) {
            double h = pair_value(z, pr) - 1;
            std::vector<int> vars;
            std::vector<double> dg;
            for (int i : pr.indices) {
                int vx = var_of_[p_.weight_index(pr.x, i)];
                int vy = var_of_[p_.weight_index(pr.y, i)];
                double a = z[vx], b = z[vy];
                double r = std::sqrt(a * b);
                vars.push_back(vx);
                dg.push_back(0.5 * std::sqrt(b / a));
                vars.push_back(vy);
                dg.push_back(0.5 * std::sqrt(a / b));
                // -log(h) contributes -grad^2 g / h; grad^2 of sqrt(ab):
                hess(vx, vx) -= (-0.25 * r / (a * a)) / h;
                hess(vy, vy) -= (-0.25 * r / (b * b)) / h;
                hess(vx, vy) -= (0.25 / r) / h;
                hess(vy, vx) -= (0.25 / r) / h;
            }
            for (std::size_t a = 0; a < vars.size(); ++a) {
                grad[vars[a]] -= dg[a] / h;
                for (std::size_t b = 0; b < vars.size(); ++b) hess(vars[a], vars[b]) += dg[a] * dg[b] / (h * h);
            }
        }
    }

  private:
    const GeomProgram& p_;
    std::vector<int> var_of_;
    std::vector<std::size_t> weight_of_;
    int t_var_ = 0;
};

// Centers z for the given s; returns the number of Newton steps taken.
int center(const Barrier& bar, Eigen::VectorXd& z, double s) {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    int steps = 0;
    for (; steps < 200; ++steps) {
        bar.derivatives(z, s, grad, hess);
        Eigen::VectorXd dz = hess.ldlt().solve(-grad);
        if (!dz.allFinite()) break;
        double decrement = -grad.dot(dz);
        if (decrement / 2 < 1e-12) break;
        double phi = bar.value(z, s);
        double alpha = 1;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls, alpha /= 2) {
            Eigen::VectorXd cand = z + alpha * dz;
            if (!bar.feasible(cand)) continue;
            if (bar.value(cand, s) <= phi - 0.25 * alpha * decrement) {
                z = cand;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    return steps;
}

Rational positive_rational(double v) {
    if (!(v > 0) || !std::isfinite(v)) v = 1e-300;
    return from_double(v);
}

// Scales the rounded scheme so every pair constraint provably holds.
std::vector<Rational> feasible_scheme(const GeomProgram& p, const Barrier& bar, const Eigen::VectorXd& z) {
    std::vector<Rational> q(p.num_weights());
    for (std::size_t w : bar.weights()) q[w] = positive_rational(z[bar.var_of(w)]);
    BigFloat gmin;
    bool first = true;
    for (const GeomPair& pr : p.pairs) {
        Interval g = pair_sum(p, pr, q);
        if (first || g.lo() < gmin) gmin = g.lo();
        first = false;
    }
    if (!(gmin > BigFloat(0))) throw InternalError("rounded adversary scheme has a zero pair sum");
    Rational c = from_double(1.0 / gmin.to_double());
    for (int attempt = 0; attempt < 200; ++attempt) {
        bool ok = true;
        Interval ci = Interval::from_rational(c);
        for (const GeomPair& pr : p.pairs) {
            Interval g = pair_sum(p, pr, q) * ci;
            if (g.lo() < BigFloat(1)) {
                ok = false;
                break;
            }
        }
        if (ok) break;
        c *= Rational(mpz_class((1UL << 40) + 1), mpz_class(1UL << 40));
    }
    for (Rational& v : q) v *= c;
    if (!geom_feasible(p, q)) throw InternalError("could not certify a feasible adversary scheme");
    return q;
}

SpectralCertificate dual_certificate(const GeomProgram& p, const Barrier& bar, const Eigen::VectorXd& z, double s) {
    SpectralCertificate cert;
    const int m = static_cast<int>(p.inputs.size());
    std::vector<double> v(static_cast<std::size_t>(m));
    for (int pos = 0; pos < m; ++pos) {
        double mu = 1 / (s * bar.slack_row(z, pos));
        v[static_cast<std::size_t>(pos)] = std::sqrt(mu);
        cert.v.push_back(positive_rational(v[static_cast<std::size_t>(pos)]));
    }
    for (const GeomPair& pr : p.pairs) {
        double lambda = 1 / (s * (bar.pair_value(z, pr) - 1));
        cert.gamma.push_back(positive_rational(
            lambda / (2 * v[static_cast<std::size_t>(pr.x)] * v[static_cast<std::size_t>(pr.y)])));
    }
    cert.u.assign(static_cast<std::size_t>(p.n), std::vector<Rational>(static_cast<std::size_t>(m), Rational(1)));
    for (int i = 0; i < p.n; ++i)
        for (int pos = 0; pos < m; ++pos) {
            double qv = bar.q(z, pos, i);
            if (qv > 0)
                cert.u[static_cast<std::size_t>(i)][static_cast<std::size_t>(pos)] =
                    positive_rational(std::sqrt(qv) * v[static_cast<std::size_t>(pos)]);
        }
    return cert;
}

}  // namespace

Rational geom_objective(const GeomProgram& p, const std::vector<Rational>& q) {
    Rational best = 0;
    for (int pos = 0; pos < static_cast<int>(p.inputs.size()); ++pos) {
        Rational row = 0;
        for (int i = 0; i < p.n; ++i) row += q[p.weight_index(pos, i)];
        best = std::max(best, row);
    }
    return best;
}

bool geom_feasible(const GeomProgram& p, const std::vector<Rational>& q) {
    if (q.size() != p.num_weights()) return false;
    for (const Rational& v : q)
        if (v < 0) return false;
    for (const GeomPair& pr : p.pairs)
        if (pair_sum(p, pr, q).lo() < BigFloat(1)) return false;
    return true;
}

Rational spectral_lower_bound(const GeomProgram& p, const SpectralCertificate& cert) {
    const std::size_t m = p.inputs.size();
    if (cert.v.size() != m || cert.gamma.size() != p.pairs.size() || cert.u.size() != static_cast<std::size_t>(p.n))
        return 0;
    Rational den = 0;
    for (const Rational& x : cert.v) {
        if (x < 0) return 0;
        den += x * x;
    }
    if (den == 0) return 0;
    Rational num = 0;
    for (std::size_t k = 0; k < p.pairs.size(); ++k) {
        if (cert.gamma[k] < 0) return 0;
        num += 2 * cert.gamma[k] * cert.v[static_cast<std::size_t>(p.pairs[k].x)] *
               cert.v[static_cast<std::size_t>(p.pairs[k].y)];
    }
    Rational norm_bound = 0;
    for (int i = 0; i < p.n; ++i) {
        const auto& u = cert.u[static_cast<std::size_t>(i)];
        if (u.size() != m) return 0;
        for (const Rational& x : u)
            if (x <= 0) return 0;
        std::vector<Rational> row(m);
        for (std::size_t k = 0; k < p.pairs.size(); ++k) {
            const GeomPair& pr = p.pairs[k];
            if (std::find(pr.indices.begin(), pr.indices.end(), i) == pr.indices.end()) continue;
            auto x = static_cast<std::size_t>(pr.x), y = static_cast<std::size_t>(pr.y);
            row[x] += cert.gamma[k] * u[y];
            row[y] += cert.gamma[k] * u[x];
        }
        for (std::size_t x = 0; x < m; ++x) norm_bound = std::max(norm_bound, Rational(row[x] / u[x]));
    }
    if (norm_bound == 0) return 0;
    return num / (den * norm_bound);
}

GeomResult solve_geom_min(const GeomProgram& p, const GeomOptions& options) {
    validate(p);
    if (p.num_weights() > options.max_weights)
        throw ResourceError("geometric program has " + std::to_string(p.num_weights()) + " weights, cap is " +
                            std::to_string(options.max_weights));
    GeomResult result;
    result.value.dual_description = "spectral";
    if (p.pairs.empty()) {
        result.value.witness_primal.assign(p.num_weights(), Rational(0));
        return result;
    }
    Barrier bar(p);
    Eigen::VectorXd z = Eigen::VectorXd::Constant(bar.dim(), 2.0);
    double tmax = 0;
    for (int pos = 0; pos < static_cast<int>(p.inputs.size()); ++pos) tmax = std::max(tmax, z[bar.t_var()] - bar.slack_row(z, pos));
    z[bar.t_var()] = tmax + 1;

    bool have = false;
    double s = 1;
    for (int round = 0; round < options.max_rounds; ++round, s *= 10) {
        result.newton_steps += center(bar, z, s);
        std::vector<Rational> q = feasible_scheme(p, bar, z);
        Rational upper = geom_objective(p, q);
        SpectralCertificate cert = dual_certificate(p, bar, z, s);
        Rational lower = spectral_lower_bound(p, cert);
        if (!have || upper < result.value.upper) {
            result.value.upper = upper;
            result.value.witness_primal = q;
        }
        if (!have || lower > result.value.lower) {
            result.value.lower = lower;
            result.certificate = cert;
            result.value.witness_dual = cert.gamma;
        }
        have = true;
        for (const SpectralCertificate& extra : options.extra_certificates) {
            Rational l = spectral_lower_bound(p, extra);
            if (l > result.value.lower) {
                result.value.lower = l;
                result.certificate = extra;
                result.value.witness_dual = extra.gamma;
            }
        }
        Rational gap = result.value.upper - result.value.lower;
        if (gap <= from_double(options.relative_gap) * result.value.upper) return result;
    }
    result.value.gap_unmet = true;
    return result;
}

}  // namespace advkit
