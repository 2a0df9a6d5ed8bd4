#include "advkit/lp.hpp"

#include <algorithm>
#include <sstream>

namespace advkit {

int LinearProgram::add_variable(std::string name, const Rational& objective) {
    names_.push_back(std::move(name));
    objective_.push_back(objective);
    return static_cast<int>(names_.size()) - 1;
}

int LinearProgram::add_constraint(std::vector<LinearTerm> terms, Cmp cmp, const Rational& rhs, std::string name) {
    for (const LinearTerm& t : terms)
        if (t.var < 0 || static_cast<std::size_t>(t.var) >= names_.size())
            throw InputError("constraint references unknown variable " + std::to_string(t.var));
    // Merge repeated variables so the column representation stays canonical.
    std::sort(terms.begin(), terms.end(), [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
    std::vector<LinearTerm> merged;
    for (LinearTerm& t : terms) {
        if (!merged.empty() && merged.back().var == t.var)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const LinearTerm& t) { return t.coeff == 0; });
    if (name.empty()) name = "c" + std::to_string(constraints_.size());
    constraints_.push_back({std::move(merged), cmp, rhs, std::move(name)});
    return static_cast<int>(constraints_.size()) - 1;
}

void LinearProgram::set_objective(int var, const Rational& coeff) {
    if (var < 0 || static_cast<std::size_t>(var) >= names_.size()) throw InputError("unknown variable");
    objective_[static_cast<std::size_t>(var)] = coeff;
}

std::size_t LinearProgram::nonzeros() const {
    std::size_t nz = 0;
    for (const auto& c : constraints_) nz += c.terms.size();
    return nz;
}

std::string LinearProgram::to_lp_format() const {
    std::ostringstream os;
    auto term = [&](const Rational& c, const std::string& v, bool first) {
        if (c < 0)
            os << " - ";
        else
            os << (first ? " " : " + ");
        Rational a = abs(c);
        if (a != 1) os << a.get_d() << ' ';
        os << v;
    };
    os << (sense_ == Sense::Minimize ? "Minimize\n obj:" : "Maximize\n obj:");
    bool first = true;
    for (std::size_t v = 0; v < names_.size(); ++v)
        if (objective_[v] != 0) {
            term(objective_[v], names_[v], first);
            first = false;
        }
    if (first) os << " 0 " << (names_.empty() ? "x" : names_[0]);
    os << "\nSubject To\n";
    for (const auto& c : constraints_) {
        os << ' ' << c.name << ':';
        bool f = true;
        for (const auto& t : c.terms) {
            term(t.coeff, names_[static_cast<std::size_t>(t.var)], f);
            f = false;
        }
        if (f) os << " 0 " << (names_.empty() ? "x" : names_[0]);
        os << (c.cmp == Cmp::LessEq ? " <= " : c.cmp == Cmp::GreaterEq ? " >= " : " = ") << c.rhs.get_d() << '\n';
    }
    os << "End\n";
    return os.str();
}

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

namespace {

enum class ColumnKind { Original, Slack, Surplus, Artificial };

using SparseColumn = std::vector<std::pair<int, Rational>>;

class RevisedSimplex {
  public:
    RevisedSimplex(const LinearProgram& lp, const LpOptions& options) : lp_(lp), options_(options) {
        m_ = static_cast<int>(lp.num_constraints());
        const int n = static_cast<int>(lp.num_variables());
        cols_.resize(static_cast<std::size_t>(n));
        kind_.assign(static_cast<std::size_t>(n), ColumnKind::Original);
        b_.resize(static_cast<std::size_t>(m_));
        sign_.resize(static_cast<std::size_t>(m_));
        basis_.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            const LinearConstraint& c = lp.constraint(static_cast<std::size_t>(i));
            int s = c.rhs < 0 ? -1 : 1;
            sign_[static_cast<std::size_t>(i)] = s;
            b_[static_cast<std::size_t>(i)] = s * c.rhs;
            for (const LinearTerm& t : c.terms)
                cols_[static_cast<std::size_t>(t.var)].emplace_back(i, s * t.coeff);
            Cmp cmp = c.cmp;
            if (s < 0 && cmp != Cmp::Equal) cmp = cmp == Cmp::LessEq ? Cmp::GreaterEq : Cmp::LessEq;
            if (cmp == Cmp::LessEq) {
                basis_[static_cast<std::size_t>(i)] = add_column(ColumnKind::Slack, i, 1);
            } else {
                if (cmp == Cmp::GreaterEq) add_column(ColumnKind::Surplus, i, -1);
                basis_[static_cast<std::size_t>(i)] = add_column(ColumnKind::Artificial, i, 1);
            }
        }
        position_.assign(cols_.size(), -1);
        for (int i = 0; i < m_; ++i) position_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = i;
        binv_.assign(static_cast<std::size_t>(m_), std::vector<Rational>(static_cast<std::size_t>(m_)));
        for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
        xb_ = b_;
    }

    LpSolution solve() {
        LpSolution sol;
        const std::size_t ncols = cols_.size();
        std::vector<Rational> phase1(ncols);
        bool any_artificial = false;
        for (std::size_t j = 0; j < ncols; ++j)
            if (kind_[j] == ColumnKind::Artificial) {
                phase1[j] = 1;
                any_artificial = true;
            }
        if (any_artificial) {
            int ray_col = -1;
            run(phase1, true, ray_col);  // phase 1 is bounded below by 0
            Rational infeasibility = 0;
            for (int i = 0; i < m_; ++i)
                if (kind_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] == ColumnKind::Artificial)
                    infeasibility += xb_[static_cast<std::size_t>(i)];
            if (infeasibility > 0) {
                sol.status = LpStatus::Infeasible;
                sol.dual = original_duals(phase1);
                sol.iterations = iterations_;
                return sol;
            }
            drive_out_artificials();
        }
        std::vector<Rational> phase2(ncols);
        const bool maximize = lp_.sense() == Sense::Maximize;
        for (std::size_t v = 0; v < lp_.num_variables(); ++v)
            phase2[v] = maximize ? -lp_.objective(static_cast<int>(v)) : lp_.objective(static_cast<int>(v));
        int ray_col = -1;
        bool bounded = run(phase2, false, ray_col);
        sol.primal = original_primal();
        sol.iterations = iterations_;
        if (!bounded) {
            sol.status = LpStatus::Unbounded;
            sol.ray = original_ray(ray_col);
            return sol;
        }
        sol.status = LpStatus::Optimal;
        sol.value = objective_value(lp_, sol.primal);
        std::vector<Rational> y = original_duals(phase2);
        if (maximize)
            for (Rational& v : y) v = -v;
        sol.dual = std::move(y);
        return sol;
    }

  private:
    int add_column(ColumnKind kind, int row, int coeff) {
        cols_.push_back({{row, Rational(coeff)}});
        kind_.push_back(kind);
        return static_cast<int>(cols_.size()) - 1;
    }

    std::vector<Rational> simplex_multipliers(const std::vector<Rational>& cost) const {
        std::vector<Rational> y(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            const Rational& cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
            if (cb == 0) continue;
            const auto& row = binv_[static_cast<std::size_t>(i)];
            for (int k = 0; k < m_; ++k)
                if (row[static_cast<std::size_t>(k)] != 0) y[static_cast<std::size_t>(k)] += cb * row[static_cast<std::size_t>(k)];
        }
        return y;
    }

    std::vector<Rational> ftran(int j) const {
        std::vector<Rational> u(static_cast<std::size_t>(m_));
        for (const auto& [r, a] : cols_[static_cast<std::size_t>(j)])
            for (int i = 0; i < m_; ++i) {
                const Rational& e = binv_[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
                if (e != 0) u[static_cast<std::size_t>(i)] += e * a;
            }
        return u;
    }

    void pivot(int r, int j, const std::vector<Rational>& u) {
        auto& prow = binv_[static_cast<std::size_t>(r)];
        const Rational pu = u[static_cast<std::size_t>(r)];
        std::vector<int> nz;
        for (int k = 0; k < m_; ++k)
            if (prow[static_cast<std::size_t>(k)] != 0) {
                prow[static_cast<std::size_t>(k)] /= pu;
                nz.push_back(k);
            }
        xb_[static_cast<std::size_t>(r)] /= pu;
        for (int i = 0; i < m_; ++i) {
            if (i == r || u[static_cast<std::size_t>(i)] == 0) continue;
            const Rational f = u[static_cast<std::size_t>(i)];
            auto& row = binv_[static_cast<std::size_t>(i)];
            for (int k : nz) row[static_cast<std::size_t>(k)] -= f * prow[static_cast<std::size_t>(k)];
            xb_[static_cast<std::size_t>(i)] -= f * xb_[static_cast<std::size_t>(r)];
        }
        position_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = -1;
        basis_[static_cast<std::size_t>(r)] = j;
        position_[static_cast<std::size_t>(j)] = r;
        if (++iterations_ > options_.max_iterations)
            throw ResourceError("simplex iteration cap of " + std::to_string(options_.max_iterations) + " exceeded");
    }

    // Returns false when unbounded (ray_col set to the entering column).
    bool run(const std::vector<Rational>& cost, bool allow_artificial, int& ray_col) {
        bool bland = false;
        while (true) {
            std::vector<Rational> y = simplex_multipliers(cost);
            int enter = -1;
            Rational best = 0;
            for (std::size_t j = 0; j < cols_.size(); ++j) {
                if (position_[j] >= 0) continue;
                if (!allow_artificial && kind_[j] == ColumnKind::Artificial) continue;
                Rational d = cost[j];
                for (const auto& [r, a] : cols_[j]) d -= y[static_cast<std::size_t>(r)] * a;
                if (d < 0) {
                    if (bland) {
                        enter = static_cast<int>(j);
                        break;
                    }
                    if (enter < 0 || d < best) {
                        enter = static_cast<int>(j);
                        best = d;
                    }
                }
            }
            if (enter < 0) return true;
            std::vector<Rational> u = ftran(enter);
            int leave = -1;
            Rational theta;
            for (int i = 0; i < m_; ++i) {
                if (u[static_cast<std::size_t>(i)] <= 0) continue;
                Rational ratio = xb_[static_cast<std::size_t>(i)] / u[static_cast<std::size_t>(i)];
                if (leave < 0 || ratio < theta ||
                    (ratio == theta && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    theta = ratio;
                }
            }
            if (leave < 0) {
                ray_col = enter;
                ray_u_ = std::move(u);
                return false;
            }
            bland = theta == 0;
            pivot(leave, enter, u);
        }
    }

    void drive_out_artificials() {
        for (int r = 0; r < m_; ++r) {
            if (kind_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] != ColumnKind::Artificial) continue;
            for (std::size_t j = 0; j < cols_.size(); ++j) {
                if (position_[j] >= 0 || kind_[j] == ColumnKind::Artificial) continue;
                std::vector<Rational> u = ftran(static_cast<int>(j));
                if (u[static_cast<std::size_t>(r)] != 0) {
                    pivot(r, static_cast<int>(j), u);
                    break;
                }
            }
            // A row with no eligible pivot is redundant; its artificial stays at zero.
        }
    }

    std::vector<Rational> original_primal() const {
        std::vector<Rational> x(lp_.num_variables());
        for (int i = 0; i < m_; ++i) {
            std::size_t j = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
            if (j < x.size()) x[j] = xb_[static_cast<std::size_t>(i)];
        }
        return x;
    }

    std::vector<Rational> original_ray(int enter) const {
        std::vector<Rational> d(lp_.num_variables());
        if (static_cast<std::size_t>(enter) < d.size()) d[static_cast<std::size_t>(enter)] = 1;
        for (int i = 0; i < m_; ++i) {
            std::size_t j = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
            if (j < d.size()) d[j] = -ray_u_[static_cast<std::size_t>(i)];
        }
        return d;
    }

    std::vector<Rational> original_duals(const std::vector<Rational>& cost) const {
        std::vector<Rational> y = simplex_multipliers(cost);
        for (int i = 0; i < m_; ++i) y[static_cast<std::size_t>(i)] *= sign_[static_cast<std::size_t>(i)];
        return y;
    }

    const LinearProgram& lp_;
    const LpOptions& options_;
    int m_ = 0;
    std::vector<SparseColumn> cols_;
    std::vector<ColumnKind> kind_;
    std::vector<Rational> b_;
    std::vector<int> sign_;
    std::vector<int> basis_;
    std::vector<int> position_;
    std::vector<std::vector<Rational>> binv_;
    std::vector<Rational> xb_;
    std::vector<Rational> ray_u_;
    std::size_t iterations_ = 0;
};

Rational row_activity(const LinearConstraint& c, const std::vector<Rational>& x) {
    Rational s = 0;
    for (const LinearTerm& t : c.terms) s += t.coeff * x[static_cast<std::size_t>(t.var)];
    return s;
}

// A^T y restricted to the original columns.
std::vector<Rational> transpose_times(const LinearProgram& lp, const std::vector<Rational>& y) {
    std::vector<Rational> out(lp.num_variables());
    for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
        if (y[i] == 0) continue;
        for (const LinearTerm& t : lp.constraint(i).terms) out[static_cast<std::size_t>(t.var)] += t.coeff * y[i];
    }
    return out;
}

// Sign condition of a multiplier in the "minimize" convention, where a >= row
// carries y >= 0.
bool min_sign_ok(Cmp cmp, const Rational& y) {
    switch (cmp) {
        case Cmp::GreaterEq: return y >= 0;
        case Cmp::LessEq: return y <= 0;
        case Cmp::Equal: return true;
    }
    return false;
}

}  // namespace

LpSolution solve_lp_exact(const LinearProgram& lp, const LpOptions& options) {
    if (lp.nonzeros() > options.max_nonzeros)
        throw ResourceError("LP has " + std::to_string(lp.nonzeros()) + " nonzeros, cap is " +
                            std::to_string(options.max_nonzeros));
    RevisedSimplex simplex(lp, options);
    return simplex.solve();
}

bool verify_primal_feasible(const LinearProgram& lp, const std::vector<Rational>& x) {
    if (x.size() != lp.num_variables()) return false;
    for (const Rational& v : x)
        if (v < 0) return false;
    for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
        const LinearConstraint& c = lp.constraint(i);
        Rational a = row_activity(c, x);
        if (c.cmp == Cmp::LessEq && a > c.rhs) return false;
        if (c.cmp == Cmp::GreaterEq && a < c.rhs) return false;
        if (c.cmp == Cmp::Equal && a != c.rhs) return false;
    }
    return true;
}

Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& x) {
    Rational s = 0;
    for (std::size_t v = 0; v < lp.num_variables(); ++v) s += lp.objective(static_cast<int>(v)) * x[v];
    return s;
}

bool verify_dual_feasible(const LinearProgram& lp, const std::vector<Rational>& y) {
    if (y.size() != lp.num_constraints()) return false;
    const bool maximize = lp.sense() == Sense::Maximize;
    for (std::size_t i = 0; i < y.size(); ++i) {
        Rational yi = maximize ? Rational(-y[i]) : y[i];
        if (!min_sign_ok(lp.constraint(i).cmp, yi)) return false;
    }
    std::vector<Rational> aty = transpose_times(lp, y);
    for (std::size_t v = 0; v < lp.num_variables(); ++v) {
        const Rational& c = lp.objective(static_cast<int>(v));
        if (maximize ? aty[v] < c : aty[v] > c) return false;
    }
    return true;
}

Rational dual_objective(const LinearProgram& lp, const std::vector<Rational>& y) {
    Rational s = 0;
    for (std::size_t i = 0; i < lp.num_constraints(); ++i) s += lp.constraint(i).rhs * y[i];
    return s;
}

bool verify_farkas(const LinearProgram& lp, const std::vector<Rational>& y) {
    if (y.size() != lp.num_constraints()) return false;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!min_sign_ok(lp.constraint(i).cmp, y[i])) return false;
    for (const Rational& v : transpose_times(lp, y))
        if (v > 0) return false;
    return dual_objective(lp, y) > 0;
}

bool verify_unbounded_ray(const LinearProgram& lp, const std::vector<Rational>& ray) {
    if (ray.size() != lp.num_variables()) return false;
    for (const Rational& v : ray)
        if (v < 0) return false;
    for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
        const LinearConstraint& c = lp.constraint(i);
        Rational a = row_activity(c, ray);
        if (c.cmp == Cmp::LessEq && a > 0) return false;
        if (c.cmp == Cmp::GreaterEq && a < 0) return false;
        if (c.cmp == Cmp::Equal && a != 0) return false;
    }
    Rational gain = objective_value(lp, ray);
    return lp.sense() == Sense::Minimize ? gain < 0 : gain > 0;
}

bool verify_solution(const LinearProgram& lp, const LpSolution& sol) {
    switch (sol.status) {
        case LpStatus::Optimal:
            return verify_primal_feasible(lp, sol.primal) && verify_dual_feasible(lp, sol.dual) &&
                   objective_value(lp, sol.primal) == sol.value && dual_objective(lp, sol.dual) == sol.value;
        case LpStatus::Infeasible: return verify_farkas(lp, sol.dual);
        case LpStatus::Unbounded:
            return verify_primal_feasible(lp, sol.primal) && verify_unbounded_ray(lp, sol.ray);
    }
    return false;
}

}  // namespace advkit
