#pragma once

// Exact rational linear programming. Every variable is nonnegative; free
// quantities are split by the caller. Solutions carry primal and dual
// witnesses that the verify_* functions re-check by direct substitution.

#include <cstddef>
#include <string>
#include <vector>

#include "advkit/core.hpp"

namespace advkit {

enum class Sense { Minimize, Maximize };
enum class Cmp { LessEq, GreaterEq, Equal };

struct LinearTerm {
    int var;
    Rational coeff;
};

struct LinearConstraint {
    std::vector<LinearTerm> terms;
    Cmp cmp;
    Rational rhs;
    std::string name;
};

class LinearProgram {
  public:
    explicit LinearProgram(Sense sense = Sense::Minimize) : sense_(sense) {}

    int add_variable(std::string name, const Rational& objective = 0);
    int add_constraint(std::vector<LinearTerm> terms, Cmp cmp, const Rational& rhs, std::string name = {});
    void set_objective(int var, const Rational& coeff);

    Sense sense() const { return sense_; }
    std::size_t num_variables() const { return names_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }
    const std::string& variable_name(int v) const { return names_[static_cast<std::size_t>(v)]; }
    const Rational& objective(int v) const { return objective_[static_cast<std::size_t>(v)]; }
    const LinearConstraint& constraint(std::size_t i) const { return constraints_[i]; }
    std::size_t nonzeros() const;

    /// CPLEX-style LP text, for cross-checking with external solvers.
    std::string to_lp_format() const;

  private:
    Sense sense_;
    std::vector<std::string> names_;
    std::vector<Rational> objective_;
    std::vector<LinearConstraint> constraints_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational value;                 // optimum when Optimal
    std::vector<Rational> primal;   // per variable (Optimal, Unbounded: a feasible point)
    std::vector<Rational> dual;     // per constraint: optimal dual, or Farkas multipliers when Infeasible
    std::vector<Rational> ray;      // per variable, Unbounded only
    std::size_t iterations = 0;
};

struct LpOptions {
    std::size_t max_nonzeros = 50'000;
    std::size_t max_iterations = 1'000'000;
};

/// Two-phase revised simplex in exact arithmetic. Pricing is largest reduced
/// cost, switching to Bland's rule across degenerate pivots so it terminates.
/// Throws ResourceError past the size or iteration caps.
LpSolution solve_lp_exact(const LinearProgram& lp, const LpOptions& options = {});

// Independent checkers used on every solve result.

bool verify_primal_feasible(const LinearProgram& lp, const std::vector<Rational>& x);
Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& x);
/// Dual sign conditions, A^T y vs c, for the problem's sense.
bool verify_dual_feasible(const LinearProgram& lp, const std::vector<Rational>& y);
Rational dual_objective(const LinearProgram& lp, const std::vector<Rational>& y);
/// y certifies that no x >= 0 satisfies the constraints.
bool verify_farkas(const LinearProgram& lp, const std::vector<Rational>& y);
/// ray >= 0 keeps every constraint satisfied along x + t*ray and improves the objective.
bool verify_unbounded_ray(const LinearProgram& lp, const std::vector<Rational>& ray);
/// Full certificate check of a solver result in whichever status it reports.
bool verify_solution(const LinearProgram& lp, const LpSolution& sol);

}  // namespace advkit
