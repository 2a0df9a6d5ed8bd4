#pragma once

// Weight-scheme transformations between the classical adversary, critical
// fractional block sensitivity and the positive adversary, each checked after
// construction.

#include <optional>
#include <string>
#include <vector>

#include "advkit/measures.hpp"
#include "json.hpp"

namespace advkit {

struct PairCheck {
    Input x = 0;
    Input y = 0;
    double lhs = 0;           // constraint sum at the pair (interval midpoint for Adv)
    std::string lhs_exact;    // exact rational when available
};

/// Feasibility of a weight scheme for its kind. Pairs are scanned in program
/// order; violation.slack is the shortfall 1 - lhs of the first failing pair.
struct Feasibility {
    bool ok = false;
    struct Violation {
        Input x = 0;
        Input y = 0;
        double slack = 0;
    };
    std::optional<Violation> violation;
    std::optional<PairCheck> tightest;  // pair with the smallest lhs
    std::string problem;                // structural issue (negative weight, wrong inputs)
};

/// Adv pairs are decided with outward-rounded intervals, except that square
/// roots of rational squares are taken exactly.
Feasibility check_feasible(const PartialFn& f, const WeightScheme& q);
Feasibility check_feasible(const Relation& r, const WeightScheme& q);

struct CfbsWitness {
    Completion completion;
    std::vector<Input> nearest;        // z' chosen for each z in {0,1}^n
    std::vector<CoverScheme> covers;  // one per x in Dom(f), q(i) = 2 q(x,i)
    Rational value;                    // max_x total cover weight
    std::string tie_break = "lexicographically smallest bit string";
};

/// Completes f by f'(z) = f(z'), z' in Dom(f) minimizing sum_{i: z'_i != z_i} q(z',i),
/// and checks every cover against every sensitive block of f'. Throws InputError
/// naming the violated pair if q is infeasible.
CfbsWitness cadv_to_cfbs_witness(const PartialFn& f, const WeightScheme& q);

/// Minimum covers at every x in Dom(f) for the completion f'.
std::vector<CoverScheme> optimal_covers(const PartialFn& f, const Completion& completion);

struct CadvFromCovers {
    WeightScheme factor1;  // q(x,i) = q_x(i)
    WeightScheme factor2;  // q(x,i) = 2 q_x(i)
    Feasibility feasible1;
    Feasibility feasible2;
};

/// Throws InputError naming the uncovered block if a cover is infeasible.
CadvFromCovers cfbs_to_cadv_scheme(const PartialFn& f, const Completion& completion,
                                   const std::vector<CoverScheme>& covers);

/// q'(x,i) = 2 A q(x,i). Throws InputError if q is not Adv-feasible or A is
/// below its objective; the result is checked for CAdv feasibility.
WeightScheme adv_to_cadv_scheme(const PartialFn& f, const WeightScheme& q, const Rational& A);

nlohmann::json to_json(const WeightScheme& q);
nlohmann::json to_json(const Feasibility& r);
nlohmann::json to_json(const CfbsWitness& w, int n);

}  // namespace advkit
