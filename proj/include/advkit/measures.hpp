#pragma once

// Query-complexity measures of partial functions and relations: the block
// sensitivity family, the adversary family and the degree family.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "advkit/boolfn.hpp"
#include "advkit/multipoly.hpp"
#include "advkit/optim.hpp"

namespace advkit {

inline constexpr int kMaxMeasureArity = 5;

/// Nonnegative weights q(x,i) on a list of inputs; q[pos * n + i], i 0-based.
struct WeightScheme {
    enum class Kind { Adv, CAdv, Adv1 };

    Kind kind = Kind::CAdv;
    int n = 0;
    std::vector<Input> inputs;
    std::vector<Rational> q;

    /// Position of x in inputs, or -1.
    int position(Input x) const;
    const Rational& at(int pos, int i) const {
        return q[static_cast<std::size_t>(pos) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
    }
    Rational& at(int pos, int i) {
        return q[static_cast<std::size_t>(pos) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
    }
    Rational row_sum(int pos) const;
    /// max_x sum_i q(x,i).
    Rational objective() const;
};

std::string to_string(WeightScheme::Kind kind);

struct BlockWeighting {
    Input x = 0;
    std::vector<std::pair<Block, Rational>> w;

    Rational total() const;
};

struct CoverScheme {
    Input x = 0;
    std::vector<Rational> q;  // per 0-based coordinate

    Rational total() const;
    /// sum_{i in B} q(i) >= 1 for every block.
    bool covers(const std::vector<Block>& blocks) const;
};

struct FbsResult {
    Rational value;
    BlockWeighting packing;
    CoverScheme cover;
};

// Labels of -1 in a TruthTable count as undefined, so the same routines serve
// partial functions, completions and partially assigned completions.

int bs_at(const TruthTable& table, Input x);
int bs_at(const PartialFn& f, Input x);
int bs(const PartialFn& f);

/// Fractional packing of the given blocks over n coordinates, with its dual cover.
FbsResult fbs_of_blocks(int n, const std::vector<Block>& blocks);
FbsResult fbs_at(const TruthTable& table, Input x);
FbsResult fbs_at(const PartialFn& f, Input x);
Rational fbs(const PartialFn& f);

template <class T>
struct CriticalResult {
    T value{};
    Completion completion;    // a minimizing completion
    std::optional<Input> argmax;  // critical input attaining the max, if any
    std::uint64_t completions = 0;  // search leaves evaluated
};

CriticalResult<int> cbs(const Relation& r);
CriticalResult<int> cbs(const PartialFn& f);
CriticalResult<Rational> cfbs(const Relation& r);
CriticalResult<Rational> cfbs(const PartialFn& f);

/// Inputs and constrained pairs of the adversary programs: Dom(f) with
/// f(x) != f(y), or all of {0,1}^n with disjoint valid sets for relations.
/// With singleton set, only pairs at Hamming distance 1 are kept.
GeomProgram adversary_program(const PartialFn& f, bool singleton = false);
GeomProgram adversary_program(const Relation& r, bool singleton = false);

struct CadvResult {
    Rational value;
    WeightScheme scheme;
    std::size_t lp_iterations = 0;
};

CadvResult cadv(const PartialFn& f);
CadvResult cadv(const Relation& r);
CadvResult cadv(const GeomProgram& program);

struct AdvResult {
    CertifiedValue value;
    WeightScheme scheme;  // the certified upper-bound witness
    SpectralCertificate certificate;
};

AdvResult adv(const PartialFn& f, const GeomOptions& options = {});
AdvResult adv(const Relation& r, const GeomOptions& options = {});
AdvResult adv1(const PartialFn& f, const GeomOptions& options = {});
AdvResult adv1(const Relation& r, const GeomOptions& options = {});

struct DegreeResult {
    int degree = 0;
    Rational eps;
    MultiPoly witness;
    /// Farkas multipliers proving degree - 1 infeasible (empty when degree is 0).
    std::vector<Rational> infeasibility;
};

/// The feasibility LP at degree d: p bounded in [0,1] on the cube and within
/// eps of f on Dom(f). Variables are pairs c+_S, c-_S per |S| <= d.
LinearProgram degree_lp(const PartialFn& f, int d, const Rational& eps);
/// Monomial masks in variable order of degree_lp (each appears twice, + then -).
std::vector<std::uint32_t> degree_lp_monomials(int n, int d);

DegreeResult exact_deg(const PartialFn& f);
/// Throws InputError unless 0 <= eps < 1/2.
DegreeResult approx_deg(const PartialFn& f, const Rational& eps);

}  // namespace advkit
