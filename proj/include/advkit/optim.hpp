#pragma once

// Certified solving for the LP-valued measures and for the geometric-mean
// weight programs
//
//   minimize  max_x sum_i q(x,i)
//   s.t.      sum_{i in S_xy} sqrt(q(x,i) q(y,i)) >= 1   for each listed pair
//
// The upper bound is an explicit rational scheme checked with outward-rounded
// arithmetic. The lower bound comes from a nonnegative matrix Gamma on the listed
// pairs: for any feasible q and any positive v,
//   v'Gv / v'v <= max_i ||G o D_i|| * max_x sum_i q(x,i),
// where D_i masks the pairs whose set contains i. Spectral norms are bounded from
// above by Collatz-Wielandt ratios, so the bound is exact rational arithmetic.

#include <string>
#include <vector>

#include "advkit/boolfn.hpp"
#include "advkit/lp.hpp"

namespace advkit {

struct CertifiedValue {
    Rational lower;
    Rational upper;
    std::vector<Rational> witness_primal;
    std::vector<Rational> witness_dual;
    std::string dual_description;
    bool gap_unmet = false;
};

/// Wraps an optimal exact LP solution; throws InternalError if it does not verify.
CertifiedValue certify(const LinearProgram& lp, const LpSolution& sol);

struct GeomPair {
    int x;                      // positions in GeomProgram::inputs
    int y;
    std::vector<int> indices;   // 0-based coordinates, nonempty
};

struct GeomProgram {
    int n = 0;
    std::vector<Input> inputs;
    std::vector<GeomPair> pairs;

    std::size_t num_weights() const { return inputs.size() * static_cast<std::size_t>(n); }
    /// Weight layout: q[pos * n + i].
    std::size_t weight_index(int pos, int i) const {
        return static_cast<std::size_t>(pos) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    }
};

/// Gamma per pair, v per input, and one positive test vector per coordinate.
struct SpectralCertificate {
    std::vector<Rational> gamma;
    std::vector<Rational> v;
    std::vector<std::vector<Rational>> u;
};

struct GeomOptions {
    double relative_gap = 1e-4;
    int max_rounds = 16;
    std::size_t max_weights = 64;
    /// Already-known certificates (e.g. from a sub-program) also tried for the lower bound.
    std::vector<SpectralCertificate> extra_certificates;
};

struct GeomResult {
    CertifiedValue value;
    SpectralCertificate certificate;
    int newton_steps = 0;
};

/// Rigorous lower bound implied by a certificate; 0 if the certificate is degenerate.
Rational spectral_lower_bound(const GeomProgram& program, const SpectralCertificate& cert);

/// True iff every pair constraint holds for q, decided with interval arithmetic.
bool geom_feasible(const GeomProgram& program, const std::vector<Rational>& q);

/// max_x sum_i q(x,i).
Rational geom_objective(const GeomProgram& program, const std::vector<Rational>& q);

/// Log-barrier interior point method, certified as described above.
/// Throws ResourceError past max_weights, InputError on malformed pairs.
GeomResult solve_geom_min(const GeomProgram& program, const GeomOptions& options = {});

}  // namespace advkit
