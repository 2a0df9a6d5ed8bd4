#pragma once

// Two-party gadgets G : X x Y -> {0,1}, versatility witnesses and block
// composition f o G. Composite inputs x = (x_1..x_n) are encoded as
// sum_i x_i |X|^(i-1), so copy 1 is the least significant digit.

#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "advkit/boolfn.hpp"
#include "json.hpp"

namespace advkit {

/// p[x] is the image of x.
using Permutation = std::vector<int>;

struct Gadget {
    int x_size = 0;
    int y_size = 0;
    std::vector<int> entries;  // row-major, entries[x * y_size + y]

    Gadget() = default;
    Gadget(int x_size, int y_size, std::vector<int> entries);

    int operator()(int x, int y) const {
        return entries[static_cast<std::size_t>(x) * static_cast<std::size_t>(y_size) + static_cast<std::size_t>(y)];
    }
    /// Pairs (x, y) with G(x, y) = value, row-major order.
    std::vector<std::pair<int, int>> preimage(int value) const;

    friend bool operator==(const Gadget&, const Gadget&) = default;
};

/// 1 iff x + y is 2 or 3 mod 4.
Gadget ver();

using Matrix2 = std::array<std::array<int, 2>, 2>;
inline constexpr Matrix2 kAndMatrix{{{0, 0}, {0, 1}}};
inline constexpr Matrix2 kOrMatrix{{{0, 1}, {1, 1}}};

struct SubfunctionMatch {
    std::array<int, 2> rows;  // rows[b] encodes Alice's bit b
    std::array<int, 2> cols;  // cols[b] encodes Bob's bit b
};

/// First row pair, then column pair (each ascending, lexicographic), then
/// encoding (unswapped first) whose submatrix is target.
std::optional<SubfunctionMatch> find_subfunction(const Gadget& g, const Matrix2& target);

struct FlipMap {
    Permutation sigma_a;
    Permutation sigma_b;
};

/// G(sigma_a x, sigma_b y) = 1 - G(x, y) everywhere. sigma_b runs over S_Y in
/// lexicographic order; sigma_a is then a perfect matching of rows onto
/// complemented permuted rows.
std::optional<FlipMap> flip_map(const Gadget& g);
bool is_flip_map(const Gadget& g, const FlipMap& m);

struct SelfReduction {
    struct Element {
        Permutation sigma_a;
        Permutation sigma_b;
        Rational probability;
    };
    std::vector<Element> support;
};

/// Checks probabilities, value preservation and exact uniformity of every image
/// distribution on G^-1(G(x,y)). On failure writes the reason to *why.
bool is_self_reduction(const Gadget& g, const SelfReduction& sr, std::string* why = nullptr);

/// Tries the cyclic shift family x -> x + r, y -> y - r, alone and composed with
/// one affine pair (x -> a x + b, y -> c y + e mod size); falls back to the uniform
/// distribution over all value-preserving permutation pairs when |X|, |Y| <= 4.
/// Requires |X|, |Y| <= 8.
std::optional<SelfReduction> self_reduction(const Gadget& g, std::string* diagnostics = nullptr);

struct Versatility {
    std::optional<FlipMap> flip;
    std::optional<SelfReduction> self_reduction;
    std::optional<SubfunctionMatch> and_embedding;
    std::optional<SubfunctionMatch> or_embedding;
    std::string diagnostics;

    bool versatile() const { return flip && self_reduction && and_embedding && or_embedding; }
};

Versatility check_versatility(const Gadget& g);

struct Sample {
    std::vector<int> x;
    std::vector<int> y;
    friend bool operator==(const Sample&, const Sample&) = default;
    friend bool operator<(const Sample& a, const Sample& b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); }
};

/// Lifts (a, b) to m gadget inputs with values G(a,b) xor s_i: randomness[i]
/// picks the self-reduction element applied at position i, and the flip map is
/// applied where s_i = 1. Each side only uses its own input.
Sample s_sample(const Gadget& g, const Versatility& v, const std::vector<int>& s, int a, int b,
                const std::vector<std::size_t>& randomness);

/// Probability of each output of s_sample over independent self-reduction draws.
std::vector<std::pair<Sample, Rational>> s_sample_distribution(const Gadget& g, const Versatility& v,
                                                               const std::vector<int>& s, int a, int b);

/// f o G as a matrix over X^n x Y^n. Each entry is the valid-label mask of the
/// inner string: a single bit for defined partial-function values, 0 outside Dom(f).
struct ComposedMatrix {
    int n = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t alphabet = 2;
    std::vector<std::uint32_t> valid;

    std::uint32_t mask(std::size_t x, std::size_t y) const { return valid[x * cols + y]; }
    /// The label when exactly one is valid, else -1.
    int at(std::size_t x, std::size_t y) const;
};

inline constexpr std::size_t kMaxComposedEntries = std::size_t{1} << 24;

ComposedMatrix compose(const PartialFn& f, const Gadget& g);
ComposedMatrix compose(const Relation& r, const Gadget& g);

/// Copy i of a composite index.
int digit(std::size_t index, int base, int i);
std::size_t compose_index(const std::vector<int>& digits, int base);

struct GadgetFamilyMember {
    int n = 0;
    Gadget gadget;  // Parity_n o VER
    Versatility versatility;
    /// Row and column indices embedding Parity_n o AND (inner product), row j for bit string j.
    std::vector<std::size_t> ip_rows;
    std::vector<std::size_t> ip_cols;
};

/// Parity_n o VER for n <= 3 with its versatility witnesses built from the
/// components and re-verified.
GadgetFamilyMember parity_family(int n);

nlohmann::json to_json(const Gadget& g);
Gadget gadget_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Versatility& v);

}  // namespace advkit
