#pragma once

// Boolean functions, partial functions and relations on {0,1}^n, stored as
// dense truth tables. An input x is an integer whose bit i-1 holds x_i, so
// enumeration orders everywhere follow the integer encoding.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advkit/core.hpp"

namespace advkit {

using Input = std::uint32_t;

inline constexpr int kMaxArity = 16;

/// A nonempty set of coordinates, bit i-1 for coordinate i.
struct Block {
    std::uint32_t bits = 0;

    bool contains(int coordinate) const { return (bits >> coordinate) & 1U; }
    int size() const { return popcount(bits); }
    bool disjoint(Block other) const { return (bits & other.bits) == 0; }
    bool subset_of(Block other) const { return (bits & ~other.bits) == 0; }
    /// 1-based coordinates, ascending.
    std::vector<int> coordinates() const;

    friend bool operator==(Block a, Block b) { return a.bits == b.bits; }
    friend bool operator<(Block a, Block b) { return a.bits < b.bits; }
};

/// Builds a block from 1-based coordinates.
Block make_block(std::initializer_list<int> coordinates);

/// x with the coordinates of B flipped. Throws InputError if B reaches past n.
Input flip_block(Input x, Block block, int n);

/// Renders x as "x_1 x_2 ... x_n", e.g. 3 on n=3 is "110".
std::string bit_string(Input x, int n);
Input parse_bit_string(std::string_view bits);

/// Total table over {0,1}^n with integer labels; -1 marks an undefined point.
/// Partial functions use labels {0,1}; relation completions use symbol indices.
class TruthTable {
  public:
    static constexpr int kUndefined = -1;

    TruthTable() = default;
    TruthTable(int n, std::vector<int> labels);

    int arity() const { return n_; }
    std::size_t size() const { return labels_.size(); }
    int operator()(Input x) const { return labels_[x]; }
    bool defined(Input x) const { return labels_[x] != kUndefined; }
    const std::vector<int>& labels() const { return labels_; }

    friend bool operator==(const TruthTable&, const TruthTable&) = default;

  private:
    int n_ = 0;
    std::vector<int> labels_;
};

enum class Value : std::int8_t { Zero = 0, One = 1, Undefined = -1 };

class PartialFn {
  public:
    /// Throws InputError unless n in [1,16], |table| = 2^n and Dom is nonempty.
    PartialFn(int n, std::vector<Value> table);

    int arity() const { return table_.arity(); }
    std::size_t size() const { return table_.size(); }
    Value operator()(Input x) const { return static_cast<Value>(table_(x)); }
    int bit(Input x) const { return table_(x); }
    bool in_domain(Input x) const { return table_.defined(x); }
    bool is_total() const;
    bool is_constant() const;
    std::vector<Input> domain() const;
    const TruthTable& table() const { return table_; }

    friend bool operator==(const PartialFn&, const PartialFn&) = default;

  private:
    TruthTable table_;
};

/// A relation f ⊆ {0,1}^n × Σ stored as the map x -> f(x) ⊆ Σ (bitmask, |Σ| ≤ 32).
class Relation {
  public:
    Relation(int n, std::vector<std::string> alphabet, std::vector<std::uint32_t> valid);

    int arity() const { return n_; }
    std::size_t size() const { return valid_.size(); }
    std::size_t alphabet_size() const { return alphabet_.size(); }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    std::uint32_t valid(Input x) const { return valid_[x]; }
    bool critical(Input x) const { return popcount(valid_[x]) == 1; }
    /// f(x) ∩ f(y) = ∅.
    bool disjoint(Input x, Input y) const { return (valid_[x] & valid_[y]) == 0; }

    friend bool operator==(const Relation&, const Relation&) = default;

  private:
    int n_;
    std::vector<std::string> alphabet_;
    std::vector<std::uint32_t> valid_;
};

/// A total choice of one valid label per input. For a partial function base the
/// labels are bits; for a relation they index the alphabet.
struct Completion {
    TruthTable total;

    bool completes(const PartialFn& f) const;
    bool completes(const Relation& r) const;
};

/// Blocks B with x^B in the domain and a different label. Ordered by the
/// integer encoding of the characteristic vector. Throws DomainError if x is undefined.
std::vector<Block> sensitive_blocks(const TruthTable& table, Input x);
std::vector<Block> sensitive_blocks(const PartialFn& f, Input x);

/// Inclusion-minimal sensitive blocks, same order.
std::vector<Block> minimal_sensitive_blocks(const TruthTable& table, Input x);
std::vector<Block> minimal_sensitive_blocks(const PartialFn& f, Input x);

std::vector<Input> critical_inputs(const Relation& r);

/// x -> {f(x)} on Dom(f), x -> {0,1} elsewhere; alphabet {"0","1"}.
Relation to_relation(const PartialFn& f);

/// Enumerates every completion exactly once. Free inputs (non-critical ones)
/// are ordered by integer value, the smallest varying fastest; choices run in
/// ascending symbol order.
class CompletionEnumerator {
  public:
    static constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 20;

    /// Throws ResourceError naming the count when it exceeds the cap.
    explicit CompletionEnumerator(const Relation& r, std::uint64_t cap = kDefaultCap);
    explicit CompletionEnumerator(const PartialFn& f, std::uint64_t cap = kDefaultCap);

    std::uint64_t count() const { return count_; }
    const std::vector<Input>& free_inputs() const { return free_; }
    const std::vector<std::vector<int>>& choices() const { return choices_; }
    /// Labels shared by every completion; free inputs hold -1.
    const TruthTable& fixed() const { return fixed_; }

    std::optional<Completion> next();

  private:
    void init(const Relation& r, std::uint64_t cap);

    TruthTable fixed_;
    std::vector<Input> free_;
    std::vector<std::vector<int>> choices_;
    std::vector<std::size_t> cursor_;
    std::uint64_t count_ = 0;
    bool done_ = false;
};

std::uint64_t count_completions(const Relation& r);

// Standard functions used throughout the tests and the CLI.
PartialFn or_fn(int n);
PartialFn and_fn(int n);
PartialFn parity_fn(int n);
PartialFn majority_fn(int n);
PartialFn identity_fn();
/// Promise OR: defined on Hamming weight 0 and 1 only.
PartialFn promise_or_fn(int k);
/// Threshold: 1 iff |x| >= t.
PartialFn threshold_fn(int n, int t);

// Text format, one object per line:
//   n=<k>;table=<2^k entries from {0,1,*}>
//   n=<k>;sigma=<s1,s2,...>;valid={..},{..},...
std::string format_partial_fn(const PartialFn& f);
std::string format_relation(const Relation& r);
PartialFn parse_partial_fn(std::string_view line);
Relation parse_relation(std::string_view line);
bool is_relation_line(std::string_view line);

}  // namespace advkit
