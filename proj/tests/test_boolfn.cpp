#include "doctest.h"

#include <set>

#include "advkit/boolfn.hpp"

using namespace advkit;

namespace {

std::vector<std::uint32_t> bits_of(const std::vector<Block>& blocks) {
    std::vector<std::uint32_t> out;
    for (Block b : blocks) out.push_back(b.bits);
    return out;
}

PartialFn xor2() { return parity_fn(2); }

// Brute-force maximum packing over all sensitive blocks (not just minimal ones).
int brute_packing(const std::vector<Block>& blocks, std::size_t from, std::uint32_t used) {
    int best = 0;
    for (std::size_t i = from; i < blocks.size(); ++i)
        if ((blocks[i].bits & used) == 0) best = std::max(best, 1 + brute_packing(blocks, i + 1, used | blocks[i].bits));
    return best;
}

}  // namespace

TEST_CASE("flip_block examples") {
    CHECK(bit_string(flip_block(parse_bit_string("000"), make_block({1, 3}), 3), 3) == "101");
    CHECK(bit_string(flip_block(parse_bit_string("11"), make_block({1, 2}), 2), 2) == "00");
    CHECK_THROWS_AS(flip_block(0, make_block({3}), 2), InputError);
}

TEST_CASE("flip_block is an involution at Hamming distance |B|") {
    for (int n = 1; n <= 4; ++n)
        for (Input x = 0; x < (1U << n); ++x)
            for (std::uint32_t b = 1; b < (1U << n); ++b) {
                Input y = flip_block(x, Block{b}, n);
                CHECK(flip_block(y, Block{b}, n) == x);
                CHECK(popcount(x ^ y) == popcount(b));
            }
}

TEST_CASE("bit strings render x_1 first") {
    CHECK(bit_string(3, 3) == "110");
    CHECK(parse_bit_string("110") == 3);
    CHECK_THROWS_AS(parse_bit_string("1a"), InputError);
}

TEST_CASE("sensitive blocks") {
    CHECK(bits_of(sensitive_blocks(or_fn(2), 0)) == std::vector<std::uint32_t>{1, 2, 3});
    CHECK(bits_of(sensitive_blocks(and_fn(2), 0)) == std::vector<std::uint32_t>{3});
    CHECK(bits_of(sensitive_blocks(promise_or_fn(2), 0)) == std::vector<std::uint32_t>{1, 2});
    CHECK_THROWS_AS(sensitive_blocks(promise_or_fn(2), 3), DomainError);
}

TEST_CASE("minimal sensitive blocks") {
    CHECK(bits_of(minimal_sensitive_blocks(or_fn(2), 0)) == std::vector<std::uint32_t>{1, 2});
    CHECK(bits_of(minimal_sensitive_blocks(and_fn(2), 0)) == std::vector<std::uint32_t>{3});
    CHECK(bits_of(minimal_sensitive_blocks(xor2(), 0)) == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("packings over minimal blocks lose nothing, all total f on n <= 3") {
    for (int n = 1; n <= 3; ++n)
        for (std::uint32_t code = 0; code < (1U << (1U << n)); ++code) {
            std::vector<int> labels(1U << n);
            for (Input x = 0; x < labels.size(); ++x) labels[x] = (code >> x) & 1U;
            TruthTable t(n, labels);
            for (Input x = 0; x < labels.size(); ++x) {
                auto all = sensitive_blocks(t, x);
                auto min = minimal_sensitive_blocks(t, x);
                for (Block b : all) {
                    bool contains_minimal = false;
                    for (Block m : min) contains_minimal |= m.subset_of(b);
                    CHECK(contains_minimal);
                }
                CHECK(brute_packing(all, 0, 0) == brute_packing(min, 0, 0));
            }
        }
}

TEST_CASE("critical inputs") {
    auto crit = critical_inputs(to_relation(promise_or_fn(2)));
    CHECK(crit == std::vector<Input>{0, 1, 2});
    CHECK(critical_inputs(to_relation(and_fn(3))).size() == 8);
    Relation free(2, {"a", "b"}, {3, 3, 3, 3});
    CHECK(critical_inputs(free).empty());
}

TEST_CASE("critical inputs of an encoded partial function equal its domain, n <= 3") {
    for (int n = 1; n <= 3; ++n) {
        std::size_t size = 1U << n;
        std::size_t total = 1;
        for (std::size_t i = 0; i < size; ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<Value> table(size);
            std::size_t c = code;
            bool any = false;
            for (std::size_t i = 0; i < size; ++i, c /= 3) {
                int v = static_cast<int>(c % 3);
                table[i] = v == 2 ? Value::Undefined : static_cast<Value>(v);
                any |= v != 2;
            }
            if (!any) {
                CHECK_THROWS_AS(PartialFn(n, table), InputError);
                continue;
            }
            PartialFn f(n, table);
            CHECK(critical_inputs(to_relation(f)) == f.domain());
        }
    }
}

TEST_CASE("completions") {
    CHECK(count_completions(to_relation(promise_or_fn(2))) == 2);
    CHECK(count_completions(to_relation(majority_fn(3))) == 1);
    Relation two_free(2, {"a", "b", "c"}, {1, 3, 6, 4});
    CHECK(count_completions(two_free) == 4);

    CompletionEnumerator e(two_free);
    std::set<std::vector<int>> seen;
    while (auto c = e.next()) {
        CHECK(c->completes(two_free));
        seen.insert(c->total.labels());
    }
    CHECK(seen.size() == 4);

    CompletionEnumerator single(majority_fn(3));
    auto only = single.next();
    REQUIRE(only);
    CHECK(only->total == majority_fn(3).table());
    CHECK_FALSE(single.next());
}

TEST_CASE("completion cap names the count") {
    std::vector<std::uint32_t> valid(32, 3U);
    Relation wide(5, {"0", "1"}, valid);
    try {
        CompletionEnumerator e(wide, 1000);
        FAIL("expected ResourceError");
    } catch (const ResourceError& err) {
        CHECK(std::string(err.what()).find("4294967296") != std::string::npos);
    }
}

TEST_CASE("to_relation encodes undefined points as both labels") {
    Relation r = to_relation(promise_or_fn(2));
    CHECK(r.valid(3) == 3U);
    CHECK(r.valid(0) == 1U);
    CHECK(r.valid(1) == 2U);
    Relation a = to_relation(and_fn(2));
    for (Input x = 0; x < 4; ++x) CHECK(a.critical(x));
}

TEST_CASE("text format round trips and is strict") {
    PartialFn f = promise_or_fn(2);
    std::string line = format_partial_fn(f);
    CHECK(line == "n=2;table=0,1,1,*");
    CHECK(parse_partial_fn(line) == f);
    CHECK_THROWS_AS(parse_partial_fn("n=2;table=0,1,1"), InputError);
    CHECK_THROWS_AS(parse_partial_fn("n=2;table=0,1,2,1"), InputError);
    CHECK_THROWS_AS(parse_partial_fn("n=1;table=*,*"), InputError);

    Relation r(1, {"a", "b"}, {1, 3});
    std::string rl = format_relation(r);
    CHECK(is_relation_line(rl));
    CHECK_FALSE(is_relation_line(line));
    CHECK(parse_relation(rl) == r);
    CHECK_THROWS_AS(parse_relation("n=1;sigma=a,b;valid={a},{}"), InputError);
}

TEST_CASE("standard functions") {
    CHECK(or_fn(3).bit(0) == 0);
    CHECK(or_fn(3).bit(4) == 1);
    CHECK(and_fn(2).bit(3) == 1);
    CHECK(parity_fn(3).bit(7) == 1);
    CHECK(majority_fn(3).bit(3) == 1);
    CHECK(majority_fn(3).bit(4) == 0);
    CHECK(threshold_fn(3, 2) == majority_fn(3));
    CHECK(identity_fn().arity() == 1);
    CHECK_FALSE(promise_or_fn(3).in_domain(3));
    CHECK(promise_or_fn(3).domain().size() == 4);
}
