#include "doctest.h"

#include <map>

#include "advkit/gadgets.hpp"

using namespace advkit;

namespace {

Gadget from_fn(int xs, int ys, int (*fn)(int, int)) {
    std::vector<int> e;
    for (int x = 0; x < xs; ++x)
        for (int y = 0; y < ys; ++y) e.push_back(fn(x, y));
    return Gadget(xs, ys, e);
}

// Image distribution of a self-reduction from (x, y), as exact probabilities.
std::map<std::pair<int, int>, Rational> image(const SelfReduction& sr, int x, int y) {
    std::map<std::pair<int, int>, Rational> out;
    for (const auto& e : sr.support)
        out[{e.sigma_a[static_cast<std::size_t>(x)], e.sigma_b[static_cast<std::size_t>(y)]}] += e.probability;
    return out;
}

// The inputs (xs, ys) with G(x_i, y_i) = target_i for every i, enumerated directly.
std::vector<Sample> preimage_strings(const Gadget& g, const std::vector<int>& target) {
    std::vector<Sample> out{Sample{}};
    for (int t : target) {
        std::vector<Sample> next;
        for (const Sample& s : out)
            for (int x = 0; x < g.x_size; ++x)
                for (int y = 0; y < g.y_size; ++y)
                    if (g(x, y) == t) {
                        Sample u = s;
                        u.x.push_back(x);
                        u.y.push_back(y);
                        next.push_back(u);
                    }
        out = next;
    }
    return out;
}

}  // namespace

TEST_CASE("VER matrix") {
    Gadget v = ver();
    CHECK(v(0, 2) == 1);
    CHECK(v(0, 1) == 0);
    CHECK(v(2, 0) == 1);
    CHECK(v(2, 1) == 1);
    CHECK(v(2, 2) == 0);
    CHECK(v(2, 3) == 0);
    for (int a = 0; a < 4; ++a) {
        int row = 0, col = 0;
        for (int b = 0; b < 4; ++b) {
            row += v(a, b);
            col += v(b, a);
        }
        CHECK(row == 2);
        CHECK(col == 2);
    }
    CHECK(v.preimage(0).size() == 8);
    CHECK(v.preimage(1).size() == 8);
}

TEST_CASE("AND and OR submatrices") {
    auto a = find_subfunction(ver(), kAndMatrix);
    REQUIRE(a);
    CHECK(a->rows == std::array<int, 2>{0, 1});
    CHECK(a->cols == std::array<int, 2>{0, 1});
    auto o = find_subfunction(ver(), kOrMatrix);
    REQUIRE(o);
    CHECK(o->rows == std::array<int, 2>{0, 1});
    CHECK(o->cols == std::array<int, 2>{1, 2});
    CHECK_FALSE(find_subfunction(Gadget(3, 3, std::vector<int>(9, 0)), kAndMatrix));
}

TEST_CASE("flip maps") {
    auto f = flip_map(ver());
    REQUIRE(f);
    CHECK(f->sigma_a == Permutation{2, 3, 0, 1});
    CHECK(f->sigma_b == Permutation{0, 1, 2, 3});
    Gadget v = ver();
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) CHECK(v(f->sigma_a[x], f->sigma_b[y]) == 1 - v(x, y));
    CHECK_FALSE(flip_map(Gadget(2, 2, {0, 0, 0, 0})));
    auto x = flip_map(from_fn(2, 2, [](int a, int b) { return a ^ b; }));
    REQUIRE(x);
    CHECK(x->sigma_a == Permutation{1, 0});
    CHECK(x->sigma_b == Permutation{0, 1});
}

TEST_CASE("VER self-reduction has uniform images") {
    Gadget v = ver();
    auto sr = self_reduction(v);
    REQUIRE(sr);
    CHECK(is_self_reduction(v, *sr));
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            auto img = image(*sr, x, y);
            auto cls = v.preimage(v(x, y));
            CHECK(img.size() == 8);
            for (auto [a, b] : cls) CHECK(img[{a, b}] == Rational(1, 8));
        }
}

TEST_CASE("self-reduction on degenerate gadgets") {
    Gadget id = from_fn(2, 2, [](int a, int) { return a; });
    auto sr = self_reduction(id);
    REQUIRE(sr);
    for (const auto& e : sr->support) CHECK(e.sigma_a == Permutation{0, 1});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            auto img = image(*sr, x, y);
            CHECK(img[{x, 0}] == Rational(1, 2));
            CHECK(img[{x, 1}] == Rational(1, 2));
        }
    Gadget zero(2, 3, std::vector<int>(6, 0));
    auto z = self_reduction(zero);
    REQUIRE(z);
    CHECK(image(*z, 1, 2).size() == 6);

    // A gadget whose value classes cannot be mixed by permutation pairs.
    Gadget lopsided(3, 3, {1, 0, 0, 0, 0, 0, 0, 0, 0});
    std::string why;
    auto none = self_reduction(lopsided, &why);
    CHECK_FALSE(none);
    CHECK_FALSE(why.empty());

    SelfReduction bad{{{Permutation{0, 1}, Permutation{0, 1}, Rational(1, 2)}}};
    CHECK_FALSE(is_self_reduction(id, bad, &why));
    CHECK(why.find("sum") != std::string::npos);
}

TEST_CASE("versatility of VER") {
    Versatility v = check_versatility(ver());
    CHECK(v.versatile());
    nlohmann::json j = to_json(v);
    CHECK(j["versatile"] == true);
    CHECK(j["self_reduction"].size() == v.self_reduction->support.size());
}

TEST_CASE("s-sampling is uniform on the requested preimage") {
    Gadget g = ver();
    Versatility v = check_versatility(g);
    for (int m = 1; m <= 2; ++m)
        for (std::uint32_t s = 0; s < (1U << m); ++s) {
            std::vector<int> bits(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) bits[static_cast<std::size_t>(i)] = (s >> i) & 1U;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    std::vector<int> target = bits;
                    if (g(a, b))
                        for (int& t : target) t ^= 1;
                    auto want = preimage_strings(g, target);
                    auto dist = s_sample_distribution(g, v, bits, a, b);
                    REQUIRE(dist.size() == want.size());
                    std::map<Sample, Rational> got(dist.begin(), dist.end());
                    Rational total = 0;
                    for (const Sample& w : want) {
                        CHECK(got[w] == Rational(1, static_cast<unsigned long>(want.size())));
                        total += got[w];
                    }
                    CHECK(total == 1);
                }
        }
    CHECK(s_sample(g, v, {0}, 0, 0, {0}).x.size() == 1);
    CHECK_THROWS_AS(s_sample(g, Versatility{}, {0}, 0, 0, {0}), InputError);
    CHECK_THROWS_AS(s_sample(g, v, {0, 1}, 0, 0, {0}), InputError);
}

TEST_CASE("block composition") {
    ComposedMatrix c = compose(identity_fn(), ver());
    CHECK(c.rows == 4);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) CHECK(c.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) == ver()(x, y));
    ComposedMatrix x2 = compose(parity_fn(2), ver());
    CHECK(x2.rows == 16);
    CHECK(x2.cols == 16);
    CHECK(x2.at(compose_index({0, 0}, 4), compose_index({2, 2}, 4)) == 0);
    CHECK(x2.at(compose_index({0, 0}, 4), compose_index({2, 0}, 4)) == 1);

    // Restricting to the AND embedding reproduces f o AND.
    auto emb = find_subfunction(ver(), kAndMatrix);
    for (const PartialFn& f : {or_fn(2), and_fn(2), promise_or_fn(2), parity_fn(2)}) {
        ComposedMatrix m = compose(f, ver());
        for (Input a = 0; a < 4; ++a)
            for (Input b = 0; b < 4; ++b) {
                std::size_t r = compose_index({emb->rows[a & 1U], emb->rows[(a >> 1) & 1U]}, 4);
                std::size_t col = compose_index({emb->cols[b & 1U], emb->cols[(b >> 1) & 1U]}, 4);
                Input z = a & b;
                int want = f.in_domain(z) ? f.bit(z) : -1;
                CHECK(m.at(r, col) == want);
                if (!f.in_domain(z)) CHECK(m.mask(r, col) == 0);
            }
    }
    Relation rel(1, {"a", "b", "c"}, {1, 6});
    ComposedMatrix rm = compose(rel, ver());
    CHECK(rm.alphabet == 3);
    CHECK(rm.at(0, 0) == 0);
    CHECK(rm.mask(0, 2) == 6);
    CHECK(rm.at(0, 2) == -1);
    CHECK_THROWS_AS(compose(parity_fn(7), ver()), ResourceError);
}

TEST_CASE("parity gadget family") {
    GadgetFamilyMember g1 = parity_family(1);
    CHECK(g1.gadget == ver());
    GadgetFamilyMember g2 = parity_family(2);
    CHECK(g2.gadget.x_size == 16);
    CHECK(g2.versatility.versatile());
    CHECK(is_self_reduction(g2.gadget, *g2.versatility.self_reduction));
    // Flip gives the complement matrix.
    const FlipMap& f = *g2.versatility.flip;
    for (int x = 0; x < 16; ++x)
        for (int y = 0; y < 16; ++y)
            CHECK(g2.gadget(f.sigma_a[static_cast<std::size_t>(x)], f.sigma_b[static_cast<std::size_t>(y)]) ==
                  1 - g2.gadget(x, y));
    // IP_2 submatrix.
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            CHECK(g2.gadget(static_cast<int>(g2.ip_rows[static_cast<std::size_t>(a)]),
                            static_cast<int>(g2.ip_cols[static_cast<std::size_t>(b)])) == popcount(a & b) % 2);
    CHECK_THROWS_AS(parity_family(4), ResourceError);
}

TEST_CASE("gadget JSON") {
    nlohmann::json j = to_json(ver());
    CHECK(j["rows"][2] == "1100");
    CHECK(gadget_from_json(j) == ver());
    CHECK_THROWS_AS(gadget_from_json(nlohmann::json::parse(R"({"X_size":2,"Y_size":2,"rows":["01"]})")), InputError);
    CHECK_THROWS_AS(gadget_from_json(nlohmann::json::parse(R"({"X_size":1,"Y_size":2,"rows":["02"]})")), InputError);
}
