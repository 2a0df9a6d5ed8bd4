#include "doctest.h"

#include <random>

#include "advkit/lp.hpp"

using namespace advkit;

TEST_CASE("two lower bounds") {
    LinearProgram lp;
    int q1 = lp.add_variable("q1", 1);
    int q2 = lp.add_variable("q2", 1);
    lp.add_constraint({{q1, 1}}, Cmp::GreaterEq, 1);
    lp.add_constraint({{q2, 1}}, Cmp::GreaterEq, 1);
    LpSolution s = solve_lp_exact(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == 2);
    CHECK(s.primal == std::vector<Rational>{1, 1});
    CHECK(verify_solution(lp, s));
}

TEST_CASE("infeasible system yields a Farkas certificate") {
    LinearProgram lp;
    int q = lp.add_variable("q", 0);
    lp.add_constraint({{q, 1}}, Cmp::LessEq, 0);
    lp.add_constraint({{q, 1}}, Cmp::GreaterEq, 1);
    LpSolution s = solve_lp_exact(lp);
    CHECK(s.status == LpStatus::Infeasible);
    CHECK(verify_farkas(lp, s.dual));
}

TEST_CASE("unbounded problem yields a ray") {
    LinearProgram lp(Sense::Maximize);
    int a = lp.add_variable("a", 1);
    int b = lp.add_variable("b", 0);
    lp.add_constraint({{a, 1}, {b, -1}}, Cmp::LessEq, 1);
    LpSolution s = solve_lp_exact(lp);
    CHECK(s.status == LpStatus::Unbounded);
    CHECK(verify_unbounded_ray(lp, s.ray));
}

TEST_CASE("maximization with equality and negative rhs") {
    // max 3x + 2y, x + y = 4, x - y >= -2, x <= 3.
    LinearProgram lp(Sense::Maximize);
    int x = lp.add_variable("x", 3);
    int y = lp.add_variable("y", 2);
    lp.add_constraint({{x, 1}, {y, 1}}, Cmp::Equal, 4);
    lp.add_constraint({{x, 1}, {y, -1}}, Cmp::GreaterEq, -2);
    lp.add_constraint({{x, 1}}, Cmp::LessEq, 3);
    LpSolution s = solve_lp_exact(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == 11);
    CHECK(verify_solution(lp, s));
}

TEST_CASE("redundant equalities keep a zero artificial") {
    LinearProgram lp;
    int x = lp.add_variable("x", 1);
    int y = lp.add_variable("y", 2);
    lp.add_constraint({{x, 1}, {y, 1}}, Cmp::Equal, 2);
    lp.add_constraint({{x, 2}, {y, 2}}, Cmp::Equal, 4);
    LpSolution s = solve_lp_exact(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == 2);
    CHECK(verify_solution(lp, s));
}

TEST_CASE("fractional optimum") {
    // Covering the edges of a triangle by vertices: optimum 3/2.
    LinearProgram lp;
    int a = lp.add_variable("a", 1), b = lp.add_variable("b", 1), c = lp.add_variable("c", 1);
    lp.add_constraint({{a, 1}, {b, 1}}, Cmp::GreaterEq, 1);
    lp.add_constraint({{b, 1}, {c, 1}}, Cmp::GreaterEq, 1);
    lp.add_constraint({{a, 1}, {c, 1}}, Cmp::GreaterEq, 1);
    LpSolution s = solve_lp_exact(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == Rational(3, 2));
    CHECK(verify_solution(lp, s));
}

TEST_CASE("size cap") {
    LinearProgram lp;
    int x = lp.add_variable("x", 1);
    for (int i = 0; i < 20; ++i) lp.add_constraint({{x, 1}}, Cmp::GreaterEq, i);
    LpOptions opt;
    opt.max_nonzeros = 10;
    CHECK_THROWS_AS(solve_lp_exact(lp, opt), ResourceError);
}

TEST_CASE("random small LPs: every result certifies itself") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-3, 3), pick(0, 2);
    int counts[3] = {0, 0, 0};
    for (int trial = 0; trial < 300; ++trial) {
        LinearProgram lp(trial % 2 ? Sense::Maximize : Sense::Minimize);
        int nv = 2 + trial % 3;
        for (int v = 0; v < nv; ++v) lp.add_variable("v" + std::to_string(v), coef(rng));
        int nc = 1 + trial % 4;
        for (int c = 0; c < nc; ++c) {
            std::vector<LinearTerm> terms;
            for (int v = 0; v < nv; ++v) terms.push_back({v, coef(rng)});
            Cmp cmp = pick(rng) == 0 ? Cmp::LessEq : pick(rng) == 1 ? Cmp::GreaterEq : Cmp::Equal;
            lp.add_constraint(terms, cmp, coef(rng));
        }
        LpSolution s = solve_lp_exact(lp);
        counts[static_cast<int>(s.status)]++;
        CHECK(verify_solution(lp, s));
    }
    CHECK(counts[0] > 0);
    CHECK(counts[1] > 0);
    CHECK(counts[2] > 0);
}

TEST_CASE("LP text dump") {
    LinearProgram lp;
    int x = lp.add_variable("x", 1);
    lp.add_constraint({{x, 2}}, Cmp::GreaterEq, 1, "lower");
    std::string txt = lp.to_lp_format();
    CHECK(txt.find("Minimize") != std::string::npos);
    CHECK(txt.find("lower: 2 x >= 1") != std::string::npos);
}
