#include "doctest.h"

#include <cmath>

#include "advkit/interval.hpp"

using namespace advkit;

TEST_CASE("rational enclosure") {
    Interval third = Interval::from_rational(Rational(1, 3));
    CHECK(third.contains(Rational(1, 3)));
    CHECK(third.width() < 1e-70);
    CHECK_FALSE(third.contains(Rational(1, 3) + Rational(1, 1000000)));
}

TEST_CASE("arithmetic encloses exact results") {
    Interval a = Interval::from_rational(Rational(2, 7));
    Interval b = Interval::from_rational(Rational(-5, 3));
    CHECK((a + b).contains(Rational(2, 7) + Rational(-5, 3)));
    CHECK((a - b).contains(Rational(2, 7) - Rational(-5, 3)));
    CHECK((a * b).contains(Rational(2, 7) * Rational(-5, 3)));
    CHECK((a / b).contains(Rational(2, 7) / Rational(-5, 3)));
    CHECK_THROWS_AS(a / Interval(0), DomainError);
}

TEST_CASE("sqrt and log2") {
    Interval two(2);
    Interval s = two.sqrt();
    CHECK((s * s).contains(2));
    CHECK(std::abs(s.mid() - std::sqrt(2.0)) < 1e-15);
    CHECK(Interval(8).log2().contains(3));
    CHECK_THROWS_AS(Interval(-1).sqrt(), DomainError);
    CHECK_THROWS_AS(Interval(0).log2(), DomainError);
}

TEST_CASE("pi and cosines") {
    CHECK(Interval::pi().certainly_positive());
    CHECK(std::abs(Interval::pi().mid() - M_PI) < 1e-15);
    CHECK(Interval::cos_pi_fraction(1, 3).contains(Rational(1, 2)));
    CHECK(Interval::cos_pi_fraction(2, 3).contains(Rational(-1, 2)));
    CHECK(Interval::cos_pi_fraction(5, 3).contains(Rational(1, 2)));
    CHECK(Interval::cos_pi_fraction(0, 7).contains(1));
    CHECK(Interval::cos_pi_fraction(7, 7).contains(-1));
    CHECK(Interval::cos_pi_fraction(1, 2).contains(0));
    CHECK(std::abs(Interval::cos_pi_fraction(1, 5).mid() - std::cos(M_PI / 5)) < 1e-15);
    CHECK(Interval::cos_pi_fraction(1, 5).width() < 1e-70);
}

TEST_CASE("ordering predicates") {
    Interval a = Interval::from_rational(Rational(1, 3));
    Interval b = Interval::from_rational(Rational(1, 2));
    CHECK(a.certainly_lt(b));
    CHECK(a.certainly_le(b));
    CHECK_FALSE(b.certainly_le(a));
    CHECK(a.subset_of(a.hull(b)));
    CHECK(min(a, b).contains(Rational(1, 3)));
    CHECK(max(a, b).contains(Rational(1, 2)));
}
