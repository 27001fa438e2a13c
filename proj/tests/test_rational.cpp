#include <doctest.h>

#include <stdexcept>

#include "gzkit/rational.hpp"

using gzkit::Rational;

TEST_CASE("rational normalization and arithmetic") {
  Rational a(2, 4);
  CHECK(a.num() == 1);
  CHECK(a.den() == 2);
  Rational b(-3, -6);
  CHECK(b == a);
  Rational c(3, -6);
  CHECK(c.num() == -1);
  CHECK(c.den() == 2);

  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(2, 3) / Rational(4, 3) == Rational(1, 2));
  CHECK(-Rational(1, 2) == Rational(-1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(7).is_integer());
  CHECK_FALSE(Rational(1, 2).is_integer());
}

TEST_CASE("rational lattice membership") {
  CHECK(Rational(3, 2).in_lattice(2));
  CHECK(Rational(3, 2).in_lattice(4));
  CHECK_FALSE(Rational(3, 2).in_lattice(3));
  CHECK(Rational(-5).in_lattice(1));
}

TEST_CASE("rational string round trip") {
  CHECK(Rational(3, 4).str() == "3/4");
  CHECK(Rational(-7).str() == "-7");
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK(Rational::parse("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS(Rational::parse("abc"));
}

TEST_CASE("rational rejects zero denominators and overflow") {
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  const Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("rational to_double") {
  CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
  CHECK(Rational(-1, 4).to_double() == doctest::Approx(-0.25));
}
