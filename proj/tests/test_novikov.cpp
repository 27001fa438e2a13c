#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gzkit/novikov.hpp"
#include "gzkit/rational.hpp"

using gzkit::Complex;
using gzkit::NovikovScalar;
using gzkit::Rational;

namespace {
NovikovScalar mono(double re, double im, long long num, long long den) {
  return NovikovScalar::monomial(Complex(re, im), Rational(num, den));
}
}  // namespace

TEST_CASE("novikov canonical form merges and drops zeros") {
  NovikovScalar a = mono(1, 0, 1, 2) + mono(2, 0, 0, 1) + mono(-1, 0, 1, 2);
  CHECK(a.size() == 1);
  CHECK(a.terms()[0].exp == Rational(0));
  CHECK(a.terms()[0].coeff == Complex(2, 0));
  CHECK((a - a).is_zero());
}

TEST_CASE("novikov ring operations") {
  // (1 + T)(1 - T) = 1 - T^2
  NovikovScalar one = NovikovScalar::one();
  NovikovScalar t = mono(1, 0, 1, 1);
  NovikovScalar prod = (one + t) * (one - t);
  CHECK(prod == one - mono(1, 0, 2, 1));

  // Fractional exponents stay exact: T^{1/2} * T^{1/3} = T^{5/6}.
  CHECK(mono(1, 0, 1, 2) * mono(1, 0, 1, 3) == mono(1, 0, 5, 6));

  // Complex coefficients multiply as usual.
  NovikovScalar i = mono(0, 1, 0, 1);
  CHECK(i * i == mono(-1, 0, 0, 1));
}

TEST_CASE("novikov valuation and leading coefficient") {
  NovikovScalar a = mono(3, 0, 1, 2) + mono(-1, 0, 2, 1);
  CHECK(a.valuation() == Rational(1, 2));
  CHECK(a.leading_coeff() == Complex(3, 0));
  CHECK(a.valuation_real() == doctest::Approx(0.5));
  CHECK_THROWS_AS(NovikovScalar().valuation(), std::domain_error);
}

TEST_CASE("novikov inverse satisfies the truncation contract") {
  // a * inverse(a) - 1 must vanish up to T-order > cutoff.
  const Rational cutoff(10);
  NovikovScalar a = NovikovScalar::one() - mono(1, 0, 1, 1);
  NovikovScalar inv = a.inverse(cutoff);
  NovikovScalar err = a * inv - NovikovScalar::one();
  if (!err.is_zero()) CHECK(err.valuation() > cutoff);

  // Nonzero valuation and fractional steps.
  NovikovScalar b = mono(2, 0, -1, 2) + mono(1, 1, 1, 3);
  NovikovScalar binv = b.inverse(cutoff);
  NovikovScalar berr = b * binv - NovikovScalar::one();
  if (!berr.is_zero()) CHECK(berr.valuation() > cutoff);

  // A monomial inverts exactly.
  NovikovScalar m = mono(4, 0, 3, 2);
  CHECK(m.inverse(cutoff) == mono(0.25, 0, -3, 2));
  CHECK_THROWS_AS(NovikovScalar().inverse(cutoff), std::domain_error);
}

TEST_CASE("novikov rescale shifts exponents multiplicatively") {
  NovikovScalar a = mono(1, 0, 1, 1) + mono(2, 0, 1, 2);
  NovikovScalar r = a.rescaled(Rational(2));
  CHECK(r == mono(1, 0, 2, 1) + mono(2, 0, 1, 1));
}

TEST_CASE("novikov laurent detection") {
  CHECK((mono(1, 0, -2, 1) + mono(1, 0, 3, 1)).is_laurent());
  CHECK_FALSE((mono(1, 0, 1, 2)).is_laurent());
  CHECK(NovikovScalar().is_laurent());
}

TEST_CASE("novikov evaluation substitutes the formal variable") {
  // a = 2 - T + 3 T^{1/2} at T = 0.25: 2 - 0.25 + 3*0.5 = 3.25.
  NovikovScalar a = mono(2, 0, 0, 1) - mono(1, 0, 1, 1) + mono(3, 0, 1, 2);
  CHECK(a.eval(0.25).real() == doctest::Approx(3.25));
  CHECK(a.eval(0.25).imag() == doctest::Approx(0.0));
  CHECK_THROWS_AS(a.eval(0.0), std::invalid_argument);
  CHECK_THROWS_AS(a.eval(-1.0), std::invalid_argument);
}

TEST_CASE("novikov string round trip") {
  NovikovScalar a = mono(0.5, -1.25, -1, 2) + mono(3, 0, 7, 3);
  NovikovScalar b = NovikovScalar::parse(a.str());
  CHECK(a == b);
  CHECK(NovikovScalar::parse("0").is_zero());
  CHECK(NovikovScalar().str() == "0");
  CHECK_THROWS(NovikovScalar::parse("1,2 @ bogus"));
}

TEST_CASE("novikov cleaned prunes numerically tiny terms") {
  NovikovScalar a = mono(1, 0, 0, 1) + mono(1e-14, 0, 1, 1);
  CHECK(a.cleaned(1e-12) == NovikovScalar::one());
  CHECK(a.cleaned(1e-16) == a);
}
