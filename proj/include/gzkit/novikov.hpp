#pragma once

#include <complex>
#include <string>
#include <vector>

#include "gzkit/rational.hpp"

namespace gzkit {

using Complex = std::complex<double>;

/// One term a*T^e of a Novikov scalar. The exponent is an exact rational in
/// units of the line energy lambda0 (the minimal projective-line area), so
/// T^{1} means T^{lambda0} in geometric units and T^{1/2} the half quantum.
struct NovikovTerm {
  Complex coeff;
  Rational exp;
};

/// Finite formal sum sum_j a_j T^{e_j} with complex coefficients and exact
/// rational exponents, kept in canonical form: exponents strictly increasing,
/// coefficients nonzero. These are elements of the universal Novikov field
/// restricted to finitely many terms, which is all the verification needs.
///
/// Sign convention: exponents count positive energy, so the classical
/// deformation parameter t of the literature corresponds to T^{-1} here
/// (t = T^{-lambda0}); see README "Conventions".
class NovikovScalar {
 public:
  NovikovScalar() = default;                     // zero
  NovikovScalar(double re) { init_const(Complex(re, 0.0)); }
  NovikovScalar(const Complex& c) { init_const(c); }

  static NovikovScalar monomial(const Complex& c, const Rational& e);
  static NovikovScalar one() { return NovikovScalar(1.0); }

  const std::vector<NovikovTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  friend NovikovScalar operator+(const NovikovScalar& a, const NovikovScalar& b);
  friend NovikovScalar operator-(const NovikovScalar& a, const NovikovScalar& b);
  friend NovikovScalar operator*(const NovikovScalar& a, const NovikovScalar& b);
  NovikovScalar operator-() const;
  NovikovScalar& operator+=(const NovikovScalar& b) { return *this = *this + b; }
  NovikovScalar& operator-=(const NovikovScalar& b) { return *this = *this - b; }
  NovikovScalar& operator*=(const NovikovScalar& b) { return *this = *this * b; }

  friend bool operator==(const NovikovScalar& a, const NovikovScalar& b);

  /// Least exponent (exact). Throws std::domain_error on zero input.
  Rational valuation() const;
  double valuation_real() const { return valuation().to_double(); }
  Complex leading_coeff() const;

  /// Truncated series inverse. Keeps every exponent e of the result with
  /// e <= -valuation() + cutoff, which is exactly what makes
  /// (a * inverse(a) - 1) have valuation > cutoff. Throws on zero input.
  NovikovScalar inverse(const Rational& cutoff = Rational(10)) const;

  /// Multiplies every exponent by a nonzero exact factor.
  NovikovScalar rescaled(const Rational& factor) const;

  /// True when all exponents are integers, i.e. the scalar lies in the
  /// Laurent subfield generated by T^{lambda0}.
  bool is_laurent() const;

  /// Substitutes T^{lambda0} -> x (x > 0): returns sum a_j x^{e_j}.
  Complex eval(double x) const;

  /// Drops terms with |coeff| <= eps. For numeric pipelines only; the exact
  /// operations above never discard nonzero coefficients.
  NovikovScalar cleaned(double eps) const;

  /// Serialization: terms "re,im @ num/den" joined by " + "; zero is "0".
  /// Coefficients are printed with enough digits to round-trip exactly.
  std::string str() const;
  static NovikovScalar parse(const std::string& text);

 private:
  void init_const(const Complex& c) {
    if (c != Complex(0.0, 0.0)) terms_.push_back({c, Rational(0)});
  }

  std::vector<NovikovTerm> terms_;
};

NovikovScalar operator*(const Complex& c, const NovikovScalar& a);
inline NovikovScalar operator*(double c, const NovikovScalar& a) {
  return Complex(c, 0.0) * a;
}

}  // namespace gzkit
