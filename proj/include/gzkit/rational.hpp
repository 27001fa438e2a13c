#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gzkit {

/// Exact rational on 64-bit integers with overflow checks.
///
/// Term exponents are rationals measured in units of the line energy, so
/// lattice questions ("is this exponent in (1/m)Z?") are decided exactly
/// instead of through floating-point comparisons.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long num, long long den = 1) : n_(num), d_(den) {
    if (d_ == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }

  long long num() const { return n_; }
  long long den() const { return d_; }
  bool is_zero() const { return n_ == 0; }
  bool is_integer() const { return d_ == 1; }

  /// True when the value lies in (1/m)Z.
  bool in_lattice(long long m) const { return m > 0 && m % d_ == 0; }

  double to_double() const {
    return static_cast<double>(n_) / static_cast<double>(d_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = i128(a.n_) * b.d_ + i128(b.n_) * a.d_;
    __int128 d = i128(a.d_) * b.d_;
    return make(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = i128(a.n_) * b.d_ - i128(b.n_) * a.d_;
    __int128 d = i128(a.d_) * b.d_;
    return make(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.n_) * b.n_, i128(a.d_) * b.d_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.n_ == 0) throw std::invalid_argument("Rational: division by zero");
    return make(i128(a.n_) * b.d_, i128(a.d_) * b.n_);
  }
  Rational operator-() const {
    Rational r;
    r.n_ = -n_;
    r.d_ = d_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.n_ == b.n_ && a.d_ == b.d_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 lhs = i128(a.n_) * b.d_;
    __int128 rhs = i128(b.n_) * a.d_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const {
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
  }

  /// Parses "n" or "n/d".
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(s));
      return Rational(std::stoll(s.substr(0, slash)),
                      std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("Rational: cannot parse '" + s + "'");
    }
  }

 private:
  static __int128 i128(long long v) { return static_cast<__int128>(v); }

  static Rational make(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim)
      throw std::overflow_error("Rational: 64-bit overflow");
    Rational r;
    r.n_ = static_cast<long long>(n);
    r.d_ = static_cast<long long>(d);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    if (d_ < 0) {
      n_ = -n_;
      d_ = -d_;
    }
    long long g = std::gcd(n_ < 0 ? -n_ : n_, d_);
    if (g > 1) {
      n_ /= g;
      d_ /= g;
    }
    if (d_ == 0) d_ = 1;  // n_ == 0 case
  }

  long long n_ = 0;
  long long d_ = 1;
};

inline long long lcm_ll(long long a, long long b) {
  return std::lcm(a, b);
}

}  // namespace gzkit
