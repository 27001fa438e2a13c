#include "gzkit/novikov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace gzkit {

namespace {

// Merge a term list that may contain duplicates/zeros into canonical form.
std::vector<NovikovTerm> canonicalize(std::vector<NovikovTerm> ts) {
  std::sort(ts.begin(), ts.end(), [](const NovikovTerm& a, const NovikovTerm& b) {
    return a.exp < b.exp;
  });
  std::vector<NovikovTerm> out;
  for (const auto& t : ts) {
    if (!out.empty() && out.back().exp == t.exp) {
      out.back().coeff += t.coeff;
      if (out.back().coeff == Complex(0.0, 0.0)) out.pop_back();
    } else if (t.coeff != Complex(0.0, 0.0)) {
      out.push_back(t);
    }
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

NovikovScalar NovikovScalar::monomial(const Complex& c, const Rational& e) {
  NovikovScalar s;
  if (c != Complex(0.0, 0.0)) s.terms_.push_back({c, e});
  return s;
}

NovikovScalar operator+(const NovikovScalar& a, const NovikovScalar& b) {
  // Linear merge of two sorted term lists.
  NovikovScalar out;
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    NovikovTerm t;
    if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->exp < ib->exp)) {
      t = *ia++;
    } else if (ia == a.terms_.end() || ib->exp < ia->exp) {
      t = *ib++;
    } else {
      t = {ia->coeff + ib->coeff, ia->exp};
      ++ia;
      ++ib;
    }
    if (t.coeff != Complex(0.0, 0.0)) out.terms_.push_back(t);
  }
  return out;
}

NovikovScalar NovikovScalar::operator-() const {
  NovikovScalar out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

NovikovScalar operator-(const NovikovScalar& a, const NovikovScalar& b) {
  return a + (-b);
}

NovikovScalar operator*(const NovikovScalar& a, const NovikovScalar& b) {
  std::vector<NovikovTerm> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_)
      prod.push_back({ta.coeff * tb.coeff, ta.exp + tb.exp});
  NovikovScalar out;
  out.terms_ = canonicalize(std::move(prod));
  return out;
}

NovikovScalar operator*(const Complex& c, const NovikovScalar& a) {
  NovikovScalar out;
  if (c == Complex(0.0, 0.0)) return out;
  out = NovikovScalar::monomial(c, Rational(0)) * a;
  return out;
}

bool operator==(const NovikovScalar& a, const NovikovScalar& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].coeff != b.terms_[i].coeff || !(a.terms_[i].exp == b.terms_[i].exp))
      return false;
  return true;
}

Rational NovikovScalar::valuation() const {
  if (terms_.empty()) throw std::domain_error("valuation of zero scalar");
  return terms_.front().exp;
}

Complex NovikovScalar::leading_coeff() const {
  if (terms_.empty()) throw std::domain_error("leading coefficient of zero scalar");
  return terms_.front().coeff;
}

NovikovScalar NovikovScalar::inverse(const Rational& cutoff) const {
  if (terms_.empty()) throw std::domain_error("inverse of zero scalar");
  const Rational m = terms_.front().exp;
  const Complex c0 = terms_.front().coeff;

  // a = c0 T^m (1 + u) with val(u) > 0; invert the unit by geometric series.
  NovikovScalar u;
  for (std::size_t i = 1; i < terms_.size(); ++i)
    u.terms_.push_back({terms_[i].coeff / c0, terms_[i].exp - m});

  const Rational keep = cutoff;  // exponent bound for (1+u)^{-1} before shifting by -m
  NovikovScalar series = NovikovScalar::one();
  if (!u.is_zero()) {
    const Rational delta = u.valuation();
    NovikovScalar power = NovikovScalar::one();
    // After k factors the valuation is at least k*delta, so the loop ends.
    for (Rational reach(0); reach <= keep;) {
      power = power * (-u);
      // Discard terms already past the cutoff to keep the series short.
      NovikovScalar trimmed;
      for (const auto& t : power.terms_)
        if (t.exp <= keep) trimmed.terms_.push_back(t);
      power = trimmed;
      if (power.is_zero()) break;
      series += power;
      reach = reach + delta;
    }
  }

  NovikovScalar out;
  for (const auto& t : series.terms_) {
    Rational e = t.exp - m;
    if (e <= cutoff - m)  // keep exponents <= -val(a) + cutoff
      out.terms_.push_back({t.coeff / c0, e});
  }
  out.terms_ = canonicalize(std::move(out.terms_));
  return out;
}

NovikovScalar NovikovScalar::rescaled(const Rational& factor) const {
  if (factor.is_zero()) throw std::invalid_argument("rescale by zero factor");
  NovikovScalar out = *this;
  for (auto& t : out.terms_) t.exp = t.exp * factor;
  out.terms_ = canonicalize(std::move(out.terms_));
  return out;
}

bool NovikovScalar::is_laurent() const {
  for (const auto& t : terms_)
    if (!t.exp.is_integer()) return false;
  return true;
}

Complex NovikovScalar::eval(double x) const {
  if (x <= 0.0) throw std::invalid_argument("eval requires x > 0");
  Complex acc(0.0, 0.0);
  for (const auto& t : terms_) acc += t.coeff * std::pow(x, t.exp.to_double());
  return acc;
}

NovikovScalar NovikovScalar::cleaned(double eps) const {
  NovikovScalar out;
  for (const auto& t : terms_)
    if (std::abs(t.coeff) > eps) out.terms_.push_back(t);
  return out;
}

std::string NovikovScalar::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) out += " + ";
    const auto& t = terms_[i];
    out += fmt_double(t.coeff.real()) + "," + fmt_double(t.coeff.imag());
    out += " @ " + t.exp.str();
    if (t.exp.is_integer()) out += "/1";
  }
  return out;
}

NovikovScalar NovikovScalar::parse(const std::string& text) {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("NovikovScalar: cannot parse '" + text + "': " + why);
  };
  // Trim.
  auto first = text.find_first_not_of(" \t");
  auto last = text.find_last_not_of(" \t");
  if (first == std::string::npos) fail("empty");
  std::string body = text.substr(first, last - first + 1);
  if (body == "0") return NovikovScalar();

  std::vector<NovikovTerm> ts;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t next = body.find(" + ", pos);
    std::string piece =
        next == std::string::npos ? body.substr(pos) : body.substr(pos, next - pos);
    std::size_t at = piece.find('@');
    if (at == std::string::npos) fail("missing '@' in term '" + piece + "'");
    std::string coeff = piece.substr(0, at);
    std::string expo = piece.substr(at + 1);
    std::size_t comma = coeff.find(',');
    if (comma == std::string::npos) fail("missing ',' in coefficient");
    try {
      double re = std::stod(coeff.substr(0, comma));
      double im = std::stod(coeff.substr(comma + 1));
      // Strip spaces around exponent.
      auto b = expo.find_first_not_of(" \t");
      auto e = expo.find_last_not_of(" \t");
      if (b == std::string::npos) fail("empty exponent");
      ts.push_back({Complex(re, im), Rational::parse(expo.substr(b, e - b + 1))});
    } catch (const std::logic_error& err) {
      fail(err.what());
    }
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  NovikovScalar out;
  out.terms_ = canonicalize(std::move(ts));
  return out;
}

}  // namespace gzkit
