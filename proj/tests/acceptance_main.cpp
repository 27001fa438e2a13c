// Acceptance gate: one self-contained check per release criterion, one
// printed line each, exit status = number of failed criteria. Skips (for
// optional ingested data) are announced but do not fail the gate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "gzkit/algebra.hpp"
#include "gzkit/flow.hpp"
#include "gzkit/geometry.hpp"
#include "gzkit/novikov.hpp"
#include "gzkit/spectral.hpp"
#include "gzkit/superpotential.hpp"

using namespace gzkit;

namespace {

int g_failures = 0;

void line(int id, const std::string& status, const std::string& text) {
  std::printf("criterion %02d  %-4s  %s\n", id, status.c_str(), text.c_str());
  std::fflush(stdout);
}

void pass(int id, const std::string& text) { line(id, "PASS", text); }
void fail(int id, const std::string& text) {
  ++g_failures;
  line(id, "FAIL", text);
}
void skip(int id, const std::string& text) { line(id, "SKIP", text); }

void run(int id, const std::string& what, bool (*body)(std::string&)) {
  std::string detail;
  try {
    if (body(detail)) pass(id, what + (detail.empty() ? "" : " [" + detail + "]"));
    else fail(id, what + (detail.empty() ? "" : " [" + detail + "]"));
  } catch (const std::exception& e) {
    fail(id, what + " [exception: " + e.what() + "]");
  }
}

bool elements_equal(const Element& a, const Element& b) {
  if (a.size() != b.size()) return false;
  for (size_t k = 0; k < a.size(); ++k)
    if (!(a[k] == b[k])) return false;
  return true;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool element_is_zero(const Element& a) {
  for (const NovikovScalar& s : a)
    if (!s.is_zero()) return false;
  return true;
}

/// Greedy multiset match: largest distance after pairing each wanted value
/// with the nearest unused computed one. Robust against the arbitrary
/// ordering of numerically equal eigenvalues.
double multiset_distance(std::vector<Complex> got,
                         const std::vector<Complex>& want) {
  if (got.size() != want.size()) return 1e18;
  double worst = 0;
  for (const Complex& w : want) {
    size_t best = got.size();
    double best_d = 1e18;
    for (size_t k = 0; k < got.size(); ++k) {
      double d = std::abs(got[k] - w);
      if (d < best_d) { best_d = d; best = k; }
    }
    worst = std::max(worst, best_d);
    got.erase(got.begin() + best);
  }
  return worst;
}

// --- criterion bodies ------------------------------------------------------

// 1: coarse idempotent identities, exact, n = 1..6.
bool c01(std::string&) {
  for (int n = 1; n <= 6; ++n) {
    AlgebraTable t = builtin_quadric_table(n);
    Element ep = coarse_idempotent(t, +1);
    Element em = coarse_idempotent(t, -1);
    if (!elements_equal(multiply(t, ep, ep), ep)) return false;
    if (!elements_equal(multiply(t, em, em), em)) return false;
    if (!element_is_zero(multiply(t, ep, em))) return false;
    if (!elements_equal(element_add(ep, em), t.unit_element())) return false;
  }
  return true;
}

// 2: fine idempotents for even n; the half-prefactor variant must fail.
bool c02(std::string&) {
  for (int n : {2, 4, 6}) {
    AlgebraTable t = builtin_quadric_table(n);
    Element em = coarse_idempotent(t, -1);
    Element f1 = fine_minus_idempotent(t, +1);
    Element f2 = fine_minus_idempotent(t, -1);
    if (!elements_equal(multiply(t, f1, f1), f1)) return false;
    if (!elements_equal(multiply(t, f2, f2), f2)) return false;
    if (!element_is_zero(multiply(t, f1, f2))) return false;
    if (!elements_equal(element_add(f1, f2), em)) return false;

    // Regression: with prefactor 1/2 instead of 1/4 the pair sums to
    // 1 - p T^{-1}, not to the negative coarse idempotent.
    int us = t.index_of("s"), up = t.index_of("p");
    auto half = [&](int sign) {
      Element g = t.zero_element();
      g[t.basis.unit_index] = NovikovScalar(0.5);
      g[us] = NovikovScalar::monomial(Complex(0.5 * sign, 0), Rational(-1, 2));
      g[up] = NovikovScalar::monomial(Complex(-0.5, 0), Rational(-1));
      return g;
    };
    Element g1 = half(+1), g2 = half(-1);
    if (elements_equal(element_add(g1, g2), em)) return false;  // must differ
    if (elements_equal(multiply(t, g1, g1), g1)) return false;  // not idempotent
  }
  return true;
}

// 3: c1 spectrum at T = 1: n simple nonzero eigenvalues plus the zero block.
bool c03(std::string& detail) {
  double worst = 0;
  for (int n = 2; n <= 6; ++n) {
    AlgebraTable t = builtin_quadric_table(n);
    std::vector<Complex> evs = c1_spectrum(t, 1.0);
    std::vector<Complex> want;
    double mod = n * std::pow(4.0, 1.0 / n);
    for (int i = 0; i < n; ++i)
      want.emplace_back(mod * std::cos(2 * M_PI * i / n),
                        mod * std::sin(2 * M_PI * i / n));
    int zero_mult = (n % 2 == 0) ? 2 : 1;
    for (int i = 0; i < zero_mult; ++i) want.emplace_back(0, 0);
    if (evs.size() != want.size()) return false;
    worst = std::max(worst, multiset_distance(evs, want));
    // Simplicity of the nonzero part: distinct roots of xi^n = 4.
    int zeros = 0;
    for (const Complex& e : evs)
      if (std::abs(e) < 1e-9) ++zeros;
    if (zeros != zero_mult) return false;
  }
  detail = "max eigenvalue deviation " + fmt(worst);
  return worst <= 1e-9;
}

// 4: potential critical points match the eigenvalues and the closed form.
bool c04(std::string& detail) {
  double worst_spec = 0, worst_coord = 0;
  for (int n = 2; n <= 6; ++n) {
    AlgebraTable t = builtin_quadric_table(n);
    std::vector<Complex> ref;
    for (const Complex& ev : c1_spectrum(t, 1.0))
      if (std::abs(ev) > 1e-9) ref.push_back(ev);
    SolveOptions opt;
    opt.starts = 200;
    opt.seed = 2026;
    std::vector<CriticalPoint> pts = find_critical_points(n, opt);
    if (pts.size() != static_cast<size_t>(n)) return false;
    for (const CriticalPoint& p : pts)
      if (!p.nondegenerate || p.hessian_min_singular < 1e-6) return false;
    worst_spec = std::max(worst_spec, spectrum_match_distance(pts, ref));

    // Closed form: for each root xi of xi^n = 4 the point
    // (1, xi^{-(n-1)}, ..., xi^{-1}) with value n xi.
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
      Complex xi = std::pow(4.0, 1.0 / n) *
                   Complex(std::cos(2 * M_PI * i / n), std::sin(2 * M_PI * i / n));
      int best = -1;
      double best_d = 1e18;
      for (int k = 0; k < n; ++k) {
        if (used[k]) continue;
        double d = std::abs(pts[k].value - Complex(n, 0) * xi);
        if (d < best_d) { best_d = d; best = k; }
      }
      if (best < 0 || best_d > 1e-9) return false;
      used[best] = true;
      const CriticalPoint& p = pts[best];
      if (p.z.size() != static_cast<size_t>(n)) return false;
      worst_coord = std::max(worst_coord, std::abs(p.z[0] - Complex(1, 0)));
      for (int k = 2; k <= n; ++k) {
        Complex want = std::pow(xi, -(n - k + 1.0));
        worst_coord = std::max(worst_coord, std::abs(p.z[k - 1] - want));
      }
    }
  }
  detail = "spectrum distance " + fmt(worst_spec) +
           ", coordinate distance " + fmt(worst_coord);
  return worst_spec <= 1e-8 && worst_coord <= 1e-9;
}

// 5: dual fibration evaluators agree on 1000 random points per n.
bool c05(std::string& detail) {
  GeometryConfig gc;
  double worst = 0;
  for (int n = 2; n <= 6; ++n) {
    Rng rng = Rng(42).stream(500 + n);
    for (int i = 0; i < 1000; ++i) {
      CVec z = random_quadric_point(n, rng, gc);
      std::vector<double> a = gz_closed(gc, z);
      std::vector<double> b = gz_matrix(gc, z);
      for (size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, std::abs(a[k] - b[k]));
    }
  }
  detail = "max disagreement " + fmt(worst);
  return worst <= 1e-10;
}

// 6: disc-bundle lift identities on 1000 random (w, zeta) per n.
bool c06(std::string& detail) {
  GeometryConfig gc;
  double worst_scale = 0, worst_top = 0, worst_constraint = 0;
  for (int n = 2; n <= 6; ++n) {
    Rng rng = Rng(42).stream(600 + n);
    for (int i = 0; i < 1000; ++i) {
      CVec w = random_quadric_point(n - 1, rng, gc);
      double rho = rng.uniform(0.01, 1.95);
      double phi = rng.uniform(0.0, 2 * M_PI);
      Complex zeta = std::sqrt(rho) * Complex(std::cos(phi), std::sin(phi));
      CVec z = biran_lift(w, zeta);
      PointResiduals res = quadric_residuals(z, gc);
      worst_constraint = std::max({worst_constraint, res.norm, res.quadric});
      std::vector<double> base = gz_closed(gc, w);
      std::vector<double> lifted = gz_closed(gc, z);
      double scale = 1.0 - rho / 2.0;
      for (size_t k = 0; k < base.size(); ++k)
        worst_scale = std::max(worst_scale,
                               std::abs(lifted[k] - scale * base[k]));
      worst_top = std::max(worst_top,
                           std::abs(lifted.back() - gc.lambda * scale));
    }
  }
  detail = "scale " + fmt(worst_scale) + ", top " +
           fmt(worst_top) + ", constraints " +
           fmt(worst_constraint);
  return worst_scale <= 1e-9 && worst_top <= 1e-10 &&
         worst_constraint <= 1e-12;
}

// 7: monotone-fibre samples sit on the equally spaced ladder.
bool c07(std::string& detail) {
  GeometryConfig gc;
  double worst = 0;
  for (int n = 2; n <= 6; ++n) {
    Rng rng = Rng(42).stream(700 + n);
    std::vector<double> target = monotone_fiber(n, gc);
    for (int i = 0; i < 200; ++i) {
      CVec z = sample_monotone_torus(n, rng);
      std::vector<double> v = gz_closed(gc, z);
      for (size_t k = 0; k < v.size(); ++k)
        worst = std::max(worst, std::abs(v[k] - target[k]));
    }
  }
  detail = "max level deviation " + fmt(worst);
  return worst <= 1e-8;
}

// 8: sphere sits on the zero level; certified gap at least 2/n.
bool c08(std::string& detail) {
  GeometryConfig gc;
  double worst_level = 0, worst_margin = 1e18;
  for (int n = 2; n <= 6; ++n) {
    Rng rng = Rng(42).stream(800 + n);
    for (int i = 0; i < 200; ++i) {
      CVec z = sample_vanishing_sphere(n, rng);
      for (double v : gz_closed(gc, z))
        worst_level = std::max(worst_level, std::abs(v));
    }
    Rng rng2 = Rng(42).stream(850 + n);
    DisjointnessReport rep = disjointness_gap(n, 1000, rng2, gc);
    if (!rep.pass) return false;
    worst_margin = std::min(worst_margin, rep.min_gap - (2.0 / n - 1e-8));
  }
  detail = "max sphere level " + fmt(worst_level) +
           ", min gap margin " + fmt(worst_margin);
  return worst_level <= 1e-10 && worst_margin >= 0;
}

// 9: degeneration flow, 100 starts per class for n = 2 and 3.
bool c09(std::string& detail) {
  for (int n = 2; n <= 3; ++n) {
    Rng rng = Rng(42).stream(900 + n);
    FlowConfig fc;  // defaults: s_end 0.99, tight tolerances
    std::vector<FlowTrace> traces;
    for (int i = 0; i < 100; ++i)
      traces.push_back(run_flow(sample_vanishing_sphere(n, rng), "sphere", fc));
    for (int i = 0; i < 100; ++i)
      traces.push_back(run_flow(sample_monotone_torus(n, rng), "torus", fc));
    FlowReport rep = analyze_traces(traces);
    if (!rep.pass) {
      detail = "n = " + std::to_string(n) + ": " +
               (rep.failures.empty() ? "verdict failed" : rep.failures.front());
      return false;
    }
    if (rep.sphere.max_t_dev > 1e-6 || rep.torus.max_t_dev > 1e-6)
      return false;
  }
  detail = "200 trajectories per dimension";
  return true;
}

// 10: separation certificates for the two-factor split, n = 2..6.
bool c10(std::string&) {
  GeometryConfig gc;
  for (int n = 2; n <= 6; ++n) {
    Rng rng = Rng(42).stream(1000 + n);
    PointCloud torus{n, "torus", {}}, sphere{n, "sphere", {}};
    for (int i = 0; i < 12; ++i) {
      torus.points.push_back(sample_monotone_torus(n, rng));
      sphere.points.push_back(sample_vanishing_sphere(n, rng));
    }
    SuperheavyRegistry reg = quadric_registry(
        n, region_from_cloud(gc, torus, "fibre-torus"),
        region_from_cloud(gc, sphere, "vanishing-sphere"), 2026);
    Certificate cert = separation_certificate(reg);
    if (!cert.separated) return false;
    if (std::abs(cert.zeta.values.at("e(+)") - 1.0) > 1e-12) return false;
    if (std::abs(cert.zeta.values.at("e(-)") - 0.0) > 1e-12) return false;
    if (std::abs(cert.unit_value - 1.0) > 1e-12) return false;
    if (std::abs(cert.norm_value - 1.0) > 1e-12) return false;
    for (const PairVerdict& pv : cert.pairs)
      if (!pv.distinct || std::abs(pv.mu - 1.0) > 1e-12) return false;
  }
  return true;
}

// 11: fitted exponent denominators per factor type; slope fits tight.
bool c11(std::string& detail) {
  double worst_fit = 0;
  for (int n = 2; n <= 6; ++n) {
    AlgebraTable t = builtin_quadric_table(n);
    IdempotentDecomposition dec = primitive_idempotents(t, 2026);
    if (!dec.exact || !dec.semisimple) return false;
    for (size_t i = 0; i < dec.idempotents.size(); ++i) {
      const std::string& l = dec.labels[i];
      int want = 0;
      if (l.rfind("e(+,", 0) == 0) want = n;
      else if (l.rfind("e(-,", 0) == 0) want = 2;
      else if (l == "e(-)") want = 1;
      if (want == 0) return false;
      if (dec.exponent_denominators[i] != want &&
          want % dec.exponent_denominators[i] != 0)
        return false;  // fitted lattice must divide the predicted one
      worst_fit = std::max(worst_fit, dec.fit_residuals[i]);
    }
    // Coarse idempotents live on the integer lattice.
    if (exponent_denominator(coarse_idempotent(t, +1), t) != 1) return false;
    if (exponent_denominator(coarse_idempotent(t, -1), t) != 1) return false;
  }
  detail = "max slope residual " + fmt(worst_fit);
  return worst_fit <= 0.05;
}

// 12: scalar arithmetic axioms, exact over dyadic draws.
bool c12(std::string& detail) {
  Rng rng = Rng(42).stream(1200);
  int checks = 0;
  for (int it = 0; it < 1200; ++it) {
    // Dyadic draws: integer coefficients keep every double operation in the
    // ring axioms exact, so equality is literal.
    auto idraw = [&]() {
      NovikovScalar s;
      int terms = 1 + static_cast<int>(rng.uniform() * 3);
      for (int k = 0; k < terms; ++k) {
        double re = std::floor(rng.uniform(-8, 9));
        double im = std::floor(rng.uniform(-8, 9));
        if (re == 0 && im == 0) re = 1;
        Rational e(static_cast<long>(rng.uniform(-12, 13)),
                   1 + static_cast<long>(rng.uniform() * 4));
        s = s + NovikovScalar::monomial(Complex(re, im), e);
      }
      return s;
    };
    // Inverse draws are narrower: power-of-two lead and +-1 tails on the
    // half-integer lattice bound the truncated-series coefficients by
    // 3^20, far below 2^53, so the inverse remainder is exactly zero
    // below the cutoff.
    auto udraw = [&]() {
      NovikovScalar s = NovikovScalar::monomial(
          Complex(std::pow(2.0, static_cast<int>(rng.uniform() * 2)) *
                      (rng.uniform() < 0.5 ? -1 : 1),
                  0),
          Rational(static_cast<long>(rng.uniform(-6, 7)), 2));
      NovikovScalar tail;
      for (int k = 0; k < 3; ++k)
        tail = tail + NovikovScalar::monomial(
                          Complex(rng.uniform() < 0.5 ? -1 : 1, 0),
                          Rational(1 + static_cast<long>(rng.uniform() * 6), 2));
      return s * (NovikovScalar::one() + tail);
    };
    NovikovScalar a = idraw(), b = idraw(), c = idraw();
    if (!(a + b == b + a)) return false;
    if (!((a + b) + c == a + (b + c))) return false;
    if (!(a * b == b * a)) return false;
    if (!((a * b) * c == a * (b * c))) return false;
    if (!(a * (b + c) == a * b + a * c)) return false;
    checks += 5;
    if (!a.is_zero() && !b.is_zero()) {
      if (!(((a * b).valuation()) == a.valuation() + b.valuation()))
        return false;
      NovikovScalar sum = a + b;
      if (!sum.is_zero() &&
          sum.valuation() < std::min(a.valuation(), b.valuation()))
        return false;
      checks += 2;
    }
    NovikovScalar u = udraw();
    if (!u.is_zero()) {
      NovikovScalar rem = u * u.inverse(Rational(10)) - NovikovScalar::one();
      if (!rem.is_zero() && !(rem.valuation() > Rational(10))) return false;
      Rational f(2);
      if (!(u.rescaled(f).valuation() == u.valuation() * f)) return false;
      checks += 2;
    }
    NovikovScalar d = a - b;
    if (!(d + b == a)) return false;
    ++checks;
  }
  detail = std::to_string(checks) + " exact checks";
  return checks >= 10000;
}

// 13: ingested blowup tables (optional data): factor counts and the
// three-region certificate.
bool c13(std::string& detail) {
  std::string dir = GZKIT_DATA_DIR;
  std::vector<std::string> missing;
  for (const char* f : {"dp3.qht", "dp4.qht", "dp3_registry.json"})
    if (!std::filesystem::exists(dir + "/" + f)) missing.push_back(f);
  if (!missing.empty()) {
    std::string all;
    for (const std::string& m : missing) all += (all.empty() ? "" : ", ") + m;
    detail = "ingested tables absent (" + all + "); skipping with notice";
    return true;  // caller turns this into SKIP via the detail sentinel
  }
  for (const char* f : {"dp3.qht", "dp4.qht"}) {
    ValidationReport warnings;
    AlgebraTable t = ingest_table(dir + "/" + std::string(f), &warnings);
    if (!warnings.ok()) {
      detail = std::string(f) + " failed validation";
      return false;
    }
    IdempotentDecomposition dec = primitive_idempotents(t, 2026);
    if (!dec.semisimple || dec.idempotents.size() < 3) {
      detail = std::string(f) + " has fewer than three field factors";
      return false;
    }
  }
  SuperheavyRegistry reg = read_registry_json(dir + "/dp3_registry.json");
  Certificate cert = separation_certificate(reg);
  if (reg.entries.size() != 3 || cert.pairs.size() != 3) {
    detail = "registry does not carry three regions";
    return false;
  }
  for (const PairVerdict& pv : cert.pairs)
    if (!pv.distinct) {
      detail = "pair " + pv.i + "/" + pv.j + " not separated";
      return false;
    }
  detail = "three pairwise separation certificates emitted";
  return cert.separated;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();

  run(1, "coarse idempotent identities hold exactly for n = 1..6", c01);
  run(2, "fine idempotents split the negative factor (quarter prefactor; "
         "half-prefactor variant rejected)", c02);
  run(3, "first-Chern multiplication spectrum: n simple nonzero eigenvalues "
         "plus the zero block, n = 2..6", c03);
  run(4, "critical values match the eigenvalues and the closed-form points, "
         "n = 2..6", c04);
  run(5, "dual fibration evaluators agree on 1000 random points per "
         "dimension", c05);
  run(6, "disc-bundle lift scales levels and lands on the constraint set", c06);
  run(7, "monotone-fibre samples realize the equally spaced level ladder", c07);
  run(8, "sphere sits on the zero level with a certified gap to the fibre "
         "level", c08);
  run(9, "degeneration flow: spheres collapse, fibre tori stay away "
         "(100 starts per class, n = 2, 3)", c09);

  run(10, "separation certificates: unit 1 / zero split with pair "
          "difference 1 and norm 1, n = 2..6", c10);
  run(11, "fitted exponent denominators: n for positive factors, 2 for the "
          "split negative pair, 1 coarse", c11);
  run(12, "scalar field axioms and valuation laws pass exactly on dyadic "
          "draws", c12);

  // Criterion 13 is conditional: the body signals a skip through its detail.
  {
    std::string detail;
    try {
      bool ok = c13(detail);
      bool skipped = detail.find("skipping with notice") != std::string::npos;
      std::string what =
          "ingested blowup tables: factor counts and three-region certificate";
      if (skipped) skip(13, what + " [" + detail + "]");
      else if (ok) pass(13, what + " [" + detail + "]");
      else fail(13, what + " [" + detail + "]");
    } catch (const std::exception& e) {
      fail(13, std::string("ingested blowup tables [exception: ") + e.what() +
                   "]");
    }
  }

  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                clock::now() - t0).count();
  std::printf("acceptance: %s (%d failed) in %lld ms\n",
              g_failures == 0 ? "PASS" : "FAIL", g_failures,
              static_cast<long long>(ms));
  return g_failures == 0 ? 0 : 1;
}
