#include "gzkit/algebra.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gzkit/rng.hpp"

namespace gzkit {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

NovikovScalar ns(double c, long long num = 0, long long den = 1) {
  return NovikovScalar::monomial(Complex(c, 0.0), Rational(num, den));
}

}  // namespace

Element AlgebraTable::unit_element() const {
  Element e(dim());
  e[basis.unit_index] = NovikovScalar::one();
  return e;
}

int AlgebraTable::index_of(const std::string& label) const {
  for (int i = 0; i < dim(); ++i)
    if (basis.labels[i] == label) return i;
  return -1;
}

Element element_add(const Element& a, const Element& b) {
  Element out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

Element element_sub(const Element& a, const Element& b) {
  Element out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

Element element_scale(const NovikovScalar& c, const Element& a) {
  Element out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = c * a[k];
  return out;
}

bool element_eq(const Element& a, const Element& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!(a[k] == b[k])) return false;
  return true;
}

Element multiply(const AlgebraTable& t, const Element& a, const Element& b) {
  const int d = t.dim();
  if (static_cast<int>(a.size()) != d || static_cast<int>(b.size()) != d)
    throw std::invalid_argument("multiply: element size does not match table");
  Element out(d);
  for (int i = 0; i < d; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < d; ++j) {
      if (b[j].is_zero()) continue;
      const NovikovScalar ab = a[i] * b[j];
      for (int k = 0; k < d; ++k) {
        if (t.sc[i][j][k].is_zero()) continue;
        out[k] += ab * t.sc[i][j][k];
      }
    }
  }
  return out;
}

ValidationReport validate_table(const AlgebraTable& t) {
  ValidationReport rep;
  const int d = t.dim();
  auto issue = [&](std::string kind, int i, int j, int k, std::string detail) {
    rep.issues.push_back({std::move(kind), i, j, k, std::move(detail)});
  };

  // Shape.
  if (d == 0 || static_cast<int>(t.basis.degrees.size()) != d ||
      static_cast<int>(t.sc.size()) != d ||
      static_cast<int>(t.c1.size()) != d || t.deg_T <= 0 ||
      t.basis.unit_index < 0 || t.basis.unit_index >= d) {
    issue("shape", -1, -1, -1, "inconsistent dimensions or metadata");
    return rep;  // nothing else is checkable
  }
  for (int i = 0; i < d; ++i)
    if (static_cast<int>(t.sc[i].size()) != d)
      issue("shape", i, -1, -1, "structure constant row has wrong length");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (static_cast<int>(t.sc[i][j].size()) != d)
        issue("shape", i, j, -1, "structure constant entry has wrong length");
  if (!rep.ok()) return rep;

  const int u = t.basis.unit_index;
  if (t.basis.degrees[u] != 0)
    issue("unit", u, -1, -1, "unit class must have degree 0");

  // Unit: 1 * b_j = b_j.
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const NovikovScalar want = (j == k) ? NovikovScalar::one() : NovikovScalar();
      if (!(t.sc[u][j][k] == want))
        issue("unit", u, j, k, "1 * b_j != b_j");
    }

  // Commutativity.
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = 0; k < d; ++k)
        if (!(t.sc[i][j][k] == t.sc[j][i][k]))
          issue("commutativity", i, j, k, "b_i * b_j != b_j * b_i");

  // Grading + positivity. Grading forces each (i,j,k) slot to be a single
  // T-power: deg_k + deg_T * r = deg_i + deg_j.
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (const auto& term : t.sc[i][j][k].terms()) {
          const Rational want(t.basis.degrees[i] + t.basis.degrees[j] -
                                  t.basis.degrees[k],
                              t.deg_T);
          if (!(term.exp == want))
            issue("grading", i, j, k,
                  "term exponent " + term.exp.str() + " != " + want.str());
          if (term.exp < Rational(0))
            issue("positivity", i, j, k,
                  "negative exponent " + term.exp.str());
        }

  // c1 must be a classical degree-2 class.
  for (int k = 0; k < d; ++k) {
    if (t.c1[k].is_zero()) continue;
    if (t.basis.degrees[k] != 2)
      issue("shape", -1, -1, k, "c1 has a component outside degree 2");
    for (const auto& term : t.c1[k].terms())
      if (!(term.exp == Rational(0)))
        issue("shape", -1, -1, k, "c1 component carries a T-power");
  }

  // Associativity, exact.
  std::vector<Element> basis_el(d, t.zero_element());
  for (int i = 0; i < d; ++i) basis_el[i][i] = NovikovScalar::one();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Element ij = multiply(t, basis_el[i], basis_el[j]);
      for (int k = 0; k < d; ++k) {
        const Element lhs = multiply(t, ij, basis_el[k]);
        const Element rhs =
            multiply(t, basis_el[i], multiply(t, basis_el[j], basis_el[k]));
        if (!element_eq(lhs, rhs))
          issue("associativity", i, j, k, "(b_i b_j) b_k != b_i (b_j b_k)");
      }
    }

  return rep;
}

AlgebraTable builtin_quadric_table(int n) {
  if (n < 1 || n > 6)
    throw std::invalid_argument("builtin_quadric_table: need 1 <= n <= 6");

  AlgebraTable t;
  t.name = "Q" + std::to_string(n);
  t.n = n;
  t.lambda0 = kTwoPi;
  t.deg_T = 2 * n;

  if (n == 1) {
    // The conic: basis {1, p}, p*p = T^2, c1 = 2p. (The hyperplane class is
    // 2p here, so the generic h-chain presentation below starts at n = 2.)
    t.basis.labels = {"1", "p"};
    t.basis.degrees = {0, 2};
    t.basis.unit_index = 0;
    const int d = 2;
    t.sc.assign(d, std::vector<Element>(d, Element(d)));
    t.sc[0][0][0] = ns(1);
    t.sc[0][1][1] = ns(1);
    t.sc[1][0][1] = ns(1);
    t.sc[1][1][0] = ns(1, 2);  // T^2
    t.c1 = t.zero_element();
    t.c1[1] = ns(2);
    return t;
  }

  // Basis: c_k = h^k (cup powers) for k = 0..n-1, c_n = p = h^n / 2, and for
  // even n the extra middle class s. All quantum products follow from
  // h^{*(n+1)} = 4 T h, h^{*n} = 2p + 2T, h*p = T h, p*p = T^2 and the
  // s-relations; associativity of the result is checked by validate_table.
  const bool has_s = (n % 2 == 0);
  const int d = n + 1 + (has_s ? 1 : 0);
  const int S = n + 1;  // index of s when present

  t.basis.labels.resize(d);
  t.basis.degrees.resize(d);
  t.basis.labels[0] = "1";
  t.basis.degrees[0] = 0;
  t.basis.labels[1] = "h";
  t.basis.degrees[1] = 2;
  for (int k = 2; k <= n - 1; ++k) {
    t.basis.labels[k] = "h^" + std::to_string(k);
    t.basis.degrees[k] = 2 * k;
  }
  t.basis.labels[n] = "p";
  t.basis.degrees[n] = 2 * n;
  if (has_s) {
    t.basis.labels[S] = "s";
    t.basis.degrees[S] = n;
  }
  t.basis.unit_index = 0;

  t.sc.assign(d, std::vector<Element>(d, Element(d)));
  auto set = [&](int i, int j, int k, double coeff, long long texp) {
    t.sc[i][j][k] = ns(coeff, texp);
    t.sc[j][i][k] = t.sc[i][j][k];
  };

  for (int j = 0; j < d; ++j) set(0, j, j, 1, 0);  // unit row

  for (int j = 1; j <= n - 1; ++j)
    for (int k = j; k <= n - 1; ++k) {
      const int m = j + k;
      if (m <= n - 1) {
        set(j, k, m, 1, 0);
      } else if (m == n) {
        set(j, k, n, 2, 0);
        t.sc[j][k][0] = ns(2, 1);
        t.sc[k][j][0] = t.sc[j][k][0];
      } else {  // n+1 <= m <= 2n-2
        set(j, k, m - n, 4, 1);
      }
    }
  for (int j = 1; j <= n - 1; ++j) set(j, n, j, 1, 1);  // c_j * p = T c_j
  set(n, n, 0, 1, 2);                                   // p * p = T^2

  if (has_s) {
    // h-chain kills s; s*s = 2T - 2p; s*p = -T s.
    t.sc[S][S][0] = ns(2, 1);
    t.sc[S][S][n] = ns(-2);
    t.sc[S][n][S] = ns(-1, 1);
    t.sc[n][S][S] = t.sc[S][n][S];
    t.sc[S][0][S] = ns(1);
    t.sc[0][S][S] = ns(1);
  }

  t.c1 = t.zero_element();
  t.c1[1] = ns(n);
  return t;
}

namespace {

// Structure tensor and multiplication matrices after T^{lambda0} -> x.
struct NumericTable {
  int d;
  std::vector<std::vector<VectorXcd>> C;  // C[i][j] = coords of b_i b_j

  NumericTable(const AlgebraTable& t, double x) : d(t.dim()) {
    C.assign(d, std::vector<VectorXcd>(d, VectorXcd::Zero(d)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          if (!t.sc[i][j][k].is_zero()) C[i][j](k) = t.sc[i][j][k].eval(x);
  }

  MatrixXcd mult_matrix(const VectorXcd& v) const {
    MatrixXcd M = MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      if (v(i) == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < d; ++j) M.col(j) += v(i) * C[i][j];
    }
    return M;
  }

  VectorXcd mul(const VectorXcd& a, const VectorXcd& b) const {
    VectorXcd out = VectorXcd::Zero(d);
    for (int i = 0; i < d; ++i) {
      if (a(i) == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < d; ++j) out += a(i) * b(j) * C[i][j];
    }
    return out;
  }
};

VectorXcd eval_element(const Element& e, double x) {
  VectorXcd v(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) v(k) = e[k].eval(x);
  return v;
}

// Eigenvalue clusters of the restriction of mult-by-g to the block of the
// idempotent e (column space of M(e)).
std::vector<Complex> block_eigen_clusters(const NumericTable& nt,
                                          const VectorXcd& e,
                                          const VectorXcd& g, int rank) {
  const MatrixXcd Me = nt.mult_matrix(e);
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(Me);
  MatrixXcd Q = qr.householderQ();
  const MatrixXcd Qr = Q.leftCols(rank);
  const MatrixXcd A = Qr.adjoint() * nt.mult_matrix(g) * Qr;
  Eigen::ComplexEigenSolver<MatrixXcd> es(A);
  std::vector<Complex> eig(es.eigenvalues().data(),
                           es.eigenvalues().data() + rank);
  // Cluster: well separated eigenvalues collapse to representatives.
  std::sort(eig.begin(), eig.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  double scale = 1.0;
  for (Complex w : eig) scale = std::max(scale, std::abs(w));
  std::vector<Complex> reps;
  std::vector<int> count;
  for (Complex w : eig) {
    bool merged = false;
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (std::abs(w - reps[i]) <= 1e-6 * scale) {
        reps[i] = (reps[i] * double(count[i]) + w) / double(count[i] + 1);
        ++count[i];
        merged = true;
        break;
      }
    if (!merged) {
      reps.push_back(w);
      count.push_back(1);
    }
  }
  return reps;
}

int block_rank(const NumericTable& nt, const VectorXcd& e) {
  // M(e) is a projection, so its trace equals the block dimension.
  return static_cast<int>(std::lround(nt.mult_matrix(e).trace().real()));
}

// One full splitting pass; returns true if any block was refined.
bool split_pass(const NumericTable& nt, std::vector<VectorXcd>& idems,
                const VectorXcd& g) {
  bool progress = false;
  std::vector<VectorXcd> out;
  const MatrixXcd Mg = nt.mult_matrix(g);
  for (const VectorXcd& e : idems) {
    const int r = block_rank(nt, e);
    if (r <= 1) {
      out.push_back(e);
      continue;
    }
    const auto reps = block_eigen_clusters(nt, e, g, r);
    if (reps.size() <= 1) {
      out.push_back(e);
      continue;
    }
    bool all_ok = true;
    std::vector<VectorXcd> pieces;
    for (std::size_t i = 0; i < reps.size() && all_ok; ++i) {
      VectorXcd v = e;
      for (std::size_t j = 0; j < reps.size(); ++j) {
        if (j == i) continue;
        v = (Mg * v - reps[j] * v) / (reps[i] - reps[j]);
      }
      if ((nt.mul(v, v) - v).norm() > 1e-7 * std::max(1.0, v.norm()))
        all_ok = false;  // Jordan structure: Lagrange does not idempotize
      else
        pieces.push_back(v);
    }
    if (all_ok) {
      out.insert(out.end(), pieces.begin(), pieces.end());
      progress = true;
    } else {
      out.push_back(e);
    }
  }
  idems.swap(out);
  return progress;
}

int trace_form_rank(const NumericTable& nt) {
  const int d = nt.d;
  MatrixXcd B(d, d);
  std::vector<MatrixXcd> M(d);
  for (int i = 0; i < d; ++i) {
    VectorXcd b = VectorXcd::Zero(d);
    b(i) = 1.0;
    M[i] = nt.mult_matrix(b);
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B(i, j) = (M[i] * M[j]).trace();
  Eigen::JacobiSVD<MatrixXcd> svd(B);
  const auto& s = svd.singularValues();
  const double tol = 1e-9 * std::max(1.0, s(0));
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  return rank;
}

// Newton refinement of e*e = e at the structure tensor nt, from a nearby
// start. Used to continue idempotents along the T-grid.
bool newton_idempotent(const NumericTable& nt, VectorXcd& e) {
  for (int it = 0; it < 30; ++it) {
    const VectorXcd r = nt.mul(e, e) - e;
    if (r.norm() < 1e-13) return true;
    const MatrixXcd J =
        2.0 * nt.mult_matrix(e) - MatrixXcd::Identity(nt.d, nt.d);
    e -= J.fullPivLu().solve(r);
  }
  return (nt.mul(e, e) - e).norm() < 1e-10;
}

bool is_quadric_style(const AlgebraTable& t) {
  const int p = t.index_of("p");
  if (p < 0) return false;
  Element want = t.zero_element();
  want[t.basis.unit_index] = NovikovScalar::monomial(1.0, Rational(2));
  return element_eq(t.sc[p][p], want);
}

}  // namespace

std::vector<Complex> c1_spectrum(const AlgebraTable& t, double T_value) {
  if (T_value <= 0.0)
    throw std::invalid_argument("c1_spectrum: need T_value > 0");
  NumericTable nt(t, T_value);
  Eigen::ComplexEigenSolver<MatrixXcd> es(nt.mult_matrix(eval_element(t.c1, T_value)));
  std::vector<Complex> eig(es.eigenvalues().data(),
                           es.eigenvalues().data() + t.dim());
  std::sort(eig.begin(), eig.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return eig;
}

Element coarse_idempotent(const AlgebraTable& t, int sign) {
  if (!is_quadric_style(t))
    throw std::invalid_argument(
        "coarse_idempotent: table has no point class with p*p = T^2");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("coarse_idempotent: sign must be +-1");
  Element e = t.zero_element();
  e[t.basis.unit_index] = ns(0.5);
  e[t.index_of("p")] = NovikovScalar::monomial(0.5 * sign, Rational(-1));
  return e;
}

Element fine_minus_idempotent(const AlgebraTable& t, int sign) {
  const int s = t.index_of("s");
  if (!is_quadric_style(t) || s < 0)
    throw std::invalid_argument(
        "fine_minus_idempotent: needs a quadric-style table with middle class s");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("fine_minus_idempotent: sign must be +-1");
  Element e = t.zero_element();
  e[t.basis.unit_index] = ns(0.25);
  e[s] = NovikovScalar::monomial(0.25 * sign, Rational(-1, 2));
  e[t.index_of("p")] = NovikovScalar::monomial(-0.25, Rational(-1));
  return e;
}

int exponent_denominator(const Element& e, const AlgebraTable&) {
  long long m = 1;
  bool any = false;
  for (const auto& c : e)
    for (const auto& term : c.terms()) {
      any = true;
      m = lcm_ll(m, term.exp.den());
    }
  if (!any) throw std::domain_error("exponent_denominator: zero element");
  return static_cast<int>(m);
}

int fitted_exponent_denominator(const IdempotentDecomposition& d, int which,
                                const AlgebraTable& t, double* residual) {
  const auto& grid = d.grid;
  const auto& coords = d.grid_coords.at(which);
  const int dim = t.dim();
  const int ref = static_cast<int>(grid.size()) - 1;  // grid ends at T = 1

  double scale = 0.0;
  for (int k = 0; k < dim; ++k) scale = std::max(scale, std::abs(coords[ref][k]));

  // Least-squares slope of log|v| against log T per live coordinate.
  std::vector<double> slopes;
  for (int k = 0; k < dim; ++k) {
    if (std::abs(coords[ref][k]) < 1e-8 * std::max(1.0, scale)) continue;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = static_cast<int>(grid.size());
    for (int gi = 0; gi < m; ++gi) {
      const double lx = std::log(grid[gi]);
      const double ly = std::log(std::abs(coords[gi][k]));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    slopes.push_back((m * sxy - sx * sy) / (m * sxx - sx * sx));
  }
  if (slopes.empty())
    throw std::domain_error("fitted_exponent_denominator: idempotent is zero");

  const int max_m = std::max(2, 2 * t.n);
  for (int m = 1; m <= max_m; ++m) {
    double worst = 0.0;
    bool ok = true;
    for (double s : slopes) {
      const double dist = std::abs(s * m - std::round(s * m)) / m;
      worst = std::max(worst, dist);
      if (dist > 0.05) {
        ok = false;
        break;
      }
    }
    if (ok) {
      if (residual) *residual = worst;
      return m;
    }
  }
  throw std::runtime_error(
      "fitted_exponent_denominator: no lattice m <= 2n fits the slopes");
}

IdempotentDecomposition primitive_idempotents(const AlgebraTable& t,
                                              std::uint64_t seed) {
  IdempotentDecomposition out;
  const int d = t.dim();
  const NumericTable nt(t, 1.0);

  // 1) Split the unit at T = 1 using c1, then single basis classes, then a
  //    few random combinations.
  std::vector<VectorXcd> idems{eval_element(t.unit_element(), 1.0)};
  std::vector<VectorXcd> candidates;
  candidates.push_back(eval_element(t.c1, 1.0));
  for (int k = 0; k < d; ++k) {
    if (k == t.basis.unit_index) continue;
    VectorXcd b = VectorXcd::Zero(d);
    b(k) = 1.0;
    candidates.push_back(b);
  }
  Rng rng(seed ^ 0x9d2c5680a1b3c4d5ull);
  for (int r = 0; r < 3; ++r) {
    VectorXcd g(d);
    for (int k = 0; k < d; ++k) g(k) = Complex(rng.normal(), rng.normal());
    candidates.push_back(g);
  }

  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& g : candidates) {
      if (split_pass(nt, idems, g)) progress = true;
      bool all_rank1 = true;
      for (const auto& e : idems)
        if (block_rank(nt, e) > 1) all_rank1 = false;
      if (all_rank1) {
        progress = false;
        break;
      }
    }
  }

  bool all_rank1 = true;
  for (const auto& e : idems)
    if (block_rank(nt, e) > 1) all_rank1 = false;

  if (!all_rank1) {
    const int r = trace_form_rank(nt);
    out.semisimple = false;
    out.notes = (r < d) ? "radical detected: trace form rank " +
                              std::to_string(r) + " < dim " + std::to_string(d)
                        : "splitting incomplete despite nondegenerate trace form";
    for (const auto& e : idems) {
      Element el(d);
      for (int k = 0; k < d; ++k)
        if (std::abs(e(k)) > 1e-11)
          el[k] = NovikovScalar::monomial(e(k), Rational(0));
      out.idempotents.push_back(el);
      out.labels.push_back("block" + std::to_string(out.labels.size() + 1));
    }
    return out;
  }
  out.semisimple = true;

  // 2) Verify the decomposition at T = 1.
  VectorXcd sum = VectorXcd::Zero(d);
  for (const auto& e : idems) sum += e;
  if ((sum - eval_element(t.unit_element(), 1.0)).norm() > 1e-8)
    throw std::runtime_error("primitive_idempotents: completeness check failed");
  for (std::size_t i = 0; i < idems.size(); ++i)
    for (std::size_t j = i + 1; j < idems.size(); ++j)
      if (nt.mul(idems[i], idems[j]).norm() > 1e-8)
        throw std::runtime_error("primitive_idempotents: orthogonality check failed");

  // 3) c1-eigenvalues and stable ordering/labels.
  const VectorXcd c1v = eval_element(t.c1, 1.0);
  auto eigen_of = [&](const VectorXcd& e, const VectorXcd& g) {
    const VectorXcd ge = nt.mul(g, e);
    int kmax = 0;
    for (int k = 1; k < d; ++k)
      if (std::abs(e(k)) > std::abs(e(kmax))) kmax = k;
    return ge(kmax) / e(kmax);
  };
  std::vector<Complex> eigs;
  for (const auto& e : idems) eigs.push_back(eigen_of(e, c1v));

  std::vector<int> order(idems.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  const bool quadric = is_quadric_style(t);
  std::vector<std::string> labels(idems.size());
  if (quadric && d == 2) {
    // The conic: match against the closed-form coarse pair.
    for (std::size_t i = 0; i < idems.size(); ++i)
      labels[i] = eigs[i].real() > 0 ? "e(+)" : "e(-)";
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return eigs[a].real() > eigs[b].real(); });
  } else if (quadric && t.n >= 2 && !t.c1[1].is_zero()) {
    // Expected eigenvalues n xi_i with xi_i the n-th roots of 4, plus zero.
    const double r0 = std::pow(4.0, 1.0 / t.n);
    std::vector<Complex> targets;
    for (int i = 0; i < t.n; ++i)
      targets.push_back(double(t.n) * std::polar(r0, kTwoPi * i / t.n));
    const int s_idx = t.index_of("s");
    std::vector<double> key(idems.size());
    for (std::size_t i = 0; i < idems.size(); ++i) {
      if (std::abs(eigs[i]) > 1e-6) {
        int best = 0;
        for (int j = 1; j < t.n; ++j)
          if (std::abs(eigs[i] - targets[j]) < std::abs(eigs[i] - targets[best]))
            best = j;
        labels[i] = "e(+," + std::to_string(best + 1) + ")";
        key[i] = best;
      } else if (s_idx < 0) {
        labels[i] = "e(-)";
        key[i] = t.n;
      } else {
        VectorXcd s = VectorXcd::Zero(d);
        s(s_idx) = 1.0;
        const double sig = eigen_of(idems[i], s).real();
        labels[i] = sig > 0 ? "e(-,1)" : "e(-,2)";
        key[i] = t.n + (sig > 0 ? 0 : 1);
      }
    }
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return key[a] < key[b]; });
  } else {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (eigs[a].real() != eigs[b].real()) return eigs[a].real() > eigs[b].real();
      return eigs[a].imag() < eigs[b].imag();
    });
    for (std::size_t i = 0; i < order.size(); ++i)
      labels[order[i]] = "f" + std::to_string(i + 1);
  }

  std::vector<VectorXcd> sorted;
  for (int i : order) sorted.push_back(idems[i]);
  std::vector<Complex> sorted_eigs;
  for (int i : order) sorted_eigs.push_back(eigs[i]);
  std::vector<std::string> sorted_labels;
  for (int i : order) sorted_labels.push_back(labels[i]);

  // 4) Continue each idempotent down the T-grid (Newton on e*e = e).
  out.grid = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  out.grid_coords.assign(sorted.size(),
                         std::vector<std::vector<Complex>>(out.grid.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    VectorXcd e = sorted[i];
    double x = 1.0;
    // Record T = 1 first.
    out.grid_coords[i][out.grid.size() - 1].assign(e.data(), e.data() + d);
    for (int gi = static_cast<int>(out.grid.size()) - 2; gi >= 0; --gi) {
      const double target = out.grid[gi];
      while (x > target + 1e-12) {
        x = std::max(target, x - 0.025);
        NumericTable ntx(t, x);
        if (!newton_idempotent(ntx, e))
          throw std::runtime_error(
              "primitive_idempotents: continuation lost an idempotent at T=" +
              std::to_string(x));
      }
      out.grid_coords[i][gi].assign(e.data(), e.data() + d);
    }
  }

  // 5) Exact monomial lift: a degree-0 homogeneous idempotent must have
  //    coordinate exponents -deg_k / deg_T; accept the lift only if it
  //    reproduces the grid values.
  out.exact = true;
  double scale = 0.0;
  for (const auto& e : sorted) scale = std::max(scale, e.lpNorm<Eigen::Infinity>());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    Element el(d);
    bool ok = true;
    for (int k = 0; k < d && ok; ++k) {
      const Complex v = sorted[i](k);
      const Rational r(-t.basis.degrees[k], t.deg_T);
      if (std::abs(v) <= 1e-11 * std::max(1.0, scale)) {
        for (std::size_t gi = 0; gi < out.grid.size(); ++gi)
          if (std::abs(out.grid_coords[i][gi][k]) > 1e-8) ok = false;
        continue;
      }
      el[k] = NovikovScalar::monomial(v, r);
      for (std::size_t gi = 0; gi < out.grid.size(); ++gi) {
        const Complex pred = v * std::pow(out.grid[gi], r.to_double());
        if (std::abs(pred - out.grid_coords[i][gi][k]) >
            1e-8 * std::max(1.0, std::abs(v)))
          ok = false;
      }
    }
    if (!ok) {
      out.exact = false;
      el.assign(d, NovikovScalar());
      for (int k = 0; k < d; ++k)
        if (std::abs(sorted[i](k)) > 1e-11)
          el[k] = NovikovScalar::monomial(sorted[i](k), Rational(0));
    }
    out.idempotents.push_back(el);
  }

  out.labels = sorted_labels;
  out.c1_eigenvalues = sorted_eigs;

  // 6) Lattice denominators via the slope fit.
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double res = 0.0;
    out.exponent_denominators.push_back(
        fitted_exponent_denominator(out, static_cast<int>(i), t, &res));
    out.fit_residuals.push_back(res);
  }
  return out;
}

std::map<std::string, std::string> coarse_grouping(
    const IdempotentDecomposition& d, const AlgebraTable& t) {
  std::map<std::string, std::string> out;
  if (!d.semisimple)
    throw std::invalid_argument("coarse_grouping: decomposition is not semisimple");

  auto approx_eq = [&](const Element& a, const Element& b) {
    const Element diff = element_sub(a, b);
    for (const auto& c : diff)
      for (const auto& term : c.terms())
        if (std::abs(term.coeff) > 1e-8) return false;
    return true;
  };

  if (is_quadric_style(t) && t.dim() > 1) {
    const Element ep = coarse_idempotent(t, +1);
    const Element em = coarse_idempotent(t, -1);
    for (std::size_t i = 0; i < d.idempotents.size(); ++i) {
      const Element& e = d.idempotents[i];
      if (approx_eq(multiply(t, e, ep), e))
        out[d.labels[i]] = "e(+)";
      else if (approx_eq(multiply(t, e, em), e))
        out[d.labels[i]] = "e(-)";
      else
        throw std::runtime_error("coarse_grouping: '" + d.labels[i] +
                                 "' is absorbed by neither e(+) nor e(-)");
    }
    return out;
  }

  // No distinguished coarse pair: the Laurent-level decomposition must
  // already be the fine one (integer exponents), each class its own group.
  for (std::size_t i = 0; i < d.idempotents.size(); ++i) {
    for (const auto& c : d.idempotents[i])
      if (!c.is_laurent())
        throw std::runtime_error(
            "coarse_grouping: '" + d.labels[i] +
            "' has fractional exponents but the table has no coarse pair");
    out[d.labels[i]] = d.labels[i];
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_table(const AlgebraTable& t, std::ostream& out) {
  const int d = t.dim();
  out << "# quantum multiplication table\n";
  out << "name " << t.name << "\n";
  out << "n " << t.n << "\n";
  out << "lambda0 " << fmt_double(t.lambda0) << "\n";
  out << "deg_T " << t.deg_T << "\n";
  out << "basis " << d << "\n";
  for (int i = 0; i < d; ++i)
    out << t.basis.labels[i] << " " << t.basis.degrees[i] << "\n";
  out << "unit " << t.basis.unit_index << "\n";
  out << "c1 :";
  for (int k = 0; k < d; ++k) out << (k ? " ; " : " ") << t.c1[k].str();
  out << "\n";
  int count = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = 0; k < d; ++k)
        if (!t.sc[i][j][k].is_zero()) ++count;
  out << "constants " << count << "\n";
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = 0; k < d; ++k)
        if (!t.sc[i][j][k].is_zero())
          out << i << " " << j << " -> " << k << " : " << t.sc[i][j][k].str()
              << "\n";
  out << "end\n";
}

std::string table_to_string(const AlgebraTable& t) {
  std::ostringstream os;
  write_table(t, os);
  return os.str();
}

AlgebraTable parse_table(std::istream& in, const std::string& origin) {
  AlgebraTable t;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                             ": table parse error: " + why);
  };
  auto next_line = [&](std::string& line) {
    while (std::getline(in, line)) {
      ++lineno;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (line[first] == '#') continue;
      auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      return true;
    }
    return false;
  };
  auto expect_kv = [&](const std::string& key) {
    std::string line;
    if (!next_line(line)) fail("unexpected end of file, wanted '" + key + "'");
    if (line.rfind(key + " ", 0) != 0) fail("expected '" + key + " ...'");
    return line.substr(key.size() + 1);
  };

  try {
    t.name = expect_kv("name");
    t.n = std::stoi(expect_kv("n"));
    t.lambda0 = std::stod(expect_kv("lambda0"));
    t.deg_T = std::stoi(expect_kv("deg_T"));
    const int d = std::stoi(expect_kv("basis"));
    if (d <= 0 || d > 64) fail("unreasonable basis size");
    for (int i = 0; i < d; ++i) {
      std::string line;
      if (!next_line(line)) fail("missing basis line");
      std::istringstream ls(line);
      std::string label;
      int deg;
      if (!(ls >> label >> deg)) fail("bad basis line '" + line + "'");
      t.basis.labels.push_back(label);
      t.basis.degrees.push_back(deg);
    }
    t.basis.unit_index = std::stoi(expect_kv("unit"));
    if (t.basis.unit_index < 0 || t.basis.unit_index >= d)
      fail("unit index out of range");

    std::string c1_line = expect_kv("c1");
    if (c1_line.empty() || c1_line[0] != ':') fail("c1 line must start with ':'");
    c1_line = c1_line.substr(1);
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      auto semi = c1_line.find(" ; ", pos);
      parts.push_back(semi == std::string::npos
                          ? c1_line.substr(pos)
                          : c1_line.substr(pos, semi - pos));
      if (semi == std::string::npos) break;
      pos = semi + 3;
    }
    if (static_cast<int>(parts.size()) != d) fail("c1 needs one scalar per class");
    for (auto& p : parts) t.c1.push_back(NovikovScalar::parse(p));

    const int count = std::stoi(expect_kv("constants"));
    t.sc.assign(d, std::vector<Element>(d, Element(d)));
    for (int c = 0; c < count; ++c) {
      std::string line;
      if (!next_line(line)) fail("missing structure constant line");
      std::istringstream ls(line);
      int i, j, k;
      std::string arrow, colon;
      if (!(ls >> i >> j >> arrow >> k >> colon) || arrow != "->" || colon != ":")
        fail("bad constant line '" + line + "'");
      if (i < 0 || i >= d || j < 0 || j >= d || k < 0 || k >= d)
        fail("constant indices out of range in '" + line + "'");
      std::string rest;
      std::getline(ls, rest);
      const NovikovScalar s = NovikovScalar::parse(rest);
      t.sc[i][j][k] = s;
      t.sc[j][i][k] = s;
    }
    std::string line;
    if (!next_line(line) || line != "end") fail("missing 'end'");
  } catch (const std::logic_error& e) {
    fail(e.what());
  }
  return t;
}

AlgebraTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path);
  return parse_table(in, path);
}

AlgebraTable ingest_table(const std::string& path, ValidationReport* warnings) {
  AlgebraTable t = load_table(path);
  ValidationReport rep = validate_table(t);
  if (warnings) *warnings = rep;
  return t;
}

}  // namespace gzkit
