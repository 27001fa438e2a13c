#include "gzkit/superpotential.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gzkit/rng.hpp"

namespace gzkit {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using nlohmann::json;

void check_args(int n, const std::vector<Complex>& z, bool need_nonzero) {
  if (n < 2) throw std::invalid_argument("superpotential: need n >= 2");
  if (static_cast<int>(z.size()) != n)
    throw std::invalid_argument("superpotential: point has wrong dimension");
  if (need_nonzero)
    for (const Complex& c : z)
      if (c == Complex(0.0, 0.0))
        throw std::domain_error("superpotential: coordinate on the torus boundary");
}

}  // namespace

Complex superpotential_value(int n, const std::vector<Complex>& z) {
  check_args(n, z, true);
  Complex w = 1.0 / z[n - 1];
  for (int k = 2; k <= n; ++k) w += z[k - 1] / z[k - 2];
  w += 2.0 * z[1] + z[0] * z[1];
  return w;
}

std::vector<Complex> superpotential_gradient(int n, const std::vector<Complex>& z) {
  check_args(n, z, true);
  std::vector<Complex> g(n);
  g[0] = -z[1] / (z[0] * z[0]) + z[1];
  // dW/dz_j = 1/z_{j-1} - z_{j+1}/z_j^2 with z_{n+1} = 1, plus the extra
  // 2 + z_1 on j = 2.
  for (int j = 2; j <= n; ++j) {
    const Complex znext = (j == n) ? Complex(1.0, 0.0) : z[j];
    g[j - 1] = 1.0 / z[j - 2] - znext / (z[j - 1] * z[j - 1]);
    if (j == 2) g[j - 1] += 2.0 + z[0];
  }
  return g;
}

std::vector<std::vector<Complex>> superpotential_hessian(
    int n, const std::vector<Complex>& z) {
  check_args(n, z, true);
  std::vector<std::vector<Complex>> h(n, std::vector<Complex>(n, 0.0));
  h[0][0] = 2.0 * z[1] / (z[0] * z[0] * z[0]);
  h[0][1] = 1.0 - 1.0 / (z[0] * z[0]);
  h[1][0] = h[0][1];
  for (int j = 2; j <= n; ++j) {
    const Complex znext = (j == n) ? Complex(1.0, 0.0) : z[j];
    h[j - 1][j - 1] = 2.0 * znext / (z[j - 1] * z[j - 1] * z[j - 1]);
    if (j >= 3) {
      h[j - 1][j - 2] = -1.0 / (z[j - 2] * z[j - 2]);
      h[j - 2][j - 1] = h[j - 1][j - 2];
    }
  }
  return h;
}

std::vector<Complex> cleared_system(int n, const std::vector<Complex>& z) {
  check_args(n, z, false);
  std::vector<Complex> p(n);
  p[0] = z[1] * (z[0] * z[0] - 1.0);
  const Complex z3 = (n >= 3) ? z[2] : Complex(1.0, 0.0);
  p[1] = z[1] * z[1] - z[0] * z3 + 2.0 * z[0] * z[1] * z[1] +
         z[0] * z[0] * z[1] * z[1];
  for (int j = 3; j <= n; ++j) {
    const Complex znext = (j == n) ? Complex(1.0, 0.0) : z[j];
    p[j - 1] = z[j - 1] * z[j - 1] - z[j - 2] * znext;
  }
  return p;
}

std::vector<std::vector<Complex>> cleared_jacobian(int n,
                                                   const std::vector<Complex>& z) {
  check_args(n, z, false);
  std::vector<std::vector<Complex>> J(n, std::vector<Complex>(n, 0.0));
  J[0][0] = 2.0 * z[0] * z[1];
  J[0][1] = z[0] * z[0] - 1.0;
  const Complex z3 = (n >= 3) ? z[2] : Complex(1.0, 0.0);
  J[1][0] = -z3 + 2.0 * z[1] * z[1] + 2.0 * z[0] * z[1] * z[1];
  J[1][1] = 2.0 * z[1] + 4.0 * z[0] * z[1] + 2.0 * z[0] * z[0] * z[1];
  if (n >= 3) J[1][2] = -z[0];
  for (int j = 3; j <= n; ++j) {
    const Complex znext = (j == n) ? Complex(1.0, 0.0) : z[j];
    J[j - 1][j - 2] = -znext;
    J[j - 1][j - 1] = 2.0 * z[j - 1];
    if (j < n) J[j - 1][j] = -z[j - 2];
  }
  return J;
}

namespace {
Complex branch_root(int n, int branch) {
  const int b = ((branch % n) + n) % n;
  return std::polar(std::pow(4.0, 1.0 / n), 2.0 * std::numbers::pi * b / n);
}
}  // namespace

std::vector<Complex> closed_form_critical_point(int n, int branch) {
  if (n < 2) throw std::invalid_argument("closed_form_critical_point: n >= 2");
  const Complex xi = branch_root(n, branch);
  std::vector<Complex> z(n);
  z[0] = 1.0;
  for (int k = 2; k <= n; ++k) z[k - 1] = std::pow(xi, -(n - k + 1));
  return z;
}

Complex closed_form_critical_value(int n, int branch) {
  if (n < 2) throw std::invalid_argument("closed_form_critical_value: n >= 2");
  return double(n) * branch_root(n, branch);
}

namespace {

double grad_inf_norm(int n, const std::vector<Complex>& z) {
  const auto g = superpotential_gradient(n, z);
  double m = 0;
  for (const Complex& c : g) m = std::max(m, std::abs(c));
  return m;
}

double point_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

CriticalPoint finish_point(int n, std::vector<Complex> z) {
  CriticalPoint cp;
  cp.z = std::move(z);
  cp.value = superpotential_value(n, cp.z);
  cp.grad_norm = grad_inf_norm(n, cp.z);
  cp.min_abs_coord = std::abs(cp.z[0]);
  for (const Complex& c : cp.z)
    cp.min_abs_coord = std::min(cp.min_abs_coord, std::abs(c));
  const auto h = superpotential_hessian(n, cp.z);
  MatrixXcd H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H(i, j) = h[i][j];
  Eigen::JacobiSVD<MatrixXcd> svd(H);
  cp.hessian_min_singular = svd.singularValues()(n - 1);
  cp.nondegenerate = cp.hessian_min_singular >= 1e-6;
  return cp;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(int n, const SolveOptions& opt,
                                                SolveStats* stats) {
  if (n < 2) throw std::invalid_argument("find_critical_points: need n >= 2");
  SolveStats st;
  st.starts = opt.starts;
  Rng rng(opt.seed ^ 0x5eed0f2a11dull);
  std::vector<std::vector<Complex>> roots;

  for (int s = 0; s < opt.starts; ++s) {
    std::vector<Complex> z(n);
    if (s % 2 == 0) {
      // Plain start in the log-uniform window.
      for (int k = 0; k < n; ++k)
        z[k] = std::polar(rng.log_uniform(opt.lo, opt.hi),
                          rng.uniform(0.0, 2.0 * std::numbers::pi));
    } else {
      // Chain-consistent start: P_3..P_n force (z_2, ..., z_n, 1) to be a
      // geometric sequence, so seed one (z_j = r^{-(n+1-j)}) and let Newton
      // resolve P_1 and P_2. Plain window starts alone almost always fall
      // into the spurious hyperplane component once n >= 5.
      const Complex r = std::polar(rng.log_uniform(0.5, 2.5),
                                   rng.uniform(0.0, 2.0 * std::numbers::pi));
      for (int j = 2; j <= n; ++j)
        z[j - 1] = std::pow(r, -static_cast<double>(n + 1 - j));
      z[0] = std::polar(rng.log_uniform(0.3, 3.0),
                        rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
    bool abandoned = false;
    bool hyperplane = false;
    bool converged = false;
    auto residual = [&](const std::vector<Complex>& w) {
      double r = 0;
      for (const Complex& c : cleared_system(n, w)) r = std::max(r, std::abs(c));
      return r;
    };
    for (int it = 0; it < opt.max_iter; ++it) {
      // Light deflation: a start drifting into a known basin is abandoned.
      for (const auto& r : roots)
        if (point_distance(z, r) < opt.deflation_radius) {
          abandoned = true;
          break;
        }
      if (abandoned) break;
      // The cleared system has a spurious component on the coordinate
      // hyperplanes; iterates collapsing onto it will not recover.
      double minmod = std::abs(z[0]);
      for (const Complex& c : z) minmod = std::min(minmod, std::abs(c));
      if (it > 3 && minmod < 10.0 * opt.min_modulus) {
        hyperplane = true;
        break;
      }

      const auto pv = cleared_system(n, z);
      double res = 0, scale = 1;
      for (const Complex& c : pv) res = std::max(res, std::abs(c));
      for (const Complex& c : z) scale = std::max(scale, std::abs(c));
      if (res <= opt.tol * scale * scale) {
        converged = true;
        break;
      }
      const auto jv = cleared_jacobian(n, z);
      MatrixXcd J(n, n);
      VectorXcd P(n);
      for (int i = 0; i < n; ++i) {
        P(i) = pv[i];
        for (int j = 0; j < n; ++j) J(i, j) = jv[i][j];
      }
      const VectorXcd delta = J.fullPivLu().solve(P);
      if (!delta.allFinite()) break;
      // Damped step: back off until the residual actually decreases.
      double alpha = 1.0;
      std::vector<Complex> znew(n);
      for (int half = 0; half < 5; ++half, alpha *= 0.5) {
        for (int k = 0; k < n; ++k) znew[k] = z[k] - alpha * delta(k);
        if (residual(znew) < res) break;
      }
      z = znew;
    }
    if (abandoned) {
      ++st.deflected;
      continue;
    }
    if (hyperplane) {
      ++st.filtered_small;
      continue;
    }
    if (!converged) continue;
    ++st.converged;

    double minmod = std::abs(z[0]);
    for (const Complex& c : z) minmod = std::min(minmod, std::abs(c));
    if (minmod < opt.min_modulus) {
      ++st.filtered_small;
      continue;
    }
    bool dup = false;
    for (const auto& r : roots)
      if (point_distance(z, r) < opt.dedupe_tol) dup = true;
    if (!dup) roots.push_back(z);
  }

  std::vector<CriticalPoint> out;
  for (auto& r : roots) {
    CriticalPoint cp = finish_point(n, r);
    // Verification against the rational gradient, not the cleared proxy.
    if (cp.grad_norm > 1e-8) continue;
    out.push_back(std::move(cp));
  }
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() < b.value.imag();
  });
  if (stats) *stats = st;
  return out;
}

double spectrum_match_distance(const std::vector<CriticalPoint>& pts,
                               const std::vector<Complex>& reference) {
  if (pts.size() != reference.size())
    return std::numeric_limits<double>::infinity();
  std::vector<Complex> rem = reference;
  double worst = 0;
  for (const auto& p : pts) {
    std::size_t best = rem.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rem.size(); ++i)
      if (std::abs(rem[i] - p.value) < best_d) {
        best_d = std::abs(rem[i] - p.value);
        best = i;
      }
    if (best == rem.size()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, best_d);
    rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

namespace {

json point_to_json(const CriticalPoint& p) {
  json jz = json::array();
  for (const Complex& c : p.z) jz.push_back({c.real(), c.imag()});
  return json{{"z", jz},
              {"value", {p.value.real(), p.value.imag()}},
              {"grad_norm", p.grad_norm},
              {"min_abs_coord", p.min_abs_coord},
              {"hessian_min_singular", p.hessian_min_singular},
              {"nondegenerate", p.nondegenerate}};
}

}  // namespace

std::string points_to_json(int n, const std::vector<CriticalPoint>& pts,
                           const SolveStats& stats) {
  json j;
  j["kind"] = "critical_points";
  j["n"] = n;
  j["count"] = pts.size();
  j["stats"] = {{"starts", stats.starts},
                {"converged", stats.converged},
                {"filtered_small", stats.filtered_small},
                {"deflected", stats.deflected}};
  j["points"] = json::array();
  for (const auto& p : pts) j["points"].push_back(point_to_json(p));
  return j.dump(2) + "\n";
}

void write_points_json(const std::string& path, int n,
                       const std::vector<CriticalPoint>& pts,
                       const SolveStats& stats) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << points_to_json(n, pts, stats);
}

PointsFile read_points_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open points file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad points file " + path + ": " + e.what());
  }
  if (j.value("kind", "") != "critical_points")
    throw std::runtime_error("bad points file " + path +
                             ": kind is not critical_points");
  PointsFile f;
  f.n = j.at("n").get<int>();
  for (const auto& jp : j.at("points")) {
    CriticalPoint p;
    for (const auto& jz : jp.at("z"))
      p.z.emplace_back(jz.at(0).get<double>(), jz.at(1).get<double>());
    p.value = Complex(jp.at("value").at(0).get<double>(),
                      jp.at("value").at(1).get<double>());
    p.grad_norm = jp.value("grad_norm", 0.0);
    p.min_abs_coord = jp.value("min_abs_coord", 0.0);
    p.hessian_min_singular = jp.value("hessian_min_singular", 0.0);
    p.nondegenerate = jp.value("nondegenerate", false);
    f.points.push_back(std::move(p));
  }
  return f;
}

}  // namespace gzkit
