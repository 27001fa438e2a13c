#include "gzkit/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gzkit {

namespace {

using nlohmann::json;

double norm_sq(const CVec& z) {
  double s = 0;
  for (const Complex& c : z) s += std::norm(c);
  return s;
}

Complex quadric_form(const CVec& z) {
  Complex s = 0;
  for (const Complex& c : z) s += c * c;
  return s;
}

void check_dim(const CVec& z, int min_dim) {
  if (static_cast<int>(z.size()) < min_dim)
    throw std::invalid_argument("geometry: point has fewer than " +
                                std::to_string(min_dim) + " coordinates");
}

}  // namespace

PointResiduals quadric_residuals(const CVec& z, const GeometryConfig& cfg) {
  PointResiduals r;
  r.norm = std::abs(norm_sq(z) - cfg.norm2);
  r.quadric = std::abs(quadric_form(z));
  return r;
}

bool is_quadric_point(const CVec& z, double tol, const GeometryConfig& cfg) {
  const PointResiduals r = quadric_residuals(z, cfg);
  return r.norm <= tol && r.quadric <= tol;
}

double pairing_entry(const GeometryConfig& cfg, const CVec& z, int j, int k) {
  check_dim(z, std::max(j, k) + 1);
  const double scale = cfg.lambda / norm_sq(z);
  return -2.0 * scale * std::imag(z[j] * std::conj(z[k]));
}

std::vector<double> gz_closed(const GeometryConfig& cfg, const CVec& z) {
  const int m = static_cast<int>(z.size());
  check_dim(z, 3);
  const double n2 = norm_sq(z);
  if (n2 <= 0) throw std::domain_error("gz_closed: zero vector");
  const double scale = cfg.lambda / n2;

  std::vector<double> out;
  out.reserve(m - 2);
  // Signed first component.
  out.push_back(-2.0 * scale * std::imag(z[0] * std::conj(z[1])));
  // Running Frobenius accumulation for the nested blocks.
  double frob2 = std::norm(z[0] * std::conj(z[1]) - std::conj(z[0]) * z[1]);
  for (int k = 3; k <= m - 1; ++k) {
    const int new_idx = k - 1;  // 0-based index of the row/column added
    for (int i = 0; i < new_idx; ++i)
      frob2 += std::norm(z[i] * std::conj(z[new_idx]) -
                         std::conj(z[i]) * z[new_idx]);
    out.push_back(scale * std::sqrt(frob2));
  }
  return out;
}

std::vector<double> gz_matrix(const GeometryConfig& cfg, const CVec& z) {
  const int m = static_cast<int>(z.size());
  check_dim(z, 3);
  const double n2 = norm_sq(z);
  if (n2 <= 0) throw std::domain_error("gz_matrix: zero vector");
  const double scale = cfg.lambda / n2;

  Eigen::MatrixXd A(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      A(j, k) = -2.0 * scale * std::imag(z[j] * std::conj(z[k]));

  std::vector<double> out;
  out.reserve(m - 2);
  for (int k = 2; k <= m - 1; ++k) {
    // iA on the leading block is Hermitian; its largest eigenvalue is the
    // level value. The first block keeps its symplectic sign (Pfaffian).
    Eigen::MatrixXcd H =
        Complex(0, 1) * A.topLeftCorner(k, k).cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    double v = es.eigenvalues().maxCoeff();
    if (k == 2 && A(0, 1) < 0) v = -v;
    out.push_back(v);
  }
  return out;
}

CVec random_quadric_point(int n, Rng& rng, const GeometryConfig& cfg) {
  if (n < 1) throw std::invalid_argument("random_quadric_point: need n >= 1");
  const int m = n + 2;
  std::vector<double> x(m), y(m);
  for (int i = 0; i < m; ++i) {
    x[i] = rng.normal();
    y[i] = rng.normal();
  }
  // Gram-Schmidt: orthonormal pair (x, y).
  auto dot = [m](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += a[i] * b[i];
    return s;
  };
  double nx = std::sqrt(dot(x, x));
  for (double& v : x) v /= nx;
  const double xy = dot(x, y);
  for (int i = 0; i < m; ++i) y[i] -= xy * x[i];
  double ny = std::sqrt(dot(y, y));
  for (double& v : y) v /= ny;

  const double half = std::sqrt(cfg.norm2 / 2.0);
  CVec z(m);
  for (int i = 0; i < m; ++i) z[i] = Complex(half * x[i], half * y[i]);
  return z;
}

CVec biran_lift(const CVec& w, Complex zeta) {
  check_dim(w, 3);
  const double rho = std::norm(zeta);
  if (rho >= 2.0)
    throw std::domain_error("biran_lift: fibre coordinate outside the disc");
  const double alpha = 1.0 - rho / 4.0;
  const Complex beta = zeta * zeta / 4.0;
  CVec z(w.size() + 1);
  for (std::size_t i = 0; i < w.size(); ++i)
    z[i] = alpha * w[i] - beta * std::conj(w[i]);
  z[w.size()] = std::sqrt(alpha) * zeta;
  return z;
}

std::vector<double> monotone_fiber(int n, const GeometryConfig& cfg) {
  if (n < 1) throw std::invalid_argument("monotone_fiber: need n >= 1");
  std::vector<double> u(n);
  for (int k = 0; k < n; ++k) u[k] = (cfg.lambda / 2.0) * 2.0 * k / n;
  return u;
}

CVec sample_monotone_torus(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_monotone_torus: need n >= 1");
  // Equatorial circle of Q^1.
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  CVec z{Complex(std::cos(phi), 0), Complex(std::sin(phi), 0), Complex(0, 1)};
  // Monotone lifts: |zeta_m|^2 = 2/m produces level spacing 2 - 2/m.
  for (int m = 2; m <= n; ++m) {
    const double rho = 2.0 / m;
    const Complex zeta = std::polar(std::sqrt(rho),
                                    rng.uniform(0.0, 2.0 * std::numbers::pi));
    z = biran_lift(z, zeta);
  }
  return z;
}

CVec sample_vanishing_sphere(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_vanishing_sphere: need n >= 1");
  std::vector<double> x(n + 1);
  double s = 0;
  do {
    s = 0;
    for (double& v : x) {
      v = rng.normal();
      s += v * v;
    }
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  CVec z(n + 2);
  for (int i = 0; i <= n; ++i) z[i] = Complex(x[i] * inv, 0);
  z[n + 1] = Complex(0, 1);
  return z;
}

DisjointnessReport disjointness_gap(int n, int samples, Rng& rng,
                                    const GeometryConfig& cfg) {
  if (n < 2)
    throw std::invalid_argument("disjointness_gap: need n >= 2 (the sphere "
                                "and torus coincide on the conic)");
  DisjointnessReport rep;
  rep.n = n;
  rep.samples = samples;
  const std::vector<double> u = monotone_fiber(n, cfg);
  rep.threshold = (cfg.lambda / 2.0) * 2.0 / n - 1e-8;
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const CVec z = sample_vanishing_sphere(n, rng);
    const std::vector<double> phi = gz_closed(cfg, z);
    double gap = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      gap = std::max(gap, std::abs(phi[k] - u[k]));
      rep.max_sphere_value = std::max(rep.max_sphere_value, std::abs(phi[k]));
    }
    rep.min_gap = std::min(rep.min_gap, gap);
  }
  rep.pass = rep.min_gap >= rep.threshold;
  return rep;
}

std::string cloud_to_json(const PointCloud& cloud, const GeometryConfig& cfg) {
  json j;
  j["kind"] = "point_cloud";
  j["n"] = cloud.n;
  j["class"] = cloud.cls;
  j["count"] = cloud.points.size();
  j["points"] = json::array();
  for (const CVec& z : cloud.points) {
    json jz = json::array();
    for (const Complex& c : z) jz.push_back({c.real(), c.imag()});
    const PointResiduals r = quadric_residuals(z, cfg);
    j["points"].push_back({{"z", jz},
                           {"gz", gz_closed(cfg, z)},
                           {"norm_residual", r.norm},
                           {"quadric_residual", r.quadric}});
  }
  return j.dump(2) + "\n";
}

void write_cloud_json(const std::string& path, const PointCloud& cloud,
                      const GeometryConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << cloud_to_json(cloud, cfg);
}

PointCloud read_cloud_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point cloud: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad point cloud " + path + ": " + e.what());
  }
  if (j.value("kind", "") != "point_cloud")
    throw std::runtime_error("bad point cloud " + path +
                             ": kind is not point_cloud");
  PointCloud c;
  c.n = j.at("n").get<int>();
  c.cls = j.value("class", "generic");
  for (const auto& jp : j.at("points")) {
    CVec z;
    for (const auto& jz : jp.at("z"))
      z.emplace_back(jz.at(0).get<double>(), jz.at(1).get<double>());
    c.points.push_back(std::move(z));
  }
  return c;
}

}  // namespace gzkit
