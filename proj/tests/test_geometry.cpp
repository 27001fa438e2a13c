#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "gzkit/geometry.hpp"

using namespace gzkit;

namespace {

double inf_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("membership residuals on hand-built points") {
  // (1, i, 0): |z|^2 = 2, sum z^2 = 1 - 1 = 0.
  const CVec z{Complex(1, 0), Complex(0, 1), Complex(0, 0)};
  const PointResiduals r = quadric_residuals(z);
  CHECK(r.norm == 0.0);
  CHECK(r.quadric == 0.0);
  CHECK(is_quadric_point(z));
  // Scaled out of the sphere slice.
  const CVec w{Complex(2, 0), Complex(0, 2), Complex(0, 0)};
  CHECK_FALSE(is_quadric_point(w));
  // On the sphere slice but off the quadric.
  const CVec v{Complex(1, 0), Complex(1, 0), Complex(0, 0)};
  CHECK_FALSE(is_quadric_point(v));
}

TEST_CASE("random quadric points satisfy both constraints to roundoff") {
  Rng rng(3);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const CVec z = random_quadric_point(n, rng);
      REQUIRE(z.size() == static_cast<std::size_t>(n + 2));
      const PointResiduals r = quadric_residuals(z);
      INFO("n = ", n);
      CHECK(r.norm < 1e-12);
      CHECK(r.quadric < 1e-12);
    }
}

TEST_CASE("fibration values: the two evaluation routes agree") {
  Rng rng(5);
  GeometryConfig cfg;
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 8; ++trial) {
      const CVec z = random_quadric_point(n, rng);
      const auto a = gz_closed(cfg, z);
      const auto b = gz_matrix(cfg, z);
      REQUIRE(a.size() == static_cast<std::size_t>(n));
      REQUIRE(b.size() == a.size());
      INFO("n = ", n, " trial ", trial);
      CHECK(inf_dist(a, b) < 1e-10);
    }
  // Also off the quadric slice: the maps are defined on all of C^m.
  for (int trial = 0; trial < 5; ++trial) {
    CVec z(6);
    for (Complex& c : z) c = Complex(rng.normal(), rng.normal());
    CHECK(inf_dist(gz_closed(cfg, z), gz_matrix(cfg, z)) < 1e-10);
  }
}

TEST_CASE("first component is the signed pairing entry") {
  Rng rng(9);
  GeometryConfig cfg;
  for (int trial = 0; trial < 10; ++trial) {
    const CVec z = random_quadric_point(3, rng);
    const auto phi = gz_closed(cfg, z);
    CHECK(phi[0] == doctest::Approx(pairing_entry(cfg, z, 0, 1)).epsilon(1e-12));
    // And the matrix route restores the same sign.
    const auto phim = gz_matrix(cfg, z);
    CHECK(phim[0] == doctest::Approx(phi[0]).epsilon(1e-9));
  }
}

TEST_CASE("fibration values are nested and bounded by lambda") {
  Rng rng(11);
  GeometryConfig cfg;
  for (int trial = 0; trial < 10; ++trial) {
    const CVec z = random_quadric_point(4, rng);
    const auto phi = gz_closed(cfg, z);
    // |first| <= second <= ... <= lambda (interlacing for nested blocks).
    CHECK(std::abs(phi[0]) <= phi[1] + 1e-12);
    for (std::size_t k = 2; k < phi.size(); ++k)
      CHECK(phi[k - 1] <= phi[k] + 1e-12);
    CHECK(phi.back() <= cfg.lambda + 1e-9);
  }
}

TEST_CASE("disc-bundle lift lands on the quadric and scales the values") {
  Rng rng(13);
  GeometryConfig cfg;
  for (int n = 2; n <= 5; ++n)
    for (int trial = 0; trial < 6; ++trial) {
      const CVec w = random_quadric_point(n - 1, rng);
      const double rho = rng.uniform(0.0, 1.8);
      const Complex zeta =
          std::polar(std::sqrt(rho), rng.uniform(0.0, 2.0 * std::numbers::pi));
      const CVec z = biran_lift(w, zeta);
      REQUIRE(z.size() == w.size() + 1);
      const PointResiduals r = quadric_residuals(z);
      INFO("n = ", n, " rho = ", rho);
      CHECK(r.norm < 1e-12);
      CHECK(r.quadric < 1e-12);

      const auto phi_w = gz_closed(cfg, w);
      const auto phi_z = gz_closed(cfg, z);
      REQUIRE(phi_z.size() == phi_w.size() + 1);
      const double factor = 1.0 - rho / 2.0;
      for (std::size_t k = 0; k < phi_w.size(); ++k)
        CHECK(phi_z[k] == doctest::Approx(factor * phi_w[k]).epsilon(1e-10));
      CHECK(phi_z.back() == doctest::Approx(cfg.lambda * factor).epsilon(1e-10));
    }
  CHECK_THROWS(biran_lift(CVec{Complex(1, 0), Complex(0, 1), Complex(0, 0)},
                          Complex(1.5, 0)));  // rho = 2.25 >= 2
}

TEST_CASE("monotone fibre values") {
  CHECK(monotone_fiber(1) == std::vector<double>{0.0});
  CHECK(monotone_fiber(2) == std::vector<double>{0.0, 1.0});
  const auto u3 = monotone_fiber(3);
  CHECK(u3[0] == 0.0);
  CHECK(u3[1] == doctest::Approx(2.0 / 3.0));
  CHECK(u3[2] == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("torus samples sit on the monotone fibre") {
  Rng rng(17);
  GeometryConfig cfg;
  for (int n = 1; n <= 6; ++n) {
    const auto u = monotone_fiber(n, cfg);
    for (int trial = 0; trial < 8; ++trial) {
      const CVec z = sample_monotone_torus(n, rng);
      REQUIRE(z.size() == static_cast<std::size_t>(n + 2));
      const PointResiduals r = quadric_residuals(z);
      INFO("n = ", n);
      CHECK(r.norm < 1e-12);
      CHECK(r.quadric < 1e-12);
      CHECK(inf_dist(gz_closed(cfg, z), u) < 1e-12);
    }
  }
}

TEST_CASE("sphere samples have exactly vanishing fibration values") {
  Rng rng(19);
  GeometryConfig cfg;
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 8; ++trial) {
      const CVec z = sample_vanishing_sphere(n, rng);
      REQUIRE(z.size() == static_cast<std::size_t>(n + 2));
      const PointResiduals r = quadric_residuals(z);
      CHECK(r.norm < 1e-15);
      CHECK(r.quadric < 1e-15);
      for (double v : gz_closed(cfg, z)) CHECK(v == 0.0);  // exact
      for (double v : gz_matrix(cfg, z)) CHECK(std::abs(v) < 1e-14);
    }
}

TEST_CASE("sphere-torus level separation") {
  Rng rng(23);
  for (int n = 2; n <= 6; ++n) {
    const DisjointnessReport rep = disjointness_gap(n, 50, rng);
    INFO("n = ", n);
    CHECK(rep.pass);
    CHECK(rep.min_gap ==
          doctest::Approx(2.0 * (n - 1) / n).epsilon(1e-12));
    CHECK(rep.threshold == doctest::Approx(2.0 / n - 1e-8));
    CHECK(rep.max_sphere_value == 0.0);
    CHECK(rep.samples == 50);
  }
  CHECK_THROWS(disjointness_gap(1, 10, rng));
}

TEST_CASE("point clouds round trip through JSON") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gzkit_test_clouds";
  fs::create_directories(dir);
  const std::string path = (dir / "cloud.json").string();

  Rng rng(29);
  PointCloud c;
  c.n = 3;
  c.cls = "torus";
  for (int i = 0; i < 5; ++i) c.points.push_back(sample_monotone_torus(3, rng));
  write_cloud_json(path, c);
  const PointCloud d = read_cloud_json(path);
  CHECK(d.n == 3);
  CHECK(d.cls == "torus");
  REQUIRE(d.points.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < c.points[i].size(); ++k)
      CHECK(std::abs(d.points[i][k] - c.points[i][k]) == 0.0);

  {
    std::ofstream bad(dir / "bad.json");
    bad << "{\"kind\": \"critical_points\"}\n";
  }
  CHECK_THROWS(read_cloud_json((dir / "bad.json").string()));
  fs::remove_all(dir);
}
