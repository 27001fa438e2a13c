#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gzkit/flow.hpp"
#include "gzkit/geometry.hpp"
#include "gzkit/rng.hpp"

using namespace gzkit;

namespace {

// Finite-difference check that along the integrated path t really marches
// as 1 - s: compare consecutive samples.
void check_t_march(const FlowTrace& tr) {
  for (const FlowSample& sm : tr.samples) {
    CHECK(sm.t_dev <= 1e-9);
    CHECK(sm.norm_residual <= 1e-11);
    CHECK(sm.family_residual <= 1e-11);
  }
}

FlowConfig fast_config(double s_end = 0.99) {
  FlowConfig cfg;
  cfg.s_end = s_end;
  cfg.rtol = 1e-9;
  cfg.atol = 1e-11;
  return cfg;
}

}  // namespace

TEST_CASE("family value splits into fixed and degenerating parts") {
  CVec z = {{1, 0}, {0, 1}, {0, 0}, {2, 0}};
  // z1^2 + z2^2 + z3^2 = 1 - 1 = 0; tail = 4.
  CHECK(std::abs(family_value(z, Complex(1, 0)) - Complex(4, 0)) < 1e-15);
  CHECK(std::abs(family_value(z, Complex(0, 0))) < 1e-15);
  CHECK(std::abs(family_value(z, Complex(0.5, 0)) - Complex(2, 0)) < 1e-15);
  CHECK_THROWS_AS(family_value({{1, 0}}, Complex(1, 0)), std::invalid_argument);
}

TEST_CASE("involution residual vanishes exactly on the gauged real locus") {
  // (x, i y) with x real vector, y real: fixed by the involution.
  CVec z = {{0.3, 0}, {-0.7, 0}, {0.64, 0}, {0, 1.1}};
  CHECK(involution_residual(z) < 1e-12);
  // The same point rotated by a global phase is still on the gauged locus.
  const Complex u = std::polar(1.0, 0.83);
  CVec zu(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) zu[i] = u * z[i];
  CHECK(involution_residual(zu) < 1e-10);
  // A genuinely complex point is far from it.
  CVec w = {{0.3, 0.4}, {-0.7, 0.2}, {0.64, -0.5}, {0.3, 1.1}};
  CHECK(involution_residual(w) > 0.1);
}

TEST_CASE("singular distance measures the head fraction") {
  CVec z = {{1, 0}, {0, 0}, {0, 0}, {1, 0}};
  CHECK(singular_distance(z) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CVec w = {{0, 0}, {0, 0}, {0, 0}, {1, 0}};
  CHECK(singular_distance(w) == 0.0);
}

TEST_CASE("flow rejects bad starting data") {
  CVec off = {{1, 0}, {1, 0}, {0, 0}, {0, 0}};  // sum z^2 = 2 != 0
  CHECK_THROWS_AS(run_flow(off, "generic", fast_config()),
                  std::invalid_argument);
  Rng rng(5);
  CVec z0 = random_quadric_point(2, rng);
  FlowConfig bad = fast_config();
  bad.s_end = 1.5;
  CHECK_THROWS_AS(run_flow(z0, "generic", bad), std::invalid_argument);
}

TEST_CASE("sphere trajectory matches the analytic collapse profile") {
  // For a starting point (x, i) with x a real unit 3-vector (n = 2), the
  // trajectory stays in the ansatz z = (a x, i b) with
  //   a^2 = 2t / (1 + t),  b^2 = 2 / (1 + t),
  // because that is the unique curve in the ansatz satisfying both
  // constraints for each t. Its singular distance is sqrt(t / (1 + t)).
  Rng rng(11);
  const CVec z0 = sample_vanishing_sphere(2, rng);
  FlowTrace tr = run_flow(z0, "sphere", fast_config(0.99));
  check_t_march(tr);

  for (const FlowSample& sm : tr.samples) {
    const double t = 1.0 - sm.s;
    const double expect = std::sqrt(t / (1.0 + t));
    CHECK(sm.singular_distance == doctest::Approx(expect).epsilon(1e-6));
    CHECK(sm.involution_residual <= 1e-8);
    CHECK(sm.gz_drift <= 1e-8);  // the fibration values stay pinned at 0
  }
  // Endpoint: t = 0.01 -> distance sqrt(0.01/1.01) ~ 0.0995.
  CHECK(tr.samples.back().singular_distance ==
        doctest::Approx(std::sqrt(0.01 / 1.01)).epsilon(1e-6));
}

TEST_CASE("sphere collapse holds for every real starting direction (n = 2, 3)") {
  for (int n : {2, 3}) {
    Rng rng(100 + n);
    for (int rep = 0; rep < 3; ++rep) {
      const CVec z0 = sample_vanishing_sphere(n, rng);
      FlowTrace tr = run_flow(z0, "sphere", fast_config(0.99));
      const double t_end = 1.0 - tr.samples.back().s;
      const double expect = std::sqrt(t_end / (1.0 + t_end));
      // The closed-form profile is exact only for n = 2, where every sphere
      // direction lies in the non-degenerating block; for n = 3 one
      // direction degenerates and only the qualitative collapse holds.
      if (n == 2)
        CHECK(tr.samples.back().singular_distance ==
              doctest::Approx(expect).epsilon(1e-5));
      CHECK(tr.samples.back().singular_distance <= 0.2);
      const double s_final = tr.samples.back().s;
      for (const FlowSample& sm : tr.samples)
        if (sm.s >= s_final / 2)
          CHECK(tr.samples.back().singular_distance <=
                sm.singular_distance + 1e-9);
      CHECK(tr.samples.back().involution_residual <= 1e-7);
      CHECK(tr.samples.back().head_drift <= 1e-9);
    }
  }
}

TEST_CASE("torus trajectories stay away from the critical locus") {
  for (int n : {2, 3}) {
    Rng rng(7 * n + 1);
    std::vector<FlowTrace> traces;
    for (int rep = 0; rep < 3; ++rep) {
      const CVec z0 = sample_monotone_torus(n, rng);
      FlowTrace tr = run_flow(z0, "torus", fast_config(0.99));
      check_t_march(tr);
      for (const FlowSample& sm : tr.samples) {
        CHECK(sm.singular_distance >= 0.3);
        // The fibration components built from z_1..z_3 are conserved for
        // every n (the degeneration leaves that block untouched).
        CHECK(sm.head_drift <= 1e-9);
      }
      // All fibre phases land on the same limit level: the endpoint
      // distance is 1/sqrt(n) independently of the starting phases.
      CHECK(tr.samples.back().singular_distance ==
            doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(1e-3));
      traces.push_back(std::move(tr));
    }
    if (n == 2) {
      // For n = 2 the degeneration is adapted to the fibration and the
      // endpoint moduli |z_4|^2 agree coordinate-by-coordinate too.
      const double ref = std::norm(traces.front().z_end[3]);
      for (const FlowTrace& tr : traces)
        CHECK(std::norm(tr.z_end[3]) == doctest::Approx(ref).epsilon(5e-3));
    }
  }
}

TEST_CASE("aggregate report passes on honest data and localizes faults") {
  const int n = 2;
  std::vector<FlowTrace> traces;
  {
    Rng rng(21);
    for (int rep = 0; rep < 2; ++rep)
      traces.push_back(
          run_flow(sample_vanishing_sphere(n, rng), "sphere", fast_config()));
    for (int rep = 0; rep < 2; ++rep)
      traces.push_back(
          run_flow(sample_monotone_torus(n, rng), "torus", fast_config()));
  }
  FlowReport rep = analyze_traces(traces);
  CHECK(rep.pass);
  CHECK(rep.failures.empty());
  CHECK(rep.sphere.count == 2);
  CHECK(rep.torus.count == 2);
  CHECK(rep.sphere.mean_final_distance <= 0.2);
  CHECK(rep.torus.min_distance >= 0.3);

  SUBCASE("tampered singular distance flips the sphere verdict") {
    auto bad = traces;
    for (FlowTrace& tr : bad)
      if (tr.cls == "sphere")
        for (FlowSample& sm : tr.samples) sm.singular_distance = 0.9;
    FlowReport r2 = analyze_traces(bad);
    CHECK_FALSE(r2.pass);
    CHECK_FALSE(r2.sphere_collapses);
    CHECK(r2.torus_stays_far);  // the torus half is untouched
  }
  SUBCASE("tampered t breaks the exact-transport verdict") {
    auto bad = traces;
    bad[0].samples.back().t_dev = 1e-3;
    FlowReport r2 = analyze_traces(bad);
    CHECK_FALSE(r2.pass);
    CHECK_FALSE(r2.transport_exact);
  }
  SUBCASE("missing class is reported as a failure") {
    std::vector<FlowTrace> only_sphere(traces.begin(), traces.begin() + 2);
    FlowReport r2 = analyze_traces(only_sphere);
    CHECK_FALSE(r2.pass);
    CHECK_FALSE(r2.torus_stays_far);
  }
}

TEST_CASE("trace files round-trip through JSONL") {
  Rng rng(31);
  FlowConfig cfg = fast_config(0.5);
  FlowTrace tr = run_flow(sample_monotone_torus(2, rng), "torus", cfg);

  const std::string path = "test_trace_roundtrip.jsonl";
  {
    std::ofstream out(path);
    append_trace_jsonl(out, tr);
    append_trace_jsonl(out, tr);  // concatenated traces in one file
  }
  auto back = read_traces_jsonl(path);
  REQUIRE(back.size() == 2);
  for (const FlowTrace& b : back) {
    CHECK(b.n == tr.n);
    CHECK(b.cls == tr.cls);
    REQUIRE(b.samples.size() == tr.samples.size());
    CHECK(b.samples.back().s == tr.samples.back().s);
    CHECK(b.samples.back().singular_distance ==
          tr.samples.back().singular_distance);
    CHECK(b.steps_accepted == tr.steps_accepted);
    REQUIRE(b.z_end.size() == tr.z_end.size());
    for (std::size_t i = 0; i < b.z_end.size(); ++i)
      CHECK(std::abs(b.z_end[i] - tr.z_end[i]) < 1e-15);
  }
  // Analysis works identically on reloaded traces.
  FlowReport r1 = analyze_traces({tr});
  FlowReport r2 = analyze_traces({back[0]});
  CHECK(r1.sphere_collapses == r2.sphere_collapses);
  CHECK(r1.torus.min_distance == doctest::Approx(r2.torus.min_distance));
  std::remove(path.c_str());

  CHECK_THROWS(read_traces_jsonl("no_such_trace_file.jsonl"));
  {
    std::ofstream out(path);
    out << "{\"s\": 0.1}\n";  // sample line with no header
  }
  CHECK_THROWS(read_traces_jsonl(path));
  std::remove(path.c_str());
}

TEST_CASE("report serializes to JSON with verdicts") {
  Rng rng(41);
  std::vector<FlowTrace> traces;
  traces.push_back(
      run_flow(sample_vanishing_sphere(2, rng), "sphere", fast_config()));
  traces.push_back(
      run_flow(sample_monotone_torus(2, rng), "torus", fast_config()));
  traces.push_back(
      run_flow(sample_monotone_torus(2, rng), "torus", fast_config()));
  FlowReport rep = analyze_traces(traces);
  const std::string js = report_to_json(rep);
  CHECK(js.find("\"kind\": \"flow_report\"") != std::string::npos);
  CHECK(js.find("\"pass\": true") != std::string::npos);
  CHECK(js.find("min_distance") != std::string::npos);
}
