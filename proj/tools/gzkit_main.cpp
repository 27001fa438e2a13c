// Command-line front end: every operation of the library behind stable
// subcommands with JSON output, so runs can be scripted and diffed.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gzkit/algebra.hpp"
#include "gzkit/flow.hpp"
#include "gzkit/geometry.hpp"
#include "gzkit/harness.hpp"
#include "gzkit/novikov.hpp"
#include "gzkit/spectral.hpp"
#include "gzkit/superpotential.hpp"

using namespace gzkit;
using nlohmann::ordered_json;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

AlgebraTable table_from(int n, const std::string& table_path) {
  if (!table_path.empty()) return load_table(table_path);
  return builtin_quadric_table(n);
}

ordered_json complex_json(const Complex& c) {
  return ordered_json::array({c.real(), c.imag()});
}

int cmd_algebra_validate(int n, const std::string& table_path) {
  AlgebraTable t = table_from(n, table_path);
  ValidationReport rep = validate_table(t);
  ordered_json j;
  j["kind"] = "table_validation";
  j["name"] = t.name;
  j["dim"] = t.dim();
  j["ok"] = rep.ok();
  ordered_json issues = ordered_json::array();
  for (const ValidationIssue& is : rep.issues) {
    ordered_json ji;
    ji["check"] = is.kind;
    ji["i"] = is.i;
    ji["j"] = is.j;
    ji["k"] = is.k;
    ji["detail"] = is.detail;
    issues.push_back(ji);
  }
  j["issues"] = issues;
  emit(j.dump(2), "");
  return rep.ok() ? 0 : 1;
}

int cmd_algebra_spectrum(int n, const std::string& table_path, double T) {
  AlgebraTable t = table_from(n, table_path);
  ordered_json j;
  j["kind"] = "c1_spectrum";
  j["name"] = t.name;
  j["T"] = T;
  ordered_json vals = ordered_json::array();
  for (const Complex& ev : c1_spectrum(t, T)) vals.push_back(complex_json(ev));
  j["eigenvalues"] = vals;
  emit(j.dump(2), "");
  return 0;
}

int cmd_algebra_idempotents(int n, const std::string& table_path,
                            std::uint64_t seed) {
  AlgebraTable t = table_from(n, table_path);
  IdempotentDecomposition dec = primitive_idempotents(t, seed);
  ordered_json j;
  j["kind"] = "idempotent_decomposition";
  j["name"] = t.name;
  j["semisimple"] = dec.semisimple;
  j["exact"] = dec.exact;
  j["count"] = dec.idempotents.size();
  ordered_json entries = ordered_json::array();
  for (size_t i = 0; i < dec.idempotents.size(); ++i) {
    ordered_json e;
    e["label"] = dec.labels[i];
    e["c1_eigenvalue"] = complex_json(dec.c1_eigenvalues[i]);
    e["exponent_denominator"] = dec.exponent_denominators[i];
    ordered_json coords = ordered_json::array();
    for (const NovikovScalar& s : dec.idempotents[i]) coords.push_back(s.str());
    e["coordinates"] = coords;
    entries.push_back(e);
  }
  j["idempotents"] = entries;
  j["notes"] = dec.notes;
  emit(j.dump(2), "");
  return dec.semisimple ? 0 : 1;
}

int cmd_algebra_dump(int n, const std::string& table_path,
                     const std::string& out) {
  AlgebraTable t = table_from(n, table_path);
  emit(table_to_string(t), out);
  return 0;
}

int cmd_superpotential_solve(int n, int starts, std::uint64_t seed,
                             const std::string& out) {
  SolveOptions opt;
  opt.starts = starts;
  opt.seed = seed;
  SolveStats stats;
  std::vector<CriticalPoint> pts = find_critical_points(n, opt, &stats);
  emit(points_to_json(n, pts, stats), out);
  return static_cast<int>(pts.size()) == n ? 0 : 1;
}

int cmd_geometry_gz_eval(const std::string& cloud_path, int n, int count,
                         const std::string& cls, std::uint64_t seed) {
  GeometryConfig gc;
  PointCloud cloud;
  if (!cloud_path.empty()) {
    cloud = read_cloud_json(cloud_path);
  } else {
    cloud.n = n;
    cloud.cls = cls;
    Rng rng = Rng(seed).stream(fnv1a64("cli.gz-eval"));
    for (int i = 0; i < count; ++i) {
      if (cls == "torus") cloud.points.push_back(sample_monotone_torus(n, rng));
      else if (cls == "sphere")
        cloud.points.push_back(sample_vanishing_sphere(n, rng));
      else cloud.points.push_back(random_quadric_point(n, rng, gc));
    }
  }
  ordered_json j;
  j["kind"] = "fibration_values";
  j["n"] = cloud.n;
  j["class"] = cloud.cls;
  ordered_json rows = ordered_json::array();
  for (const CVec& z : cloud.points) {
    ordered_json row = ordered_json::array();
    for (double v : gz_closed(gc, z)) row.push_back(v);
    rows.push_back(row);
  }
  j["values"] = rows;
  ordered_json target = ordered_json::array();
  for (double v : monotone_fiber(cloud.n, gc)) target.push_back(v);
  j["monotone_level"] = target;
  emit(j.dump(2), "");
  return 0;
}

int cmd_geometry_biran_check(int n, int samples, std::uint64_t seed) {
  GeometryConfig gc;
  Rng rng = Rng(seed).stream(fnv1a64("cli.biran-check"));
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    CVec w = random_quadric_point(n - 1, rng, gc);
    double rho = rng.uniform(0.05, 1.9);
    double phi = rng.uniform(0.0, 6.283185307179586);
    Complex zeta = std::sqrt(rho) * Complex(std::cos(phi), std::sin(phi));
    CVec z = biran_lift(w, zeta);
    PointResiduals res = quadric_residuals(z, gc);
    worst = std::max(worst, std::max(res.norm, res.quadric));
    std::vector<double> base = gz_closed(gc, w);
    std::vector<double> lifted = gz_closed(gc, z);
    double scale = 1.0 - rho / 2.0;
    for (size_t k = 0; k < base.size(); ++k)
      worst = std::max(worst, std::abs(lifted[k] - scale * base[k]));
    worst = std::max(worst, std::abs(lifted.back() - gc.lambda * scale));
  }
  bool pass = worst <= 1e-9;
  ordered_json j;
  j["kind"] = "disc_bundle_lift_check";
  j["n"] = n;
  j["samples"] = samples;
  j["max_residual"] = worst;
  j["threshold"] = 1e-9;
  j["pass"] = pass;
  emit(j.dump(2), "");
  return pass ? 0 : 1;
}

int cmd_geometry_sample(const std::string& cls, int n, int count,
                        std::uint64_t seed, const std::string& out) {
  GeometryConfig gc;
  Rng rng = Rng(seed).stream(fnv1a64("cli.sample." + cls));
  PointCloud cloud;
  cloud.n = n;
  cloud.cls = cls;
  for (int i = 0; i < count; ++i)
    cloud.points.push_back(cls == "torus" ? sample_monotone_torus(n, rng)
                                          : sample_vanishing_sphere(n, rng));
  emit(cloud_to_json(cloud, gc), out);
  return 0;
}

int cmd_geometry_disjointness(int n, int samples, std::uint64_t seed) {
  Rng rng = Rng(seed).stream(fnv1a64("cli.disjointness"));
  DisjointnessReport rep = disjointness_gap(n, samples, rng);
  ordered_json j;
  j["kind"] = "disjointness_report";
  j["n"] = rep.n;
  j["samples"] = rep.samples;
  j["min_gap"] = rep.min_gap;
  j["threshold"] = rep.threshold;
  j["max_sphere_value"] = rep.max_sphere_value;
  j["pass"] = rep.pass;
  emit(j.dump(2), "");
  return rep.pass ? 0 : 1;
}

int cmd_flow_run(int n, const std::string& cls, int count, double s_end,
                 std::uint64_t seed, const std::string& out) {
  FlowConfig fc;
  fc.s_end = s_end;
  Rng rng = Rng(seed).stream(fnv1a64("cli.flow." + cls));
  std::vector<FlowTrace> traces;
  for (int i = 0; i < count; ++i) {
    CVec z0 = cls == "torus" ? sample_monotone_torus(n, rng)
                             : sample_vanishing_sphere(n, rng);
    traces.push_back(run_flow(z0, cls, fc));
  }
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    for (const FlowTrace& tr : traces) append_trace_jsonl(os, tr);
    std::cerr << "wrote " << traces.size() << " traces to " << out << "\n";
  } else {
    for (const FlowTrace& tr : traces) append_trace_jsonl(std::cout, tr);
  }
  return 0;
}

int cmd_flow_report(const std::vector<std::string>& files) {
  std::vector<FlowTrace> traces;
  for (const std::string& f : files) {
    std::vector<FlowTrace> part = read_traces_jsonl(f);
    traces.insert(traces.end(), part.begin(), part.end());
  }
  FlowReport rep = analyze_traces(traces);
  emit(report_to_json(rep), "");
  return rep.pass ? 0 : 1;
}

int cmd_model_separate(const std::string& space, int n,
                       const std::string& registry_path,
                       const std::string& table_path, std::uint64_t seed,
                       int points, const std::string& out) {
  SuperheavyRegistry reg;
  std::map<std::string, std::string> deps;
  if (!registry_path.empty()) {
    reg = read_registry_json(registry_path);
    if (!space.empty() && reg.space != space)
      throw std::runtime_error("registry space '" + reg.space +
                               "' does not match requested '" + space + "'");
    if (!table_path.empty())
      deps["table"] = table_to_string(load_table(table_path));
  } else {
    int dim = n;
    if (dim == 0) {
      if (space.size() < 2 || space[0] != 'Q')
        throw std::runtime_error(
            "need --n or a quadric --space like Q3 (or --registry for "
            "ingested spaces)");
      dim = std::stoi(space.substr(1));
    }
    GeometryConfig gc;
    Rng rng = Rng(seed).stream(fnv1a64("cli.model.separate"));
    PointCloud torus{dim, "torus", {}}, sphere{dim, "sphere", {}};
    for (int i = 0; i < points; ++i) {
      torus.points.push_back(sample_monotone_torus(dim, rng));
      sphere.points.push_back(sample_vanishing_sphere(dim, rng));
    }
    reg = quadric_registry(dim, region_from_cloud(gc, torus, "fibre-torus"),
                           region_from_cloud(gc, sphere, "vanishing-sphere"),
                           seed);
    deps["table"] = table_to_string(builtin_quadric_table(dim));
  }
  Certificate cert = separation_certificate(reg, deps);
  emit(certificate_to_json(cert), out);
  return cert.separated ? 0 : 1;
}

int cmd_suite(const std::string& config_path, std::uint64_t seed,
              bool seed_set, const std::string& out_dir,
              const std::string& table_dir) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = load_run_config(config_path);
  if (seed_set) cfg.seed = seed;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!table_dir.empty()) cfg.table_dir = table_dir;
  SuiteReport rep = run_suite(cfg);
  emit(suite_to_json(rep), "");
  return suite_exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "verification toolkit for the quadric fibration, its degeneration "
      "flow, and the attached algebraic invariants"};
  app.require_subcommand(1);

  // ---- algebra ---------------------------------------------------------
  auto* algebra = app.add_subcommand("algebra", "multiplication tables");
  algebra->require_subcommand(1);
  int a_n = 2;
  std::string a_table;
  double a_T = 1.0;
  std::uint64_t a_seed = 1;
  std::string a_out;

  auto* a_val = algebra->add_subcommand("validate", "check the table axioms");
  a_val->add_option("--n", a_n, "quadric dimension (built-in table)");
  a_val->add_option("--table", a_table, "explicit .qht file instead");
  a_val->callback([&] { std::exit(cmd_algebra_validate(a_n, a_table)); });

  auto* a_spec = algebra->add_subcommand(
      "spectrum", "eigenvalues of first-Chern-class multiplication");
  a_spec->add_option("--n", a_n, "quadric dimension");
  a_spec->add_option("--table", a_table, "explicit .qht file instead");
  a_spec->add_option("--T", a_T, "evaluation point of the series variable");
  a_spec->callback([&] { std::exit(cmd_algebra_spectrum(a_n, a_table, a_T)); });

  auto* a_idem = algebra->add_subcommand(
      "idempotents", "primitive idempotent decomposition");
  a_idem->add_option("--n", a_n, "quadric dimension");
  a_idem->add_option("--table", a_table, "explicit .qht file instead");
  a_idem->add_option("--seed", a_seed, "seed for the splitting element");
  a_idem->callback(
      [&] { std::exit(cmd_algebra_idempotents(a_n, a_table, a_seed)); });

  auto* a_dump = algebra->add_subcommand("dump-table", "write a .qht table");
  a_dump->add_option("--n", a_n, "quadric dimension");
  a_dump->add_option("--table", a_table, "round-trip an explicit file");
  a_dump->add_option("--out", a_out, "output path (default stdout)");
  a_dump->callback([&] { std::exit(cmd_algebra_dump(a_n, a_table, a_out)); });

  // ---- superpotential ---------------------------------------------------
  auto* sp = app.add_subcommand("superpotential", "Laurent potential solver");
  sp->require_subcommand(1);
  int s_n = 3;
  int s_starts = 200;
  std::uint64_t s_seed = 1;
  std::string s_out;
  auto* s_solve =
      sp->add_subcommand("solve", "find all critical points by multistart");
  s_solve->add_option("--n", s_n, "quadric dimension (>= 2)")->required();
  s_solve->add_option("--starts", s_starts, "number of Newton starts");
  s_solve->add_option("--seed", s_seed, "start-sampling seed");
  s_solve->add_option("--out", s_out, "output path (default stdout)");
  s_solve->callback(
      [&] { std::exit(cmd_superpotential_solve(s_n, s_starts, s_seed, s_out)); });

  // ---- geometry ----------------------------------------------------------
  auto* geo = app.add_subcommand("geometry", "fibration and Lagrangians");
  geo->require_subcommand(1);
  int g_n = 3;
  int g_count = 8;
  int g_samples = 200;
  std::uint64_t g_seed = 1;
  std::string g_cloud, g_out, g_cls = "generic";

  auto* g_eval = geo->add_subcommand(
      "gz-eval", "fibration values of sampled or stored points");
  g_eval->add_option("--cloud", g_cloud, "point-cloud JSON file");
  g_eval->add_option("--n", g_n, "quadric dimension (when sampling)");
  g_eval->add_option("--count", g_count, "points to sample");
  g_eval->add_option("--class", g_cls, "torus | sphere | generic");
  g_eval->add_option("--seed", g_seed, "sampling seed");
  g_eval->callback([&] {
    std::exit(cmd_geometry_gz_eval(g_cloud, g_n, g_count, g_cls, g_seed));
  });

  auto* g_biran = geo->add_subcommand(
      "biran-check",
      "disc-bundle lift lands on the quadric and scales the levels");
  g_biran->add_option("--n", g_n, "quadric dimension (>= 2)")->required();
  g_biran->add_option("--samples", g_samples, "number of random lifts");
  g_biran->add_option("--seed", g_seed, "sampling seed");
  g_biran->callback(
      [&] { std::exit(cmd_geometry_biran_check(g_n, g_samples, g_seed)); });

  auto* g_torus = geo->add_subcommand("sample-torus",
                                      "points of the monotone fibre torus");
  g_torus->add_option("--n", g_n, "quadric dimension")->required();
  g_torus->add_option("--count", g_count, "number of points");
  g_torus->add_option("--seed", g_seed, "sampling seed");
  g_torus->add_option("--out", g_out, "output path (default stdout)");
  g_torus->callback([&] {
    std::exit(cmd_geometry_sample("torus", g_n, g_count, g_seed, g_out));
  });

  auto* g_sphere = geo->add_subcommand("sample-sphere",
                                       "points of the real-locus sphere");
  g_sphere->add_option("--n", g_n, "quadric dimension")->required();
  g_sphere->add_option("--count", g_count, "number of points");
  g_sphere->add_option("--seed", g_seed, "sampling seed");
  g_sphere->add_option("--out", g_out, "output path (default stdout)");
  g_sphere->callback([&] {
    std::exit(cmd_geometry_sample("sphere", g_n, g_count, g_seed, g_out));
  });

  auto* g_dis = geo->add_subcommand(
      "disjointness", "certified gap between sphere image and fibre level");
  g_dis->add_option("--n", g_n, "quadric dimension (>= 2)")->required();
  g_dis->add_option("--samples", g_samples, "number of sphere samples");
  g_dis->add_option("--seed", g_seed, "sampling seed");
  g_dis->callback(
      [&] { std::exit(cmd_geometry_disjointness(g_n, g_samples, g_seed)); });

  // ---- flow --------------------------------------------------------------
  auto* flow = app.add_subcommand("flow", "degeneration transport");
  flow->require_subcommand(1);
  int f_n = 2;
  int f_count = 2;
  double f_s_end = 0.99;
  std::uint64_t f_seed = 1;
  std::string f_cls = "sphere", f_out;
  std::vector<std::string> f_files;

  auto* f_run = flow->add_subcommand("run", "integrate trajectories");
  f_run->add_option("--n", f_n, "quadric dimension (>= 2)")->required();
  f_run->add_option("--class", f_cls, "torus | sphere")->required();
  f_run->add_option("--count", f_count, "trajectories to integrate");
  f_run->add_option("--s-end", f_s_end, "march length in (0, 1)");
  f_run->add_option("--seed", f_seed, "start-sampling seed");
  f_run->add_option("--out", f_out, "JSONL trace file (default stdout)");
  f_run->callback([&] {
    std::exit(cmd_flow_run(f_n, f_cls, f_count, f_s_end, f_seed, f_out));
  });

  auto* f_rep = flow->add_subcommand("report", "aggregate stored traces");
  f_rep->add_option("files", f_files, "JSONL trace files")->required();
  f_rep->callback([&] { std::exit(cmd_flow_report(f_files)); });

  // ---- model --------------------------------------------------------------
  auto* model = app.add_subcommand("model", "separation certificates");
  model->require_subcommand(1);
  std::string m_space, m_registry, m_table, m_out;
  int m_n = 0;
  int m_points = 8;
  std::uint64_t m_seed = 1;
  auto* m_sep = model->add_subcommand(
      "separate", "build the invariant-separation certificate");
  m_sep->add_option("--space", m_space, "Q<n> (built-in) or a registry space");
  m_sep->add_option("--n", m_n, "quadric dimension (alternative to --space)");
  m_sep->add_option("--registry", m_registry, "registry JSON for ingested spaces");
  m_sep->add_option("--table", m_table, "table whose text is pinned as a dependency");
  m_sep->add_option("--seed", m_seed, "sampling/matching seed");
  m_sep->add_option("--points", m_points, "region samples per Lagrangian");
  m_sep->add_option("--out", m_out, "output path (default stdout)");
  m_sep->callback([&] {
    std::exit(cmd_model_separate(m_space, m_n, m_registry, m_table, m_seed,
                                 m_points, m_out));
  });

  // ---- suite ---------------------------------------------------------------
  auto* suite = app.add_subcommand("suite", "run the whole verification sweep");
  std::string q_config, q_out, q_tables;
  std::uint64_t q_seed = 0;
  auto* seed_opt = suite->add_option("--seed", q_seed, "master seed override");
  suite->add_option("--config", q_config, "flat key = value config file");
  suite->add_option("--out", q_out, "artifact directory override");
  suite->add_option("--table-dir", q_tables, "ingested-table directory override");
  suite->callback([&] {
    std::exit(
        cmd_suite(q_config, q_seed, seed_opt->count() > 0, q_out, q_tables));
  });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
