#include "gzkit/flow.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gzkit {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

// State layout: y = (Re z_0..Re z_{m-1}, Im z_0..Im z_{m-1}, Re t, Im t).
CVec state_z(const VectorXd& y, int m) {
  CVec z(m);
  for (int i = 0; i < m; ++i) z[i] = Complex(y(i), y(m + i));
  return z;
}

Complex state_t(const VectorXd& y, int m) {
  return Complex(y(2 * m), y(2 * m + 1));
}

VectorXd realify(const CVec& vz, Complex vt, int m) {
  VectorXd u = VectorXd::Zero(2 * m + 2);
  for (int i = 0; i < m; ++i) {
    u(i) = vz[i].real();
    u(m + i) = vz[i].imag();
  }
  u(2 * m) = vt.real();
  u(2 * m + 1) = vt.imag();
  return u;
}

// Holomorphic partials of the family.
void family_partials(const CVec& z, Complex t, CVec& Fz, Complex& Ft) {
  const int m = static_cast<int>(z.size());
  Fz.assign(m, Complex(0, 0));
  Ft = Complex(0, 0);
  for (int j = 0; j < 3; ++j) Fz[j] = 2.0 * z[j];
  for (int j = 3; j < m; ++j) {
    Fz[j] = 2.0 * t * z[j];
    Ft += z[j] * z[j];
  }
}

CVec conj_vec(const CVec& v) {
  CVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
  return out;
}

CVec i_times(const CVec& v) {
  CVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Complex(0, 1) * v[i];
  return out;
}

// The transport field: minus the normalized tangential gradient of Re t.
// The four projected-out directions (sphere normal, phase-gauge direction,
// and the two family-constraint gradients) span a J-invariant subspace, so
// d(Re t)[V] = -1 and d(Im t)[V] = 0 hold to roundoff.
VectorXd transport_field(const VectorXd& y, int m, double guard) {
  const CVec z = state_z(y, m);
  const Complex t = state_t(y, m);
  CVec Fz;
  Complex Ft;
  family_partials(z, t, Fz, Ft);

  MatrixXd U(2 * m + 2, 4);
  U.col(0) = realify(z, Complex(0, 0), m);
  U.col(1) = realify(i_times(z), Complex(0, 0), m);
  U.col(2) = realify(conj_vec(Fz), std::conj(Ft), m);
  U.col(3) = realify(i_times(conj_vec(Fz)), Complex(0, 1) * std::conj(Ft), m);

  const Eigen::HouseholderQR<MatrixXd> qr(U);
  const MatrixXd Q =
      qr.householderQ() * MatrixXd::Identity(2 * m + 2, 4);

  VectorXd e_t = VectorXd::Zero(2 * m + 2);
  e_t(2 * m) = 1.0;
  const VectorXd g = e_t - Q * (Q.transpose() * e_t);
  const double g2 = g.squaredNorm();
  if (g2 < guard * guard)
    throw std::runtime_error(
        "flow: transport direction degenerates (|grad| < guard); the "
        "trajectory is too close to the critical locus");
  return -g / g2;
}

// Project z back onto { |z|^2 = 2, Re F = 0, Im F = 0 } at fixed t.
void project_state(VectorXd& y, int m, double tol) {
  for (int it = 0; it < 12; ++it) {
    const CVec z = state_z(y, m);
    const Complex t = state_t(y, m);
    double n2 = 0;
    for (const Complex& c : z) n2 += std::norm(c);
    const Complex F = family_value(z, t);
    const Eigen::Vector3d c(n2 - 2.0, F.real(), F.imag());
    if (c.cwiseAbs().maxCoeff() <= tol) return;

    CVec Fz;
    Complex Ft;
    family_partials(z, t, Fz, Ft);
    MatrixXd J(3, 2 * m);
    for (int i = 0; i < m; ++i) {
      J(0, i) = 2.0 * z[i].real();
      J(0, m + i) = 2.0 * z[i].imag();
      // d(Re F) and d(Im F) against (dx_i, dy_i): F_z dz with dz = dx + i dy.
      J(1, i) = Fz[i].real();
      J(1, m + i) = -Fz[i].imag();
      J(2, i) = Fz[i].imag();
      J(2, m + i) = Fz[i].real();
    }
    const Eigen::Matrix3d JJt = J * J.transpose();
    const Eigen::Vector3d lam = JJt.ldlt().solve(c);
    const VectorXd delta = J.transpose() * lam;
    for (int i = 0; i < 2 * m; ++i) y(i) -= delta(i);
  }
}

double max_constraint_residual(const VectorXd& y, int m) {
  const CVec z = state_z(y, m);
  const Complex t = state_t(y, m);
  double n2 = 0;
  for (const Complex& c : z) n2 += std::norm(c);
  return std::max(std::abs(n2 - 2.0), std::abs(family_value(z, t)));
}

}  // namespace

Complex family_value(const CVec& z, Complex t) {
  if (z.size() < 4)
    throw std::invalid_argument("family_value: need at least 4 coordinates");
  Complex head = 0, tail = 0;
  for (int j = 0; j < 3; ++j) head += z[j] * z[j];
  for (std::size_t j = 3; j < z.size(); ++j) tail += z[j] * z[j];
  return head + t * tail;
}

double involution_residual(const CVec& z) {
  const int m = static_cast<int>(z.size());
  if (m < 2) throw std::invalid_argument("involution_residual: too short");
  auto f = [&](double theta) {
    const Complex u = std::polar(1.0, theta);
    double im2 = 0;
    for (int j = 0; j < m - 1; ++j) im2 += std::pow(std::imag(u * z[j]), 2);
    return std::sqrt(im2) + std::abs(std::real(u * z[m - 1]));
  };
  // The objective has period pi; coarse scan then golden-section refine.
  const int K = 256;
  double best_th = 0, best = f(0);
  for (int k = 1; k < K; ++k) {
    const double th = std::numbers::pi * k / K;
    const double v = f(th);
    if (v < best) {
      best = v;
      best_th = th;
    }
  }
  double a = best_th - std::numbers::pi / K;
  double b = best_th + std::numbers::pi / K;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 60; ++it) {
    if (f(c) < f(d))
      b = d;
    else
      a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  return std::min(best, f((a + b) / 2));
}

double singular_distance(const CVec& z) {
  if (z.size() < 4)
    throw std::invalid_argument("singular_distance: too short");
  double head = 0, all = 0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double nj = std::norm(z[j]);
    all += nj;
    if (j < 3) head += nj;
  }
  if (all == 0) throw std::domain_error("singular_distance: zero vector");
  return std::sqrt(head / all);
}

FlowTrace run_flow(const CVec& z0, const std::string& cls,
                   const FlowConfig& cfg) {
  const int m = static_cast<int>(z0.size());
  if (m < 4)
    throw std::invalid_argument("run_flow: need ambient dimension >= 4 (n >= 2)");
  if (!is_quadric_point(z0, 1e-9))
    throw std::invalid_argument(
        "run_flow: starting point is not on the t = 1 fibre");
  if (cfg.s_end <= 0 || cfg.s_end >= 1)
    throw std::invalid_argument("run_flow: need 0 < s_end < 1");

  FlowTrace trace;
  trace.n = m - 2;
  trace.cls = cls;
  trace.z0 = z0;

  const GeometryConfig gcfg;
  const std::vector<double> phi0 = gz_closed(gcfg, z0);

  VectorXd y = VectorXd::Zero(2 * m + 2);
  for (int i = 0; i < m; ++i) {
    y(i) = z0[i].real();
    y(m + i) = z0[i].imag();
  }
  y(2 * m) = 1.0;  // t = 1

  // Dormand-Prince 5(4) tableau.
  static const double A[7][6] = {
      {0, 0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656, 0},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double B5[7] = {35.0 / 384,     0, 500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784, 11.0 / 84,       0};
  static const double B4[7] = {5179.0 / 57600,    0,           7571.0 / 16695,
                               393.0 / 640,       -92097.0 / 339200,
                               187.0 / 2100,      1.0 / 40};

  auto record = [&](double s) {
    FlowSample sm;
    sm.s = s;
    const CVec z = state_z(y, m);
    sm.t = state_t(y, m);
    sm.t_dev = std::abs(sm.t - Complex(1.0 - s, 0.0));
    double n2 = 0;
    for (const Complex& c : z) n2 += std::norm(c);
    sm.norm_residual = std::abs(n2 - 2.0);
    sm.family_residual = std::abs(family_value(z, sm.t));
    sm.involution_residual = gzkit::involution_residual(z);
    sm.singular_distance = gzkit::singular_distance(z);
    const std::vector<double> phi = gz_closed(gcfg, z);
    double drift = 0, head = 0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
      const double d = std::abs(phi[k] - phi0[k]);
      drift = std::max(drift, d);
      if (k < 2) head = std::max(head, d);  // components built from z_1..z_3
    }
    sm.gz_drift = drift;
    sm.head_drift = head;
    trace.samples.push_back(sm);
  };

  double s = 0, h = cfg.h_init;
  record(0.0);
  std::vector<VectorXd> k(7);
  int steps = 0;
  while (s < cfg.s_end - 1e-14) {
    if (++steps > cfg.max_steps)
      throw std::runtime_error("run_flow: step limit exceeded");
    h = std::min({h, cfg.h_max, cfg.s_end - s});
    if (h < cfg.h_min)
      throw std::runtime_error("run_flow: step size collapsed");

    k[0] = transport_field(y, m, cfg.singular_guard);
    bool stage_ok = true;
    for (int st = 1; st < 7 && stage_ok; ++st) {
      VectorXd ys = y;
      for (int j = 0; j < st; ++j)
        if (A[st][j] != 0.0) ys += h * A[st][j] * k[j];
      try {
        k[st] = transport_field(ys, m, cfg.singular_guard);
      } catch (const std::runtime_error&) {
        stage_ok = false;  // retry with a smaller step before giving up
      }
    }
    if (!stage_ok) {
      h *= 0.25;
      ++trace.steps_rejected;
      if (h < cfg.h_min)
        throw std::runtime_error(
            "flow: transport direction degenerates inside a step");
      continue;
    }

    VectorXd y5 = y, y4 = y;
    for (int j = 0; j < 7; ++j) {
      if (B5[j] != 0.0) y5 += h * B5[j] * k[j];
      if (B4[j] != 0.0) y4 += h * B4[j] * k[j];
    }
    double err = 0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc =
          cfg.atol + cfg.rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
      err += std::pow((y5(i) - y4(i)) / sc, 2);
    }
    err = std::sqrt(err / y.size());

    if (err <= 1.0) {
      y = y5;
      project_state(y, m, cfg.project_tol);
      s += h;
      ++trace.steps_accepted;
      record(s);
    } else {
      ++trace.steps_rejected;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2),
                                  0.2, 5.0);
    h *= fac;
  }

  trace.z_end = state_z(y, m);
  trace.t_end = state_t(y, m);

  // Thin the recorded samples to a bounded count, keeping both endpoints.
  if (static_cast<int>(trace.samples.size()) > cfg.max_samples) {
    std::vector<FlowSample> thinned;
    const std::size_t total = trace.samples.size();
    const std::size_t stride =
        (total + cfg.max_samples - 1) / cfg.max_samples;
    for (std::size_t i = 0; i < total; i += stride)
      thinned.push_back(trace.samples[i]);
    if (thinned.back().s != trace.samples.back().s)
      thinned.push_back(trace.samples.back());
    trace.samples.swap(thinned);
  }
  return trace;
}

FlowReport analyze_traces(const std::vector<FlowTrace>& traces) {
  FlowReport rep;
  if (traces.empty()) {
    rep.failures.push_back("no trajectories supplied");
    return rep;
  }
  rep.n = traces.front().n;
  for (const FlowTrace& tr : traces)
    if (tr.n != rep.n) {
      rep.failures.push_back("trajectories mix different dimensions");
      return rep;
    }

  auto summarize = [&](const std::string& cls, FlowClassSummary& out,
                       std::vector<const FlowTrace*>& members) {
    for (const FlowTrace& tr : traces)
      if (tr.cls == cls) members.push_back(&tr);
    out.count = static_cast<int>(members.size());
    out.min_distance = std::numeric_limits<double>::infinity();
    out.monotone_shrink = true;
    double final_sum = 0;
    double final_lo = std::numeric_limits<double>::infinity();
    double final_hi = -std::numeric_limits<double>::infinity();
    for (const FlowTrace* tr : members) {
      for (const FlowSample& sm : tr->samples) {
        out.max_t_dev = std::max(out.max_t_dev, sm.t_dev);
        out.max_norm_residual = std::max(out.max_norm_residual, sm.norm_residual);
        out.max_family_residual =
            std::max(out.max_family_residual, sm.family_residual);
        out.max_involution_residual =
            std::max(out.max_involution_residual, sm.involution_residual);
        out.min_distance = std::min(out.min_distance, sm.singular_distance);
        out.max_gz_drift = std::max(out.max_gz_drift, sm.gz_drift);
        out.max_head_drift = std::max(out.max_head_drift, sm.head_drift);
      }
      const double s_final = tr->samples.back().s;
      const double dist_final = tr->samples.back().singular_distance;
      final_sum += dist_final;
      final_lo = std::min(final_lo, dist_final);
      final_hi = std::max(final_hi, dist_final);
      // Distance at mid-trajectory vs the endpoint.
      double mid = tr->samples.back().singular_distance;
      for (const FlowSample& sm : tr->samples)
        if (sm.s >= s_final / 2) {
          mid = sm.singular_distance;
          break;
        }
      if (tr->samples.back().singular_distance > mid + 1e-12)
        out.monotone_shrink = false;
    }
    if (out.count > 0) {
      out.mean_final_distance = final_sum / out.count;
      out.final_distance_spread = final_hi - final_lo;
    } else {
      out.min_distance = 0;  // keep the report JSON-serializable
    }

    // Cross-trajectory spread of the endpoint toric coordinates |z_j|^2,
    // j >= 4 (the coordinates with well-defined moduli in the limit).
    if (out.count >= 2) {
      const int m = static_cast<int>(members.front()->z_end.size());
      for (int j = 3; j < m; ++j) {
        double mean = 0;
        for (const FlowTrace* tr : members) mean += std::norm(tr->z_end[j]);
        mean /= out.count;
        double var = 0;
        for (const FlowTrace* tr : members)
          var += std::pow(std::norm(tr->z_end[j]) - mean, 2);
        out.max_toric_spread =
            std::max(out.max_toric_spread, std::sqrt(var / out.count));
      }
    }
  };

  std::vector<const FlowTrace*> spheres, tori;
  summarize("sphere", rep.sphere, spheres);
  summarize("torus", rep.torus, tori);

  auto fail = [&](const std::string& msg) { rep.failures.push_back(msg); };

  rep.sphere_collapses = rep.sphere.count > 0 &&
                         rep.sphere.mean_final_distance <= 0.2 &&
                         rep.sphere.monotone_shrink;
  if (!rep.sphere_collapses)
    fail("sphere trajectories do not collapse onto the critical locus "
         "(mean final distance " +
         std::to_string(rep.sphere.mean_final_distance) + ", want <= 0.2)");

  rep.torus_stays_far = rep.torus.count > 0 && rep.torus.min_distance >= 0.3;
  if (!rep.torus_stays_far)
    fail("torus trajectories approach the critical locus (min distance " +
         std::to_string(rep.torus.min_distance) + ", want >= 0.3)");

  rep.torus_toric_limit = rep.torus.count >= 2 &&
                          rep.torus.final_distance_spread <= 1e-3 &&
                          (rep.n != 2 || rep.torus.max_toric_spread <= 0.05);
  if (!rep.torus_toric_limit)
    fail("torus endpoints do not land on a common limit level "
         "(distance spread " +
         std::to_string(rep.torus.final_distance_spread) +
         ", moduli spread " + std::to_string(rep.torus.max_toric_spread) + ")");

  const double head_drift =
      std::max(rep.sphere.max_head_drift, rep.torus.max_head_drift);
  rep.head_transported = head_drift <= 1e-6;
  if (!rep.head_transported)
    fail("fibration components built from z_1..z_3 drift by " +
         std::to_string(head_drift));

  const double t_dev = std::max(rep.sphere.max_t_dev, rep.torus.max_t_dev);
  rep.transport_exact = t_dev <= 1e-6;
  if (!rep.transport_exact)
    fail("t drifts from 1 - s by " + std::to_string(t_dev));

  const double cres =
      std::max({rep.sphere.max_norm_residual, rep.sphere.max_family_residual,
                rep.torus.max_norm_residual, rep.torus.max_family_residual});
  rep.constraints_held = cres <= 1e-9;
  if (!rep.constraints_held)
    fail("constraint residual " + std::to_string(cres) + " exceeds 1e-9");

  rep.sphere_stays_real =
      rep.sphere.count > 0 && rep.sphere.max_involution_residual <= 1e-7;
  if (!rep.sphere_stays_real)
    fail("sphere trajectories leave the real locus (residual " +
         std::to_string(rep.sphere.max_involution_residual) + ")");

  rep.pass = rep.sphere_collapses && rep.torus_stays_far &&
             rep.torus_toric_limit && rep.head_transported &&
             rep.transport_exact && rep.constraints_held &&
             rep.sphere_stays_real;
  return rep;
}

namespace {

json cvec_to_json(const CVec& z) {
  json j = json::array();
  for (const Complex& c : z) j.push_back({c.real(), c.imag()});
  return j;
}

CVec cvec_from_json(const json& j) {
  CVec z;
  for (const auto& e : j) z.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return z;
}

}  // namespace

void append_trace_jsonl(std::ostream& out, const FlowTrace& trace) {
  json head{{"kind", "flow_trace"},
            {"n", trace.n},
            {"class", trace.cls},
            {"z0", cvec_to_json(trace.z0)}};
  out << head.dump() << "\n";
  for (const FlowSample& sm : trace.samples) {
    json row{{"s", sm.s},
             {"t", {sm.t.real(), sm.t.imag()}},
             {"t_dev", sm.t_dev},
             {"norm_residual", sm.norm_residual},
             {"family_residual", sm.family_residual},
             {"involution_residual", sm.involution_residual},
             {"singular_distance", sm.singular_distance},
             {"gz_drift", sm.gz_drift},
             {"head_drift", sm.head_drift}};
    out << row.dump() << "\n";
  }
  json foot{{"end", true},
            {"z_end", cvec_to_json(trace.z_end)},
            {"t_end", {trace.t_end.real(), trace.t_end.imag()}},
            {"steps_accepted", trace.steps_accepted},
            {"steps_rejected", trace.steps_rejected}};
  out << foot.dump() << "\n";
}

void write_trace_jsonl(const std::string& path, const FlowTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  append_trace_jsonl(out, trace);
}

std::vector<FlowTrace> read_traces_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::vector<FlowTrace> traces;
  FlowTrace cur;
  bool open = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad trace line: " + e.what());
    }
    if (j.contains("kind")) {
      if (j.at("kind") != "flow_trace")
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": not a flow trace header");
      cur = FlowTrace{};
      cur.n = j.at("n").get<int>();
      cur.cls = j.at("class").get<std::string>();
      cur.z0 = cvec_from_json(j.at("z0"));
      open = true;
    } else if (j.contains("end")) {
      if (!open)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": trace footer without header");
      cur.z_end = cvec_from_json(j.at("z_end"));
      cur.t_end = Complex(j.at("t_end").at(0).get<double>(),
                          j.at("t_end").at(1).get<double>());
      cur.steps_accepted = j.value("steps_accepted", 0);
      cur.steps_rejected = j.value("steps_rejected", 0);
      traces.push_back(cur);
      open = false;
    } else {
      if (!open)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": sample line outside a trace");
      FlowSample sm;
      sm.s = j.at("s").get<double>();
      sm.t = Complex(j.at("t").at(0).get<double>(), j.at("t").at(1).get<double>());
      sm.t_dev = j.value("t_dev", 0.0);
      sm.norm_residual = j.value("norm_residual", 0.0);
      sm.family_residual = j.value("family_residual", 0.0);
      sm.involution_residual = j.value("involution_residual", 0.0);
      sm.singular_distance = j.value("singular_distance", 0.0);
      sm.gz_drift = j.value("gz_drift", 0.0);
      sm.head_drift = j.value("head_drift", 0.0);
      cur.samples.push_back(sm);
    }
  }
  if (open)
    throw std::runtime_error(path + ": unterminated trace (missing footer)");
  return traces;
}

std::string report_to_json(const FlowReport& rep) {
  auto clsepf = [](const FlowClassSummary& s) {
    return json{{"count", s.count},
                {"max_t_dev", s.max_t_dev},
                {"max_norm_residual", s.max_norm_residual},
                {"max_family_residual", s.max_family_residual},
                {"max_involution_residual", s.max_involution_residual},
                {"mean_final_distance", s.mean_final_distance},
                {"min_distance", s.min_distance},
                {"max_gz_drift", s.max_gz_drift},
                {"max_head_drift", s.max_head_drift},
                {"max_toric_spread", s.max_toric_spread},
                {"final_distance_spread", s.final_distance_spread},
                {"monotone_shrink", s.monotone_shrink}};
  };
  json j{{"kind", "flow_report"},
         {"n", rep.n},
         {"sphere", clsepf(rep.sphere)},
         {"torus", clsepf(rep.torus)},
         {"sphere_collapses", rep.sphere_collapses},
         {"torus_stays_far", rep.torus_stays_far},
         {"torus_toric_limit", rep.torus_toric_limit},
         {"head_transported", rep.head_transported},
         {"transport_exact", rep.transport_exact},
         {"constraints_held", rep.constraints_held},
         {"sphere_stays_real", rep.sphere_stays_real},
         {"pass", rep.pass},
         {"failures", rep.failures}};
  return j.dump(2) + "\n";
}

}  // namespace gzkit
