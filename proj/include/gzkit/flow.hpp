#pragma once

// Transport along the one-parameter degeneration of the quadric,
//
//   F(z, t) = z_1^2 + z_2^2 + z_3^2 + t (z_4^2 + ... + z_m^2),  m = n + 2,
//
// restricted to the sphere slice |z|^2 = 2. At t = 1 the fibre is the
// quadric; at t = 0 it degenerates. The transport field V is minus the
// metric dual of d(Re t) restricted to the intersection of the constraint
// tangent spaces (sphere, phase gauge, Re F, Im F), normalized so that
// d(Re t)[V] = -1 exactly; the constraint span is invariant under the
// complex structure, which forces d(Im t)[V] = 0, so t marches down the
// real axis: t(s) = 1 - s.
//
// Trajectories carry per-step diagnostics: constraint residuals, the
// distance to the degeneration's critical locus, the anti-holomorphic
// involution residual (phase-gauged distance to the real locus), and the
// drift of the torus-fibration values.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gzkit/geometry.hpp"

namespace gzkit {

/// F(z, t) for z in C^m (m >= 4).
Complex family_value(const CVec& z, Complex t);

/// Phase-gauged L2 distance to the fixed locus of the involution
/// (z_1..z_{m-1}, z_m) -> (conj z_1..conj z_{m-1}, -conj z_m):
/// min over theta of || Im(e^{i theta} z_{1..m-1}) ||_2 + | Re(e^{i theta} z_m) |.
double involution_residual(const CVec& z);

/// Normalized distance to the t -> 0 critical locus {z_1 = z_2 = z_3 = 0}:
/// sqrt((|z_1|^2 + |z_2|^2 + |z_3|^2) / |z|^2), in [0, 1].
double singular_distance(const CVec& z);

struct FlowConfig {
  double s_end = 0.99;      // integrate t from 1 down to 1 - s_end
  double rtol = 1e-9;
  double atol = 1e-11;
  double h_init = 1e-3;
  double h_min = 1e-12;
  double h_max = 0.02;
  double project_tol = 1e-13;   // post-step constraint projection target
  double singular_guard = 1e-8; // abort if the transport direction degenerates
  int max_steps = 200000;
  int max_samples = 400;        // recorded diagnostics rows (thinned)
};

struct FlowSample {
  double s = 0;
  Complex t;
  double t_dev = 0;             // |t - (1 - s)|
  double norm_residual = 0;     // | |z|^2 - 2 |
  double family_residual = 0;   // |F(z, t)|
  double involution_residual = 0;
  double singular_distance = 0;
  double gz_drift = 0;          // || Phi(z(s)) - Phi(z(0)) ||_inf
  double head_drift = 0;        // same, over the components built from
                                // z_1..z_3 only (conserved for every n)
};

struct FlowTrace {
  int n = 0;
  std::string cls;              // "torus", "sphere", or "generic"
  CVec z0, z_end;
  Complex t_end;
  std::vector<FlowSample> samples;
  int steps_accepted = 0;
  int steps_rejected = 0;
};

/// Integrate one trajectory from a point of the t = 1 fibre (any point with
/// |z|^2 = 2 and sum z^2 = 0). Throws if the starting point violates the
/// constraints, if the transport field degenerates (near the critical locus),
/// or if step control collapses.
FlowTrace run_flow(const CVec& z0, const std::string& cls,
                   const FlowConfig& cfg = {});

struct FlowClassSummary {
  int count = 0;
  double max_t_dev = 0;
  double max_norm_residual = 0;
  double max_family_residual = 0;
  double max_involution_residual = 0;  // over sphere traces only
  double mean_final_distance = 0;
  double min_distance = 0;             // over all samples of all traces
  double max_gz_drift = 0;
  double max_head_drift = 0;           // drift of the z_1..z_3 components
  double max_toric_spread = 0;         // std of |z_j|^2 (j >= 4) across traces
  double final_distance_spread = 0;    // max - min of endpoint distances
  bool monotone_shrink = false;        // distance decreases over the last half
};

// Torus-limit semantics: the degeneration collapses all of z_4..z_m at a
// single rate, so fibre phases flow to a common endpoint only in the
// invariants the family respects: the endpoint distance to the critical
// locus and the fibration components built from z_1..z_3. For n = 2 the
// family's staging matches the fibration's, and the endpoint moduli
// |z_4|^2 agree coordinate-by-coordinate as well.
struct FlowReport {
  int n = 0;
  FlowClassSummary sphere;
  FlowClassSummary torus;
  bool sphere_collapses = false;  // mean final distance <= 0.2 and shrinking
  bool torus_stays_far = false;   // min distance >= 0.3
  bool torus_toric_limit = false; // common endpoint level (and moduli, n = 2)
  bool head_transported = false;  // z_1..z_3 fibration components pinned
  bool transport_exact = false;   // t_dev <= 1e-6 everywhere
  bool constraints_held = false;  // residuals <= 1e-9 everywhere
  bool sphere_stays_real = false; // involution residual <= 1e-7
  bool pass = false;
  std::vector<std::string> failures;
};

/// Aggregate trajectories of both classes into the pass/fail report.
FlowReport analyze_traces(const std::vector<FlowTrace>& traces);

/// JSONL trace files: a header line, one line per sample, a footer line.
void write_trace_jsonl(const std::string& path, const FlowTrace& trace);
void append_trace_jsonl(std::ostream& out, const FlowTrace& trace);
std::vector<FlowTrace> read_traces_jsonl(const std::string& path);

std::string report_to_json(const FlowReport& rep);

}  // namespace gzkit
