#pragma once

// Laurent superpotential on (C*)^n for the torus fibre of the quadric system,
//
//   W(z) = 1/z_n + sum_{k=2}^{n} z_k / z_{k-1} + 2 z_2 + z_1 z_2,   n >= 2,
//
// with the chain convention z_{n+1} := 1. Critical points come in n branches
//   z = (1, xi^{-(n-1)}, ..., xi^{-1}),   xi^n = 4,
// with critical value n*xi, matching the nonzero first-Chern eigenvalues of
// the corresponding quantum multiplication table.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gzkit/novikov.hpp"  // for Complex

namespace gzkit {

Complex superpotential_value(int n, const std::vector<Complex>& z);
std::vector<Complex> superpotential_gradient(int n, const std::vector<Complex>& z);
/// Complex Hessian (row-major n x n, holomorphic second derivatives).
std::vector<std::vector<Complex>> superpotential_hessian(
    int n, const std::vector<Complex>& z);

/// Cleared polynomial critical system P(z) = 0 (denominators multiplied out):
///   P_1 = z_2 (z_1^2 - 1)
///   P_2 = z_2^2 - z_1 z_3 + 2 z_1 z_2^2 + z_1^2 z_2^2
///   P_j = z_j^2 - z_{j-1} z_{j+1}      (3 <= j <= n, z_{n+1} = 1)
/// Shares zeros with grad W away from coordinate hyperplanes, but acquires
/// a spurious family with z_2 = ... = z_n = 0; solvers must filter on the
/// minimum coordinate modulus.
std::vector<Complex> cleared_system(int n, const std::vector<Complex>& z);
std::vector<std::vector<Complex>> cleared_jacobian(int n,
                                                   const std::vector<Complex>& z);

std::vector<Complex> closed_form_critical_point(int n, int branch);
Complex closed_form_critical_value(int n, int branch);

struct CriticalPoint {
  std::vector<Complex> z;
  Complex value;
  double grad_norm = 0;            // max |dW/dz_j| at the point
  double min_abs_coord = 0;
  double hessian_min_singular = 0; // smallest singular value of the Hessian
  bool nondegenerate = false;      // hessian_min_singular >= 1e-6
};

struct SolveOptions {
  int starts = 200;
  std::uint64_t seed = 1;
  int max_iter = 60;
  double tol = 1e-12;            // residual target for the cleared system
  double min_modulus = 1e-4;     // reject roots on coordinate hyperplanes
  double dedupe_tol = 1e-6;
  double deflation_radius = 1e-3;  // abandon starts this close to known roots
  double lo = 0.1, hi = 10.0;    // log-uniform modulus window for starts
};

struct SolveStats {
  int starts = 0;
  int converged = 0;
  int filtered_small = 0;  // converged onto the spurious hyperplane family
  int deflected = 0;       // abandoned near an already-known root
};

/// Multistart Newton on the cleared system; points are deduplicated, filtered
/// on minimum modulus, verified against the rational gradient, and sorted by
/// critical value (descending real part, then imaginary part).
std::vector<CriticalPoint> find_critical_points(int n, const SolveOptions& opt,
                                                SolveStats* stats = nullptr);

/// Multiset comparison of critical values against a reference spectrum
/// (e.g. the nonzero eigenvalues of quantum multiplication by c1).
/// Returns the largest match distance, or +inf on cardinality mismatch.
double spectrum_match_distance(const std::vector<CriticalPoint>& pts,
                               const std::vector<Complex>& reference);

/// JSON serialization of a solved critical-point set.
std::string points_to_json(int n, const std::vector<CriticalPoint>& pts,
                           const SolveStats& stats);
void write_points_json(const std::string& path, int n,
                       const std::vector<CriticalPoint>& pts,
                       const SolveStats& stats);
struct PointsFile {
  int n = 0;
  std::vector<CriticalPoint> points;
};
PointsFile read_points_json(const std::string& path);

}  // namespace gzkit
