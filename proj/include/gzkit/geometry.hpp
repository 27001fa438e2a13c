#pragma once

// Geometry of the complex quadric hypersurface
//   Q^n = { z in C^{n+2} : |z|^2 = 2, sum_j z_j^2 = 0 },
// its action-type torus fibration, the disc-bundle lift from one dimension
// down, and the two distinguished Lagrangians used throughout: the fibre
// torus over the monotone level and the real-locus sphere.
//
// Conventions (see README "Conventions"): the ambient scale is fixed by
// |z|^2 = 2, the line energy is lambda0 = 2*pi, and the fibration values are
// reported in units where the full level interval has length lambda = 2.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gzkit/novikov.hpp"  // for Complex
#include "gzkit/rng.hpp"

namespace gzkit {

using CVec = std::vector<Complex>;

struct GeometryConfig {
  double lambda = 2.0;   // value scale: top level of the fibration
  double norm2 = 2.0;    // required |z|^2 on the sphere slice
  double lambda0 = 2.0 * 3.14159265358979323846;  // energy of a line
};

struct PointResiduals {
  double norm = 0;     // | |z|^2 - norm2 |
  double quadric = 0;  // | sum_j z_j^2 |
};
PointResiduals quadric_residuals(const CVec& z,
                                 const GeometryConfig& cfg = {});
bool is_quadric_point(const CVec& z, double tol = 1e-9,
                      const GeometryConfig& cfg = {});

/// Antisymmetric pairing entry A_{jk} = -2 (lambda/|z|^2) Im(z_j conj(z_k)).
double pairing_entry(const GeometryConfig& cfg, const CVec& z, int j, int k);

/// Fibration values (lambda^{(2)}, ..., lambda^{(m-1)}) for z in C^m, via
/// the closed form: lambda^{(2)} = A_{12} (signed), and for k >= 3
/// lambda^{(k)} = (lambda/|z|^2) sqrt(sum_{i<j<=k} |z_i conj(z_j) - conj(z_i) z_j|^2).
/// Defined for any nonzero z; no membership check (flow diagnostics evaluate
/// it off the quadric slice).
std::vector<double> gz_closed(const GeometryConfig& cfg, const CVec& z);

/// Same values through dense linear algebra: the leading k x k block of the
/// real antisymmetric matrix A, largest eigenvalue of the Hermitian iA,
/// sign restored on the first component from the 2 x 2 Pfaffian.
std::vector<double> gz_matrix(const GeometryConfig& cfg, const CVec& z);

/// Uniform-ish random point of Q^n: two Gaussian vectors in R^{n+2},
/// orthonormalized, z = x + i y. Satisfies both constraints to roundoff.
CVec random_quadric_point(int n, Rng& rng, const GeometryConfig& cfg = {});

/// Disc-bundle lift taking w in Q^{n-1} (in C^{n+1}) and a fibre coordinate
/// zeta with rho = |zeta|^2 < 2 to a point of Q^n:
///   z = ( (1 - rho/4) w - (zeta^2/4) conj(w),  sqrt(1 - rho/4) zeta ).
/// Scales all shared fibration values by (1 - rho/2) and appends the new
/// top value lambda (1 - rho/2).
CVec biran_lift(const CVec& w, Complex zeta);

/// Fibration values of the monotone torus fibre of Q^n:
///   u* = (0, 2/n, 4/n, ..., 2(n-1)/n) * (lambda/2).
std::vector<double> monotone_fiber(int n, const GeometryConfig& cfg = {});

/// Random point on the monotone fibre torus: an equatorial circle point of
/// Q^1 lifted n-1 times with |zeta_m|^2 = 2/m and a random phase.
CVec sample_monotone_torus(int n, Rng& rng);

/// Random point of the real-locus Lagrangian sphere (x in S^{n+1} cap R^{n+1}
/// paired with a purely imaginary last coordinate); its fibration values
/// vanish identically.
CVec sample_vanishing_sphere(int n, Rng& rng);

struct DisjointnessReport {
  int n = 0;
  int samples = 0;
  double min_gap = 0;        // min over sphere samples of ||Phi(s) - u*||_inf
  double threshold = 0;      // (lambda/2) * 2/n - tolerance
  double max_sphere_value = 0;  // largest |Phi component| seen on the sphere
  bool pass = false;
};

/// Certifies that the sphere's fibration values stay a definite distance
/// from the monotone fibre: the gap is bounded below by the smallest nonzero
/// coordinate of u*.
DisjointnessReport disjointness_gap(int n, int samples, Rng& rng,
                                    const GeometryConfig& cfg = {});

/// Point-cloud serialization (JSON), shared by the samplers and the
/// level-set model: coordinates are stored split into re/im, fibration
/// values precomputed per point.
struct PointCloud {
  int n = 0;
  std::string cls;  // "torus", "sphere", or "generic"
  std::vector<CVec> points;
};
std::string cloud_to_json(const PointCloud& cloud,
                          const GeometryConfig& cfg = {});
void write_cloud_json(const std::string& path, const PointCloud& cloud,
                      const GeometryConfig& cfg = {});
PointCloud read_cloud_json(const std::string& path);

}  // namespace gzkit
