#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gzkit/novikov.hpp"

namespace gzkit {

/// Finite graded basis of a cohomology-style algebra. Degrees are the real
/// (cohomological) degrees; the unit must sit in degree 0.
struct GradedBasis {
  std::vector<std::string> labels;
  std::vector<int> degrees;
  int unit_index = 0;
  int dim() const { return static_cast<int>(labels.size()); }
};

/// Element written in a table's basis: one Novikov scalar per basis class.
using Element = std::vector<NovikovScalar>;

/// Multiplication table of a graded commutative algebra over the Novikov
/// scalars. sc[i][j] is the coordinate vector of basis_i * basis_j.
///
/// T-grading convention: a term c T^r basis_k of basis_i * basis_j must obey
/// deg_k + deg_T * r = deg_i + deg_j, i.e. T^{lambda0} carries degree deg_T
/// (= twice the minimal Chern number).
struct AlgebraTable {
  std::string name;
  int n = 0;            // complex dimension of the underlying space
  double lambda0 = 0;   // line energy in geometric units (display metadata)
  int deg_T = 0;
  GradedBasis basis;
  std::vector<std::vector<Element>> sc;
  Element c1;

  int dim() const { return basis.dim(); }
  Element zero_element() const { return Element(dim()); }
  Element unit_element() const;
  /// Index of the first basis class with the given label, or -1.
  int index_of(const std::string& label) const;
};

struct ValidationIssue {
  std::string kind;   // "commutativity", "associativity", "unit", "grading",
                      // "positivity", "shape"
  int i = -1, j = -1, k = -1;  // witness indices where applicable
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

/// Checks shape, unit, commutativity, associativity (exact scalar
/// arithmetic), grading consistency and exponent positivity.
/// Failures are data, not exceptions.
ValidationReport validate_table(const AlgebraTable& t);

/// Bilinear product of coordinate vectors through the table.
Element multiply(const AlgebraTable& t, const Element& a, const Element& b);

Element element_add(const Element& a, const Element& b);
Element element_sub(const Element& a, const Element& b);
Element element_scale(const NovikovScalar& c, const Element& a);
bool element_eq(const Element& a, const Element& b);

/// Built-in quantum cohomology table of the smooth n-dimensional quadric,
/// 1 <= n <= 6. Basis: unit "1", hyperplane powers "h", "h^2", ..., point
/// class "p", and for even n >= 2 the extra middle class "s".
/// Satisfies h^{*(n+1)} = 4 T h, cup relation h^n = 2p, p*p = T^2,
/// and for even n: h*s = 0, s*s = 2T - 2p, s*p = -T s. c1 = n h.
AlgebraTable builtin_quadric_table(int n);

/// Eigenvalues (with multiplicity) of multiplication by c1 after the
/// substitution T^{lambda0} -> T_value. Sorted by (re, im).
std::vector<Complex> c1_spectrum(const AlgebraTable& t, double T_value);

/// Closed-form coarse idempotents e_{+/-} = (1 +/- p T^{-1}) / 2 for tables
/// carrying a point class "p" with p*p = T^2. Throws otherwise.
Element coarse_idempotent(const AlgebraTable& t, int sign);

/// Closed-form fine idempotents (1 +/- s T^{-1/2} - p T^{-1}) / 4 splitting
/// e_- for even-dimensional quadrics (class "s" required).
Element fine_minus_idempotent(const AlgebraTable& t, int sign);

/// Result of the primitive-idempotent search.
struct IdempotentDecomposition {
  std::vector<Element> idempotents;   // exact monomial lift when it verifies
  std::vector<std::string> labels;
  std::vector<Complex> c1_eigenvalues;            // at T=1, one per idempotent
  std::vector<int> exponent_denominators;         // lattice fit per idempotent
  std::vector<double> fit_residuals;              // max |slope - k/m| pre-round
  std::vector<std::vector<std::vector<Complex>>> grid_coords;  // [idem][grid][k]
  std::vector<double> grid;                       // T values used for fitting
  bool exact = false;        // all idempotents lifted to exact monomials
  bool semisimple = false;
  std::string notes;
};

/// Numeric primitive idempotents at specializations of T, via Lagrange
/// interpolation in a generic element (c1 first, then the remaining basis
/// classes to split degenerate c1-eigenspaces, e.g. the middle class s),
/// followed by an exact monomial lift justified by homogeneity.
/// Reports non-semisimplicity (radical detected through the trace form)
/// instead of inventing idempotents.
IdempotentDecomposition primitive_idempotents(const AlgebraTable& t,
                                              std::uint64_t seed = 1);

/// Minimal m with all exponents of e in (1/m)Z (exact inspection).
/// Throws std::domain_error when e is zero.
int exponent_denominator(const Element& e, const AlgebraTable& t);

/// Log-slope fit of |coord(T)| over the grid used by the decomposition;
/// returns the minimal lattice m <= 2n consistent with every slope within
/// the fit tolerance (0.05). Throws when no lattice fits.
int fitted_exponent_denominator(const IdempotentDecomposition& d, int which,
                                const AlgebraTable& t, double* residual = nullptr);

/// Maps each fine idempotent label to a coarse one. Quadric-style tables
/// (point class p with p*p = T^2) group against e_{+/-}; otherwise every
/// fine idempotent with integer exponents is its own coarse class.
std::map<std::string, std::string> coarse_grouping(const IdempotentDecomposition& d,
                                                   const AlgebraTable& t);

/// Text format: header (name/n/lambda0/deg_T), basis block, "i j -> k :"
/// structure constant lines (i <= j, nonzero only), one c1 line. Exact
/// round-trip with write_table.
AlgebraTable parse_table(std::istream& in, const std::string& origin = "<stream>");
AlgebraTable load_table(const std::string& path);
void write_table(const AlgebraTable& t, std::ostream& out);
std::string table_to_string(const AlgebraTable& t);

/// Parse + validate; validation failures are returned as warnings, parse
/// errors throw (naming the offending line).
AlgebraTable ingest_table(const std::string& path, ValidationReport* warnings);

}  // namespace gzkit
