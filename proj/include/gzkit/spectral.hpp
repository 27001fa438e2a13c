#pragma once

// Formal calculus of asymptotic invariants attached to an idempotent
// decomposition. Invariants are never computed from dynamics; the one
// evaluation rule is the constancy rule: if a test function is constant on
// a region registered to an idempotent, the idempotent's invariant equals
// that constant. Everything downstream (unit value by the max rule, pair
// differences, the max-minus-min norm, and the separation certificates)
// is exact bookkeeping over those constants.
//
// Regions live in the coordinates the test functions are built from: for
// quadrics, the fibration image (where the torus sits at the monotone
// level and the vanishing sphere at the origin); for ingested registries,
// whatever coordinates the file supplies. A model Hamiltonian is a family
// of constant plateau values with a smoothness budget delta: plateaus must
// be at least 2*delta apart (sup-norm, checked on samples) so a smooth
// bump realizing the plateaus exists.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gzkit/geometry.hpp"

namespace gzkit {

struct Region {
  std::string name;
  std::vector<std::vector<double>> points;  // same dimension throughout
};

/// Region in fibration-image coordinates from a sampled point cloud.
Region region_from_cloud(const GeometryConfig& cfg, const PointCloud& cloud,
                         const std::string& name);

/// Min over sample pairs of the sup-norm distance. Throws on empty regions
/// or mismatched dimensions.
double region_gap(const Region& a, const Region& b);

struct Evidence {
  std::string kind;  // "critical-match" or "citation"
  Complex critical_value{0, 0};
  Complex eigenvalue{0, 0};
  double hessian_min_singular = 0;
  std::string citation;
};

/// critical-match: |critical_value - eigenvalue| <= 1e-8 and
/// hessian_min_singular >= 1e-6; citation: nonempty text. Throws otherwise.
void validate_evidence(const Evidence& ev);

struct RegistryEntry {
  std::string label;
  Region region;
  std::vector<Evidence> evidence;  // at least one piece
};

struct SuperheavyRegistry {
  std::string space;  // e.g. "Q3", "dp3"
  std::vector<RegistryEntry> entries;
  const RegistryEntry* find(const std::string& label) const;
  std::vector<std::string> labels() const;
};

/// Validates the evidence and appends; throws on duplicate label.
SuperheavyRegistry register_superheavy(SuperheavyRegistry reg,
                                       const std::string& label,
                                       Region region, Evidence evidence);

/// Default quadric registry at the coarse (two-factor) level: the fine
/// positive idempotents are matched one-to-one against nondegenerate
/// critical points of the potential (evidence per match), grouped to
/// e(+) |-> torus region; the zero-eigenvalue factor e(-) |-> sphere
/// region with an ingested-citation evidence record.
SuperheavyRegistry quadric_registry(int n, const Region& torus,
                                    const Region& sphere,
                                    std::uint64_t seed = 1);

struct SpectralVector {
  std::map<std::string, double> values;
};

/// Max rule for the unit's invariant. Throws if a label is missing.
double zeta_unit(const SpectralVector& v,
                 const std::vector<std::string>& labels);

/// v[i] - v[j]; throws on missing labels.
double mu_pair(const SpectralVector& v, const std::string& i,
               const std::string& j);

/// max_{i,j} (v[i] - v[j]) = max - min over the given labels.
double gamma_bar(const SpectralVector& v,
                 const std::vector<std::string>& labels);

struct ModelHamiltonian {
  std::vector<std::pair<Region, double>> plateaus;
  double delta = 0;       // plateau radius / smoothness budget
  double background = 0;  // value away from every plateau
};

/// Validates delta > 0 and pairwise plateau separation >= 2*delta.
ModelHamiltonian make_bump(std::vector<std::pair<Region, double>> plateaus,
                           double delta, double background = 0);

/// Plateau value within distance delta of exactly one region, background
/// otherwise; throws if x is within delta of two plateaus.
double evaluate(const ModelHamiltonian& H, const std::vector<double>& x);

/// The constancy rule: each registered region must be assigned a single
/// value by H (sampled max - min <= 1e-9), which becomes the entry's
/// invariant. Throws when H is not constant on a registered region.
SpectralVector zeta_from_constancy(const SuperheavyRegistry& reg,
                                   const ModelHamiltonian& H);

struct PairVerdict {
  std::string i, j;
  double gap = 0;    // sup-norm distance between the two regions
  double delta = 0;  // bump budget used for this pair (gap / 4)
  double mu = 0;     // zeta_i - zeta_j under the pair's bump
  bool distinct = false;
};

struct Certificate {
  std::string space;
  std::vector<std::string> labels;
  double gap = 0;    // min pairwise region gap
  double delta = 0;  // budget of the staircase Hamiltonian (gap / 4)
  SpectralVector zeta;      // from the staircase bump (values l-1 ... 0)
  double unit_value = 0;    // zeta_unit of the staircase vector
  double norm_value = 0;    // gamma_bar of the staircase vector
  std::vector<PairVerdict> pairs;
  bool separated = false;   // all pairs distinct
  std::map<std::string, std::string> dependency_hashes;
  std::vector<std::string> notes;
};

/// FNV-1a 64-bit content hash (used to pin report dependencies).
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

/// Build the separation certificate for a registry with >= 2 entries:
/// a staircase bump (values l-1, l-2, ..., 0 in entry order) yields the
/// spectral vector, and a dedicated two-plateau bump per pair yields the
/// pairwise verdicts (mu = 1 whenever regions are disjoint). `dependencies`
/// maps a name to the serialized report it pins (hashed, not embedded).
/// Throws when any two regions overlap (gap <= 0) or constancy fails.
Certificate separation_certificate(
    const SuperheavyRegistry& reg,
    const std::map<std::string, std::string>& dependencies = {});

std::string certificate_to_json(const Certificate& c);

/// Registry files: {"kind": "superheavy_registry", "space": ..., "entries":
/// [{"label", "region": {"name", "points"}, "evidence": [...]}]}. Evidence
/// is validated on load.
SuperheavyRegistry read_registry_json(const std::string& path);
std::string registry_to_json(const SuperheavyRegistry& reg);
void write_registry_json(const std::string& path,
                         const SuperheavyRegistry& reg);

}  // namespace gzkit
