#include "gzkit/spectral.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gzkit/algebra.hpp"
#include "gzkit/superpotential.hpp"

namespace gzkit {

namespace {
using nlohmann::json;

double sup_dist(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("region points have mismatched dimensions");
  double d = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double dist_to_region(const Region& r, const std::vector<double>& x) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : r.points) d = std::min(d, sup_dist(p, x));
  return d;
}

}  // namespace

Region region_from_cloud(const GeometryConfig& cfg, const PointCloud& cloud,
                         const std::string& name) {
  Region r;
  r.name = name;
  for (const CVec& z : cloud.points) r.points.push_back(gz_closed(cfg, z));
  if (r.points.empty())
    throw std::invalid_argument("region_from_cloud: empty cloud");
  return r;
}

double region_gap(const Region& a, const Region& b) {
  if (a.points.empty() || b.points.empty())
    throw std::invalid_argument("region_gap: empty region");
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& p : a.points)
    for (const auto& q : b.points) gap = std::min(gap, sup_dist(p, q));
  return gap;
}

void validate_evidence(const Evidence& ev) {
  if (ev.kind == "critical-match") {
    const double mismatch = std::abs(ev.critical_value - ev.eigenvalue);
    if (mismatch > 1e-8)
      throw std::invalid_argument(
          "evidence rejected: critical value differs from the eigenvalue by " +
          std::to_string(mismatch));
    if (ev.hessian_min_singular < 1e-6)
      throw std::invalid_argument(
          "evidence rejected: critical point is degenerate (min singular " +
          std::to_string(ev.hessian_min_singular) + ")");
  } else if (ev.kind == "citation") {
    if (ev.citation.empty())
      throw std::invalid_argument("evidence rejected: empty citation");
  } else {
    throw std::invalid_argument("evidence rejected: unknown kind '" +
                                ev.kind + "'");
  }
}

const RegistryEntry* SuperheavyRegistry::find(const std::string& label) const {
  for (const RegistryEntry& e : entries)
    if (e.label == label) return &e;
  return nullptr;
}

std::vector<std::string> SuperheavyRegistry::labels() const {
  std::vector<std::string> out;
  for (const RegistryEntry& e : entries) out.push_back(e.label);
  return out;
}

SuperheavyRegistry register_superheavy(SuperheavyRegistry reg,
                                       const std::string& label,
                                       Region region, Evidence evidence) {
  validate_evidence(evidence);
  if (reg.find(label))
    throw std::invalid_argument("registry already has an entry for '" +
                                label + "'");
  if (region.points.empty())
    throw std::invalid_argument("cannot register an empty region");
  RegistryEntry entry;
  entry.label = label;
  entry.region = std::move(region);
  entry.evidence.push_back(std::move(evidence));
  reg.entries.push_back(std::move(entry));
  return reg;
}

SuperheavyRegistry quadric_registry(int n, const Region& torus,
                                    const Region& sphere,
                                    std::uint64_t seed) {
  if (n < 2)
    throw std::invalid_argument("quadric_registry: need n >= 2");
  const AlgebraTable table = builtin_quadric_table(n);
  const IdempotentDecomposition dec = primitive_idempotents(table, seed);
  const std::map<std::string, std::string> groups = coarse_grouping(dec, table);

  SolveOptions opt;
  opt.seed = seed;
  const std::vector<CriticalPoint> crits = find_critical_points(n, opt);

  // One nondegenerate critical point per positive fine factor, matched by
  // value against the factor's eigenvalue; the matches are the evidence
  // chain carried by the grouped entry.
  std::vector<Evidence> plus_chain;
  for (std::size_t i = 0; i < dec.labels.size(); ++i) {
    auto g = groups.find(dec.labels[i]);
    if (g == groups.end() || g->second != "e(+)") continue;
    const Complex ev = dec.c1_eigenvalues[i];
    const CriticalPoint* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const CriticalPoint& cp : crits) {
      const double d = std::abs(cp.value - ev);
      if (d < best_d) {
        best_d = d;
        best = &cp;
      }
    }
    if (!best)
      throw std::runtime_error("quadric_registry: no critical point to match " +
                               dec.labels[i]);
    Evidence e;
    e.kind = "critical-match";
    e.critical_value = best->value;
    e.eigenvalue = ev;
    e.hessian_min_singular = best->hessian_min_singular;
    validate_evidence(e);
    plus_chain.push_back(e);
  }
  if (plus_chain.empty())
    throw std::runtime_error("quadric_registry: no positive factors found");

  Evidence sphere_ev;
  sphere_ev.kind = "citation";
  sphere_ev.citation =
      "ingested: the closed-open image of the zero-eigenvalue unit is the "
      "fundamental class of the vanishing sphere, making the sphere "
      "superheavy for its factor";

  SuperheavyRegistry reg;
  reg.space = "Q" + std::to_string(n);
  RegistryEntry plus;
  plus.label = "e(+)";
  plus.region = torus;
  plus.evidence = std::move(plus_chain);
  reg.entries.push_back(std::move(plus));
  reg = register_superheavy(std::move(reg), "e(-)", sphere, sphere_ev);
  return reg;
}

double zeta_unit(const SpectralVector& v,
                 const std::vector<std::string>& labels) {
  if (labels.empty()) throw std::invalid_argument("zeta_unit: no labels");
  double m = -std::numeric_limits<double>::infinity();
  for (const std::string& l : labels) {
    auto it = v.values.find(l);
    if (it == v.values.end())
      throw std::invalid_argument("zeta_unit: missing label '" + l + "'");
    m = std::max(m, it->second);
  }
  return m;
}

double mu_pair(const SpectralVector& v, const std::string& i,
               const std::string& j) {
  auto a = v.values.find(i), b = v.values.find(j);
  if (a == v.values.end())
    throw std::invalid_argument("mu_pair: missing label '" + i + "'");
  if (b == v.values.end())
    throw std::invalid_argument("mu_pair: missing label '" + j + "'");
  return a->second - b->second;
}

double gamma_bar(const SpectralVector& v,
                 const std::vector<std::string>& labels) {
  if (labels.empty()) throw std::invalid_argument("gamma_bar: no labels");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const std::string& l : labels) {
    auto it = v.values.find(l);
    if (it == v.values.end())
      throw std::invalid_argument("gamma_bar: missing label '" + l + "'");
    lo = std::min(lo, it->second);
    hi = std::max(hi, it->second);
  }
  return hi - lo;
}

ModelHamiltonian make_bump(std::vector<std::pair<Region, double>> plateaus,
                           double delta, double background) {
  if (delta <= 0)
    throw std::invalid_argument("make_bump: need a positive width");
  for (const auto& [r, v] : plateaus)
    if (r.points.empty())
      throw std::invalid_argument("make_bump: empty plateau region");
  for (std::size_t i = 0; i < plateaus.size(); ++i)
    for (std::size_t j = i + 1; j < plateaus.size(); ++j) {
      const double gap = region_gap(plateaus[i].first, plateaus[j].first);
      if (gap < 2 * delta)
        throw std::invalid_argument(
            "make_bump: plateaus '" + plateaus[i].first.name + "' and '" +
            plateaus[j].first.name + "' are " + std::to_string(gap) +
            " apart, less than twice the width " + std::to_string(delta));
    }
  ModelHamiltonian H;
  H.plateaus = std::move(plateaus);
  H.delta = delta;
  H.background = background;
  return H;
}

double evaluate(const ModelHamiltonian& H, const std::vector<double>& x) {
  int hits = 0;
  double value = H.background;
  for (const auto& [r, v] : H.plateaus)
    if (dist_to_region(r, x) <= H.delta) {
      ++hits;
      value = v;
    }
  if (hits > 1)
    throw std::runtime_error(
        "model Hamiltonian is ambiguous at a point (two plateaus in range)");
  return value;
}

SpectralVector zeta_from_constancy(const SuperheavyRegistry& reg,
                                   const ModelHamiltonian& H) {
  SpectralVector out;
  for (const RegistryEntry& e : reg.entries) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : e.region.points) {
      const double v = evaluate(H, p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > 1e-9)
      throw std::runtime_error(
          "constancy rule violated on region '" + e.region.name +
          "' (values spread over " + std::to_string(hi - lo) + ")");
    out.values[e.label] = hi;
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string(buf);
}

Certificate separation_certificate(
    const SuperheavyRegistry& reg,
    const std::map<std::string, std::string>& dependencies) {
  const int l = static_cast<int>(reg.entries.size());
  if (l < 2)
    throw std::invalid_argument(
        "separation_certificate: need at least two registered factors");

  Certificate cert;
  cert.space = reg.space;
  cert.labels = reg.labels();

  // Pairwise verdicts, each from its own two-plateau bump (1 on the first
  // region, 0 on the second).
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j) {
      const Region& ri = reg.entries[i].region;
      const Region& rj = reg.entries[j].region;
      PairVerdict pv;
      pv.i = reg.entries[i].label;
      pv.j = reg.entries[j].label;
      pv.gap = region_gap(ri, rj);
      if (pv.gap <= 0)
        throw std::runtime_error("separation_certificate: regions '" +
                                 ri.name + "' and '" + rj.name +
                                 "' overlap (gap " + std::to_string(pv.gap) +
                                 ")");
      min_gap = std::min(min_gap, pv.gap);
      pv.delta = pv.gap / 4;
      const ModelHamiltonian H =
          make_bump({{ri, 1.0}, {rj, 0.0}}, pv.delta, 0.0);
      SuperheavyRegistry sub;
      sub.space = reg.space;
      sub.entries = {reg.entries[i], reg.entries[j]};
      const SpectralVector zv = zeta_from_constancy(sub, H);
      pv.mu = mu_pair(zv, pv.i, pv.j);
      pv.distinct = pv.mu != 0.0;
      cert.pairs.push_back(pv);
    }

  // Staircase bump separating every factor at once: values l-1, ..., 1, 0
  // in entry order, width min_gap / 4.
  cert.gap = min_gap;
  cert.delta = min_gap / 4;
  std::vector<std::pair<Region, double>> plateaus;
  for (int i = 0; i < l; ++i)
    plateaus.push_back({reg.entries[i].region, double(l - 1 - i)});
  const ModelHamiltonian H = make_bump(std::move(plateaus), cert.delta, 0.0);
  cert.zeta = zeta_from_constancy(reg, H);
  cert.unit_value = zeta_unit(cert.zeta, cert.labels);
  cert.norm_value = gamma_bar(cert.zeta, cert.labels);

  cert.separated = true;
  for (const PairVerdict& pv : cert.pairs)
    if (!pv.distinct) cert.separated = false;

  for (const auto& [name, body] : dependencies)
    cert.dependency_hashes[name] = fnv1a64_hex(body);
  return cert;
}

namespace {

json evidence_to_json(const Evidence& ev) {
  json j{{"kind", ev.kind}};
  if (ev.kind == "critical-match") {
    j["critical_value"] = {ev.critical_value.real(), ev.critical_value.imag()};
    j["eigenvalue"] = {ev.eigenvalue.real(), ev.eigenvalue.imag()};
    j["hessian_min_singular"] = ev.hessian_min_singular;
  } else {
    j["citation"] = ev.citation;
  }
  return j;
}

Evidence evidence_from_json(const json& j) {
  Evidence ev;
  ev.kind = j.at("kind").get<std::string>();
  if (ev.kind == "critical-match") {
    ev.critical_value = Complex(j.at("critical_value").at(0).get<double>(),
                                j.at("critical_value").at(1).get<double>());
    ev.eigenvalue = Complex(j.at("eigenvalue").at(0).get<double>(),
                            j.at("eigenvalue").at(1).get<double>());
    ev.hessian_min_singular = j.at("hessian_min_singular").get<double>();
  } else {
    ev.citation = j.value("citation", "");
  }
  return ev;
}

json region_to_json(const Region& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back(p);
  return json{{"name", r.name}, {"points", pts}};
}

Region region_from_json(const json& j) {
  Region r;
  r.name = j.at("name").get<std::string>();
  for (const auto& p : j.at("points"))
    r.points.push_back(p.get<std::vector<double>>());
  return r;
}

}  // namespace

std::string certificate_to_json(const Certificate& c) {
  json pairs = json::array();
  for (const PairVerdict& pv : c.pairs)
    pairs.push_back({{"i", pv.i},
                     {"j", pv.j},
                     {"gap", pv.gap},
                     {"delta", pv.delta},
                     {"mu", pv.mu},
                     {"distinct", pv.distinct}});
  json zeta = json::object();
  for (const auto& [k, v] : c.zeta.values) zeta[k] = v;
  json deps = json::object();
  for (const auto& [k, v] : c.dependency_hashes) deps[k] = v;
  json j{{"kind", "separation_certificate"},
         {"space", c.space},
         {"labels", c.labels},
         {"gap", c.gap},
         {"delta", c.delta},
         {"zeta", zeta},
         {"zeta_unit", c.unit_value},
         {"gamma_bar", c.norm_value},
         {"pairs", pairs},
         {"separated", c.separated},
         {"dependencies", deps},
         {"notes", c.notes}};
  return j.dump(2) + "\n";
}

std::string registry_to_json(const SuperheavyRegistry& reg) {
  json entries = json::array();
  for (const RegistryEntry& e : reg.entries) {
    json evs = json::array();
    for (const Evidence& ev : e.evidence) evs.push_back(evidence_to_json(ev));
    entries.push_back({{"label", e.label},
                       {"region", region_to_json(e.region)},
                       {"evidence", evs}});
  }
  json j{{"kind", "superheavy_registry"},
         {"space", reg.space},
         {"entries", entries}};
  return j.dump(2) + "\n";
}

void write_registry_json(const std::string& path,
                         const SuperheavyRegistry& reg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << registry_to_json(reg);
}

SuperheavyRegistry read_registry_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open registry: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": bad registry JSON: " + e.what());
  }
  if (j.value("kind", "") != "superheavy_registry")
    throw std::runtime_error(path + ": not a superheavy registry file");
  SuperheavyRegistry reg;
  reg.space = j.value("space", "");
  for (const auto& e : j.at("entries")) {
    RegistryEntry entry;
    entry.label = e.at("label").get<std::string>();
    entry.region = region_from_json(e.at("region"));
    if (entry.region.points.empty())
      throw std::runtime_error(path + ": entry '" + entry.label +
                               "' has an empty region");
    for (const auto& ev : e.at("evidence")) {
      Evidence parsed = evidence_from_json(ev);
      validate_evidence(parsed);
      entry.evidence.push_back(std::move(parsed));
    }
    if (entry.evidence.empty())
      throw std::runtime_error(path + ": entry '" + entry.label +
                               "' carries no evidence");
    if (reg.find(entry.label))
      throw std::runtime_error(path + ": duplicate label '" + entry.label +
                               "'");
    reg.entries.push_back(std::move(entry));
  }
  return reg;
}

}  // namespace gzkit
