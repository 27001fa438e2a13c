// Shipped-table round: the .qht files under data/ are produced offline by
// tools/make_dp_tables.py, which proves associativity in exact rational
// arithmetic before writing. Ingesting them here re-derives every axiom
// (unit, commutativity, associativity, grading) through the independent
// C++ validator, so the files are accepted only when both routes agree.

#include <complex>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "gzkit/algebra.hpp"
#include "gzkit/novikov.hpp"
#include "gzkit/spectral.hpp"

using namespace gzkit;

namespace {

std::string data_path(const std::string& file) {
  return std::string(GZKIT_DATA_DIR) + "/" + file;
}

bool have(const std::string& file) {
  std::ifstream in(data_path(file));
  return in.good();
}

Element basis_element(const AlgebraTable& t, const std::string& label) {
  Element e = t.zero_element();
  e[t.index_of(label)] = NovikovScalar::one();
  return e;
}

NovikovScalar term(double re, long num, long den = 1) {
  return NovikovScalar::monomial(Complex(re, 0.0), Rational(num, den));
}

}  // namespace

TEST_CASE("shipped blowup tables pass the independent validator") {
  for (const std::string name : {"dp2.qht", "dp3.qht", "dp4.qht"}) {
    CAPTURE(name);
    REQUIRE(have(name));
    ValidationReport warnings;
    AlgebraTable t = ingest_table(data_path(name), &warnings);
    CHECK(warnings.ok());
    CHECK(t.deg_T == 2);
    CHECK(t.basis.labels.front() == "1");
    CHECK(t.basis.labels.back() == "pt");
    CHECK(t.basis.degrees.back() == 4);
    // Anticanonical class: 3H minus every exceptional class.
    CHECK(t.c1[t.index_of("H")] == term(3.0, 0));
    for (int k = 0; k < t.dim(); ++k) {
      const std::string& l = t.basis.labels[k];
      if (l.size() == 2 && l[0] == 'E') CHECK(t.c1[k] == term(-1.0, 0));
    }
  }
}

TEST_CASE("frozen product in the three-point blowup table") {
  // Hand computation kept as an anchor: E1 * E1 =
  //   -pt + q (2H - E1 - E2 - E3) + q^2 * 1   (q tracks one unit of area).
  if (!have("dp3.qht")) return;
  AlgebraTable t = ingest_table(data_path("dp3.qht"), nullptr);
  Element prod = multiply(t, basis_element(t, "E1"), basis_element(t, "E1"));
  Element expect = t.zero_element();
  expect[t.index_of("pt")] = term(-1.0, 0);
  expect[t.index_of("H")] = term(2.0, 1);
  expect[t.index_of("E1")] = term(-1.0, 1);
  expect[t.index_of("E2")] = term(-1.0, 1);
  expect[t.index_of("E3")] = term(-1.0, 1);
  expect[t.index_of("1")] = term(1.0, 2);
  REQUIRE(prod.size() == expect.size());
  for (size_t k = 0; k < prod.size(); ++k) {
    CAPTURE(k);
    CHECK(prod[k] == expect[k]);
  }
}

TEST_CASE("three-point blowup algebra is semisimple with six factors") {
  if (!have("dp3.qht")) return;
  AlgebraTable t = ingest_table(data_path("dp3.qht"), nullptr);
  IdempotentDecomposition dec = primitive_idempotents(t, 7);
  CHECK(dec.semisimple);
  CHECK(dec.idempotents.size() == 6);
  // Idempotents resolve the unit and annihilate each other.
  Element sum = t.zero_element();
  for (const Element& e : dec.idempotents) sum = element_add(sum, e);
  Element resolved = element_sub(sum, t.unit_element());
  for (int k = 0; k < t.dim(); ++k)
    CHECK(std::abs(resolved[k].eval(1.0)) < 1e-8);
}

TEST_CASE("tampered copy of a shipped table is rejected") {
  if (!have("dp2.qht")) return;
  AlgebraTable t = ingest_table(data_path("dp2.qht"), nullptr);
  // Corrupt one structure constant; exact associativity must notice.
  int h = t.index_of("H");
  int ptc = t.index_of("pt");
  // The perturbation keeps the grading legal (slot exponent 3) so only the
  // exact associativity sweep can catch it.
  t.sc[h][ptc][t.index_of("1")] =
      t.sc[h][ptc][t.index_of("1")] + term(0.5, 3);
  t.sc[ptc][h] = t.sc[h][ptc];
  ValidationReport rep = validate_table(t);
  CHECK(!rep.ok());
  bool assoc = false;
  for (const auto& issue : rep.issues)
    if (issue.kind == "associativity") assoc = true;
  CHECK(assoc);
}

TEST_CASE("shipped registry separates three ingested regions") {
  if (!have("dp3_registry.json")) return;
  SuperheavyRegistry reg = read_registry_json(data_path("dp3_registry.json"));
  CHECK(reg.space == "dp3");
  REQUIRE(reg.entries.size() == 3);
  for (const auto& entry : reg.entries) {
    REQUIRE(!entry.evidence.empty());
    CHECK(entry.evidence.front().kind == "citation");
  }

  std::map<std::string, std::string> deps;
  deps["table"] = table_to_string(ingest_table(data_path("dp3.qht"), nullptr));
  Certificate cert = separation_certificate(reg, deps);
  CHECK(cert.separated);
  CHECK(cert.labels == std::vector<std::string>{"e1", "e2", "e3"});
  // Circles of radius 1/4 centered at (0,0), (3,0), (0,3): the sampled
  // sup-norm gap is attained on the axis pairs at 3 - 1/4 - 1/4.
  CHECK(cert.gap == doctest::Approx(2.5));
  CHECK(cert.delta == doctest::Approx(0.625));
  CHECK(cert.zeta.values.at("e1") == doctest::Approx(2.0));
  CHECK(cert.zeta.values.at("e2") == doctest::Approx(1.0));
  CHECK(cert.zeta.values.at("e3") == doctest::Approx(0.0));
  CHECK(cert.unit_value == doctest::Approx(2.0));
  CHECK(cert.norm_value == doctest::Approx(2.0));
  REQUIRE(cert.pairs.size() == 3);
  for (const auto& pv : cert.pairs) {
    CHECK(pv.distinct);
    CHECK(pv.mu == doctest::Approx(1.0));
  }
  REQUIRE(cert.dependency_hashes.count("table") == 1);
  CHECK(cert.dependency_hashes.at("table").size() == 16);
}
