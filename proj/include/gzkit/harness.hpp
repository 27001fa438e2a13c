#pragma once

// End-to-end verification suite: one call sweeps every module (scalar
// arithmetic, multiplication tables, idempotents, potential/spectrum match,
// fibration levels, disjointness, degeneration flows, separation
// certificates, ingested tables) and produces a machine-readable report.
//
// Reports are deterministic: every randomized check derives its stream from
// the master seed and the check's name, the JSON body carries no timestamps,
// and a content hash of the check list is embedded so two runs with the same
// config can be compared byte for byte.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gzkit {

struct RunConfig {
  int n_min = 1;            // quadric dimension sweep (tables, levels)
  int n_max = 5;
  int newton_starts = 160;  // multistart budget for the potential solve
  int gz_points = 32;       // samples per fibration-level check
  int biran_pairs = 200;    // samples for the disjointness certificate
  int flow_n_max = 3;       // flows run for n = 2 .. flow_n_max
  int flow_count = 2;       // trajectories per Lagrangian class
  double flow_s_end = 0.99; // how far each flow marches (t: 1 -> 1 - s_end)
  std::uint64_t seed = 1;
  int scalar_checks = 200;  // random draws in the scalar-arithmetic sweep
  std::string out_dir;      // when nonempty: report + artifacts written here
  std::string table_dir;    // where ingested .qht/.json live ("" = skip)
  std::string table_override_qn;  // fault injection: "N:path" replaces the
                                  // built-in table for dimension N in the
                                  // table checks only
};

/// Flat "key = value" config text ('#' comments, blank lines allowed).
/// Unknown keys and malformed values throw with the key and origin named.
RunConfig parse_run_config(std::istream& in,
                           const std::string& origin = "<stream>");
RunConfig load_run_config(const std::string& path);

struct CheckResult {
  std::string name;       // stable slug, e.g. "algebra.validate.Q3"
  std::string reference;  // the mathematical fact being verified
  std::string status;     // "pass" | "fail" | "skip"
  double measured = 0;
  double threshold = 0;
  std::string notes;      // skip reasons, failure details
};

struct SuiteReport {
  RunConfig config;
  std::vector<CheckResult> checks;
  int failures = 0;
  int skips = 0;
  bool pass = false;        // no check failed (skips are not failures)
  std::string body_hash;    // FNV-1a-64 of the serialized check list
};

SuiteReport run_suite(const RunConfig& cfg);

/// Deterministic JSON: fixed key order, fixed float formatting, no clock.
std::string suite_to_json(const SuiteReport& rep);

/// 0 when every check passed (skips allowed), 1 otherwise.
int suite_exit_code(const SuiteReport& rep);

}  // namespace gzkit
