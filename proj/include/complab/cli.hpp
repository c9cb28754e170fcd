#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace complab {

/// Parsed command line. Unknown flags and malformed specs are rejected at
/// parse time; nothing here has been validated against the math modules
/// yet.
struct RunConfig {
  std::string command;  // weight-check | carleson | essnorm | criterion |
                        // combo | report | help
  std::string help_text;

  std::string weight_spec;
  std::string phi_spec, psi_spec;
  std::vector<std::string> term_specs;  // "<lambda>:<symbol spec>"
  std::string lambda1 = "1", lambda2 = "-1";
  double p = 2.0;
  int dim = 256;
  std::vector<int> cuts = {16, 32, 64, 128};
  std::uint64_t seed = 1;
  std::uint64_t samples = 1'000'000;
  std::string strategy = "mc";  // mc | tensor
  double box_r = 0.5;
  int k_first = 4, k_last = 10;
  int angular = 64;
  std::string chi_far;  // symbol spec for the far-set indicator multiplier
  bool premise = false;
  double zeta_angle = 0.0;
  bool zeta_given = false;
  int grid = 256;
  std::string dump_matrix;  // base path for a row-major re/im CSV pair
  std::string output;
  std::string format = "json";  // json | csv
  std::string replay_path;
};

/// argv without the program name. Throws std::invalid_argument on any
/// parse problem, naming the offending token.
RunConfig parse_config(const std::vector<std::string>& args);

/// Dispatch and write the report to `out` (and to config.output when set,
/// byte-identically). Returns the process exit code: 0 for definitive
/// results, 2 for inconclusive verdicts, 1 for errors (after writing a
/// diagnostic to `err`).
int run_and_emit(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace complab
