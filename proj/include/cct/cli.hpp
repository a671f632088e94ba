#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cct {

struct RunConfig {
  double tol = 1e-9;
  int grid_size = 64;
  double grid_radius = 0.8;
  bool radius_set = false;  // --radius given explicitly
  std::uint64_t seed = 1;
  int truncation_N = 8;
  int dim_cap = 20000;
};

struct CommandResult {
  int exit_code = 0;    // 0 ok, 1 refuted, 2 input error, 3 resource cap
  std::string output;   // JSON or CSV, newline-terminated
};

// The three commands, as pure functions of (input text, config). Errors are
// mapped to exit codes and a JSON error body instead of escaping.
CommandResult cmd_report(const std::string& tuple_json, const RunConfig& cfg);
CommandResult cmd_sample_theta(const std::string& tuple_json,
                               const RunConfig& cfg);
CommandResult cmd_verify(const std::vector<std::string>& inputs_json,
                         const std::string& mode, const RunConfig& cfg);

}  // namespace cct
