#pragma once

// Command runners behind the CLI. Each returns a JSON report (with the
// resolved config and library version embedded) and optional CSV data.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "resonance/config.hpp"

namespace resonance {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInvalid = 2 };

struct CommandResult {
  int exit_code = kExitPass;
  nlohmann::ordered_json report;  // {command, version, config, report, pass}
  std::string csv;                // empty when the command has no table
  bool csv_primary = false;       // print the CSV rather than the JSON without --out
};

/// Runs cfg.command(). Invalid parameters surface as InvalidArgument (exit
/// code 2 in the CLI); failed checks set exit_code = 1.
CommandResult run_command(const ExperimentConfig& cfg, unsigned threads);

struct KernelSuiteOptions {
  std::vector<int> etas{1, 2, 4, 8};
  double epsilon = 0.5;
  double logT = 2.0;
  int oracle_points = 100;
  int monotone_samples = 1000;
  double oracle_tol = 1e-8;
  int large_eta = 200;
  std::uint64_t seed = 1;
};

/// Support, bounds, monotonicity, closed form against quadrature at random
/// points and K-hat(0) against sqrt(3 pi / eta) at a large eta. Sets pass.
nlohmann::ordered_json kernel_suite(const KernelSuiteOptions& opt, unsigned threads, bool& pass);

}  // namespace resonance
