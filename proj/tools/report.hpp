#pragma once

#include <string>
#include <vector>

#include "checks.hpp"

namespace mirrorforge::cli {

inline constexpr int kSchemaVersion = 1;

// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.
enum ExitCode { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

struct RunOutcome {
  std::vector<CheckResult> results;
  Json report;
  int exit_code = kExitPass;
};

// Runs the checks in declared order. Wall times only appear with timing = true.
RunOutcome run_scenario(const Scenario& scenario, bool timing = false);

struct ConvergenceOutcome {
  std::string csv;
  Json report;
  int exit_code = kExitPass;
};

// Reruns the scenario at each resolution. CSV columns: n, h, then <id>_residual and
// <id>_order per check; the residual column holds the check's refinement quantity when
// it has one. Orders are log(r1/r2)/log(h1/h2) between successive rows, or
// "exact" when the check is exact and its residual is zero.
ConvergenceOutcome convergence_study(const Scenario& scenario, const std::vector<int>& resolutions, bool timing = false);

double observed_order(double r_coarse, double r_fine, double h_coarse, double h_fine);

// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace mirrorforge::cli
