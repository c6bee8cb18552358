#pragma once

#include <string>
#include <vector>

#include "kvwave/config.hpp"
#include "kvwave/decay.hpp"
#include "kvwave/observability.hpp"

namespace kvwave {

/// A config assembled into runnable pieces (grid, regions, damping, laws,
/// step parameters, initial state).
struct Scenario {
  ScenarioConfig config;
  Model model;
  StepParams params;
  SimState initial;
};

Scenario build_scenario(const ScenarioConfig& config);

/// Convenience: build + simulate per the config's time section.
Trajectory simulate_scenario(const ScenarioConfig& config);

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::vector<std::string> artifacts;
};

/// Executes the config's task and writes its artifacts (timeseries.csv,
/// envelope.csv, observability.csv, sweep.csv, manifest.json) into the output
/// directory; KVWAVE_OUTDIR overrides the configured directory. Partial
/// artifacts are removed on failure. Exit codes: 0 ok, 2 config error,
/// 3 solver failure, 4 assumption violation.
RunResult run(const ScenarioConfig& config);

RunResult run_file(const std::string& config_path);

/// Observability sweep over several scenario files; the first config's
/// observability section fixes the ensemble parameters for every row.
RunResult run_sweep_paths(const std::vector<std::string>& config_paths, const std::string& out_dir);

int exit_code_for(const Error& e);

/// 17-significant-digit formatting used for all floating-point CSV output.
std::string format_g17(double v);

} // namespace kvwave
