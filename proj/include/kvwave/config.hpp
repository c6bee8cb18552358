#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kvwave/regions.hpp"
#include "kvwave/stepper.hpp"

namespace kvwave {

/// Fully validated scenario description, parsed from the flat sectioned
/// key-value format (`section.key = value`, `#` comments). Defaults are
/// documented in the README; parse_config reports every violation at once.
struct ScenarioConfig {
  // domain
  int dim = 1;
  std::vector<double> extents{1.0};
  std::vector<int> counts{199};

  // regions
  RegionSpec core = RegionSpec::make_all();
  double band_eps = 0.0;

  // damping
  ProfileSpec kv_shape{"zero", 0.0};
  ProfileSpec friction_shape{"zero", 0.0};
  double friction_floor = 0.0;

  // laws
  std::string f_kind = "zero";
  double f_p = 1.0;
  std::vector<std::string> g_kinds{"linear"};

  // time
  double dt = 0.0;       // 0 -> 0.5 * min spacing
  double theta = 0.5;
  double t_final = 1.0;
  double t_sample = 0.0; // 0 -> 10 * dt
  double solver_tol = 1e-10;
  int max_iters = 50;
  SolverKind solver = SolverKind::newton;

  // initial
  std::string preset = "sine"; // zero | sine | modes | random
  std::vector<double> u_modes, v_modes;
  std::uint64_t seed = 1;
  double amplitude = 1.0;

  // output
  std::string out_dir = "out";

  // task
  std::string task = "simulate"; // simulate | decay | observability | sweep

  // decay task
  double decay_window = 0.0;  // 0 -> t_sample
  double decay_c_obs = 0.0;   // 0 -> calibrate empirically
  int decay_calib_samples = 8;

  // observability task
  int obs_samples = 8;
  double obs_window = 0.0; // 0 -> t_final
  double obs_radius = 1.0;

  // sweep task
  std::vector<std::string> sweep_configs;

  std::map<std::string, std::string> raw; // parsed keys, echoed in the manifest

  // Derived, filled by finalize(): step count, sampling stride.
  int n_steps = 0;
  int sample_stride = 1;
};

/// Parses and validates; throws ConfigInvalid carrying the full list of
/// violations (one `key: reason` line each), not just the first.
ScenarioConfig parse_config(const std::string& text);

ScenarioConfig load_config_file(const std::string& path);

} // namespace kvwave
