#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kvwave/stepper.hpp"

namespace kvwave {

struct ObsSample {
  int id = 0;
  double e0 = 0.0;
  double functional = 0.0;
  double ratio = 0.0;
};

/// Empirical lower bound on the observability constant: the max over a finite
/// ensemble of E(0) / (total damping functional over [0, T]). The sup over all
/// admissible data is not computable; reports state this explicitly.
struct ObservabilityReport {
  double window_T = 0.0;
  double radius = 1.0; // initial energy-space norms drawn from (0, 2*radius)
  std::uint64_t seed = 0;
  bool gcc_satisfied = false;
  std::vector<ObsSample> samples;
  double c_emp = 0.0;
};

/// Time-cumulated damping functional at time T:
///   int_0^T int a (|grad v|^2 + |g(grad v)|^2) + int_0^T int eta |v|^2,
/// read from the trajectory's theta-consistent accumulator. Throws
/// TrajectoryTooShort when the trajectory does not reach T.
double damping_functional(const Trajectory& traj, double T);

/// Simulates `n_samples` seeded random smooth initial states (first 8 modes,
/// energy-space norm in (0, 2*radius]) to time T and takes the max ratio.
/// Deterministic given the seed. Throws DampingAbsent when the scenario has no
/// damping or a sample with positive energy yields a zero functional.
ObservabilityReport estimate_constant(const Model& model, const StepParams& params, int n_samples,
                                      double T, double radius, std::uint64_t seed);

struct NamedScenario {
  std::string name;
  Model model;
  StepParams params;
};

struct SweepRow {
  std::string name;
  bool gcc_satisfied = false;
  bool damping_absent = false;
  double c_emp = 0.0;
};

/// One estimate per scenario; a DampingAbsent failure is recorded in the row,
/// any other error propagates.
std::vector<SweepRow> sweep_geometries(const std::vector<NamedScenario>& scenarios, int n_samples,
                                       double T, double radius, std::uint64_t seed);

} // namespace kvwave
