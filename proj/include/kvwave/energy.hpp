#pragma once

#include <utility>
#include <vector>

#include "kvwave/stepper.hpp"

namespace kvwave {

/// E = 1/2 int |v|^2 + 1/2 int |grad u|^2 + int F(u). Every part is
/// nonnegative, and kinetic + potential is exactly half the squared
/// energy-space norm of (u, v).
struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double source_potential = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy(const SimState& state, const Nonlinearity& source);

/// Instantaneous dissipation rates (kv_rate, friction_rate):
///   kv_rate  = sum_i int a g_i(d_i v) d_i v >= 0,
///   friction = int eta v^2 >= 0.
std::pair<double, double> dissipation_rate(const SimState& state, const DampingProfile& damping,
                                           const FeedbackLaw& g);

/// Per-sample defect of the discrete energy identity,
///   r_n = |E(t_n) + D_kv(t_n) + D_fric(t_n) - E(0)| / E(0)
/// (absolute when E(0) = 0). Throws EmptyTrajectory.
std::vector<double> balance_residual(const Trajectory& traj);

double max_balance_residual(const Trajectory& traj);

} // namespace kvwave
