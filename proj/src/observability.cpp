#include "kvwave/observability.hpp"

#include <algorithm>
#include <cmath>

#include "kvwave/initial_data.hpp"

namespace kvwave {

double damping_functional(const Trajectory& traj, double T) {
  if (traj.t.empty()) fail(Err::EmptyTrajectory, "trajectory has no samples");
  if (traj.t.back() < T * (1.0 - 1e-9))
    fail(Err::TrajectoryTooShort,
         "trajectory ends at " + std::to_string(traj.t.back()) + ", need " + std::to_string(T));
  if (T <= traj.t.front()) return 0.0;
  // Linear interpolation between samples (exact when T is a sample instant).
  const auto it = std::lower_bound(traj.t.begin(), traj.t.end(), T - 1e-12);
  size_t k = static_cast<size_t>(it - traj.t.begin());
  if (k >= traj.t.size()) k = traj.t.size() - 1;
  if (std::abs(traj.t[k] - T) <= 1e-9 * std::max(1.0, T)) return traj.obs_cum[k];
  if (k == 0) return traj.obs_cum[0];
  const double w = (T - traj.t[k - 1]) / (traj.t[k] - traj.t[k - 1]);
  return traj.obs_cum[k - 1] + w * (traj.obs_cum[k] - traj.obs_cum[k - 1]);
}

ObservabilityReport estimate_constant(const Model& model, const StepParams& params, int n_samples,
                                      double T, double radius, std::uint64_t seed) {
  if (n_samples < 1) fail(Err::ConfigInvalid, "n_samples must be >= 1");
  if (!(T > 0.0) || !(radius > 0.0)) fail(Err::ConfigInvalid, "T and radius must be positive");
  if (model.damping.kv_sup == 0.0 && model.damping.friction_sup == 0.0)
    fail(Err::DampingAbsent, "scenario has no damping, the functional is identically zero");

  ObservabilityReport rep;
  rep.window_T = T;
  rep.radius = radius;
  rep.seed = seed;
  rep.gcc_satisfied = model.damping.gcc_satisfied;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> norm_draw(0.25, 2.0);
  const int n_steps = std::max(1, static_cast<int>(std::llround(T / params.dt)));

  for (int s = 0; s < n_samples; ++s) {
    const double target = radius * norm_draw(rng);
    const SimState init = random_smooth_state(model.grid, 8, target, rng);
    const Trajectory traj = simulate(model, params, init, n_steps, n_steps); // endpoints only
    ObsSample sample;
    sample.id = s;
    sample.e0 = traj.e_total.front();
    sample.functional = traj.obs_cum.back();
    if (sample.functional <= 0.0 && sample.e0 > 0.0)
      fail(Err::DampingAbsent, "sample " + std::to_string(s) +
                                   " has positive energy but zero damping functional");
    sample.ratio = sample.functional > 0.0 ? sample.e0 / sample.functional : 0.0;
    rep.c_emp = std::max(rep.c_emp, sample.ratio);
    rep.samples.push_back(sample);
  }
  return rep;
}

std::vector<SweepRow> sweep_geometries(const std::vector<NamedScenario>& scenarios, int n_samples,
                                       double T, double radius, std::uint64_t seed) {
  std::vector<SweepRow> rows;
  for (const auto& sc : scenarios) {
    SweepRow row;
    row.name = sc.name;
    row.gcc_satisfied = sc.model.damping.gcc_satisfied;
    try {
      const ObservabilityReport rep = estimate_constant(sc.model, sc.params, n_samples, T, radius, seed);
      row.c_emp = rep.c_emp;
    } catch (const Error& e) {
      if (e.code() != Err::DampingAbsent) throw;
      row.damping_absent = true;
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace kvwave
