#include "kvwave/energy.hpp"

#include <cmath>

namespace kvwave {

EnergyBreakdown energy(const SimState& state, const Nonlinearity& source) {
  EnergyBreakdown e;
  e.kinetic = 0.5 * inner(state.v, state.v);
  const FaceField grad_u = gradient(state.u);
  e.potential = 0.5 * inner(grad_u, grad_u);
  NodalField Fu(state.u.grid);
  for (int i = 0; i < Fu.size(); ++i) Fu[i] = source.F(state.u[i]);
  e.source_potential = integrate(Fu);
  e.total = e.kinetic + e.potential + e.source_potential;
  return e;
}

std::pair<double, double> dissipation_rate(const SimState& state, const DampingProfile& damping,
                                           const FeedbackLaw& g) {
  const Grid& grid = *state.u.grid;
  const double meas = grid.cell_measure();
  const FaceField grad_v = gradient(state.v);
  double kv = 0.0;
  for (int a = 0; a < grid.dim; ++a) {
    const auto& gi = g.components[a].g;
    for (size_t f = 0; f < grad_v.comp[a].size(); ++f) {
      const double w = grad_v.comp[a][f];
      kv += damping.kv_faces[a][f] * gi(w) * w;
    }
  }
  double fric = 0.0;
  for (int i = 0; i < state.v.size(); ++i)
    fric += damping.friction_nodes[i] * state.v[i] * state.v[i];
  return {kv * meas, fric * meas};
}

std::vector<double> balance_residual(const Trajectory& traj) {
  if (traj.t.empty()) fail(Err::EmptyTrajectory, "trajectory has no samples");
  const double e0 = traj.e_total.front();
  const double denom = e0 > 0.0 ? e0 : 1.0;
  std::vector<double> r(traj.t.size());
  for (size_t n = 0; n < traj.t.size(); ++n)
    r[n] = std::abs(traj.e_total[n] + traj.d_kv_cum[n] + traj.d_fric_cum[n] - e0) / denom;
  return r;
}

double max_balance_residual(const Trajectory& traj) {
  double m = 0.0;
  for (double r : balance_residual(traj)) m = std::max(m, r);
  return m;
}

} // namespace kvwave
