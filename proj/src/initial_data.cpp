#include "kvwave/initial_data.hpp"

#include <cmath>

namespace kvwave {

NodalField mode_superposition(GridPtr grid, const std::vector<double>& coeffs) {
  NodalField out(grid);
  const int n0 = grid->count[0];
  const int n1 = grid->dim == 2 ? grid->count[1] : 1;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    const double c = coeffs[k];
    if (c == 0.0) continue;
    const double kx = (k + 1) * M_PI / grid->extent[0];
    const double ky = grid->dim == 2 ? (k + 1) * M_PI / grid->extent[1] : 0.0;
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const int idx = grid->dim == 2 ? grid->node_index(i, j) : i;
        double phi = std::sin(kx * grid->node_coord(0, i));
        if (grid->dim == 2) phi *= std::sin(ky * grid->node_coord(1, j));
        out[idx] += c * phi;
      }
  }
  return out;
}

SimState make_state(GridPtr grid, const std::vector<double>& u_coeffs,
                    const std::vector<double>& v_coeffs) {
  SimState s;
  s.t = 0.0;
  s.u = mode_superposition(grid, u_coeffs);
  s.v = mode_superposition(grid, v_coeffs);
  return s;
}

double energy_space_norm(const SimState& state) {
  const FaceField gu = gradient(state.u);
  return std::sqrt(inner(gu, gu) + inner(state.v, state.v));
}

SimState random_smooth_state(GridPtr grid, int n_modes, double target_norm, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> uc(n_modes), vc(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    uc[k] = coef(rng);
    vc[k] = coef(rng);
  }
  SimState s = make_state(grid, uc, vc);
  const double norm = energy_space_norm(s);
  if (norm > 0.0 && target_norm > 0.0) {
    const double scale = target_norm / norm;
    for (auto& x : s.u.v) x *= scale;
    for (auto& x : s.v.v) x *= scale;
  }
  return s;
}

} // namespace kvwave
