#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kvwave/stepper.hpp"

namespace kvwave {

/// Superposition of the first Dirichlet sine modes: sum_k c_k sin(k pi x / L)
/// in 1D, and the diagonal products sin(k pi x / Lx) sin(k pi y / Ly) in 2D.
NodalField mode_superposition(GridPtr grid, const std::vector<double>& coeffs);

SimState make_state(GridPtr grid, const std::vector<double>& u_coeffs,
                    const std::vector<double>& v_coeffs);

/// sqrt( int |grad u|^2 + int |v|^2 ): the discrete energy-space norm.
double energy_space_norm(const SimState& state);

/// Smooth random initial data: seeded coefficients on the first `n_modes`
/// modes for both u and v, rescaled to the requested energy-space norm.
SimState random_smooth_state(GridPtr grid, int n_modes, double target_norm, std::mt19937_64& rng);

} // namespace kvwave
