#pragma once

#include <array>
#include <vector>

#include "kvwave/grid.hpp"

namespace kvwave {

/// Scalar field with one value per interior node. Dirichlet extension by zero
/// at the boundary is implied by every operator below.
struct NodalField {
  GridPtr grid;
  std::vector<double> v;

  NodalField() = default;
  explicit NodalField(GridPtr g) : grid(std::move(g)), v(grid->node_count(), 0.0) {}
  NodalField(GridPtr g, std::vector<double> values) : grid(std::move(g)), v(std::move(values)) {}

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  int size() const { return static_cast<int>(v.size()); }
};

/// Vector field with one value per face and axis (gradients and fluxes live here).
struct FaceField {
  GridPtr grid;
  std::array<std::vector<double>, 2> comp; // comp[axis], comp[1] empty in 1D

  FaceField() = default;
  explicit FaceField(GridPtr g) : grid(std::move(g)) {
    for (int a = 0; a < grid->dim; ++a) comp[a].assign(grid->face_count(a), 0.0);
  }
};

/// Centered difference u -> grad u on faces, boundary nodes taken as 0.
FaceField gradient(const NodalField& u);

/// Discrete divergence, the exact negative adjoint of `gradient` under the
/// node/face inner products: <grad u, w> + <u, div w> = 0 to roundoff.
NodalField divergence(const FaceField& w);

/// divergence(gradient(u)): the standard (2n+1)-point Dirichlet stencil.
NodalField laplacian(const NodalField& u);

double integrate(const NodalField& u);
double integrate(const FaceField& w);

double inner(const NodalField& a, const NodalField& b);
double inner(const FaceField& a, const FaceField& b);

double l2_norm(const NodalField& a);

bool all_finite(const NodalField& a);

} // namespace kvwave
