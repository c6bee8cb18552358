#pragma once

#include <array>
#include <memory>
#include <vector>

#include "kvwave/errors.hpp"

namespace kvwave {

/// Uniform tensor grid of interior nodes on a 1D interval or 2D rectangle with
/// homogeneous Dirichlet boundary. Boundary values are identically zero and are
/// never stored as unknowns.
///
/// Layout (per axis a): count[a] interior nodes at x_i = (i+1)*spacing[a] and
/// count[a]+1 faces at x_j = (j+1/2)*spacing[a], so that face j sits between
/// node j-1 and node j (node -1 / node count[a] denote the boundary).
/// Node ordering is lexicographic, x fastest: index = i + count[0]*j.
struct Grid {
  int dim = 1;
  std::array<double, 2> extent{0.0, 0.0};  // physical length per axis
  std::array<int, 2> count{0, 0};          // interior node count per axis (count[1]=0 in 1D)
  std::array<double, 2> spacing{0.0, 0.0}; // mesh width h per axis

  std::array<std::vector<double>, 2> axis_node_coords; // per-axis interior node coordinates
  std::array<std::vector<double>, 2> axis_face_coords; // per-axis face coordinates

  int node_count() const { return dim == 1 ? count[0] : count[0] * count[1]; }

  /// Number of faces for the given axis (all cross-axis lines combined).
  int face_count(int axis) const {
    if (dim == 1) return count[0] + 1;
    return axis == 0 ? (count[0] + 1) * count[1] : count[0] * (count[1] + 1);
  }

  /// Quadrature weight of one node (and of one face): h in 1D, hx*hy in 2D.
  double cell_measure() const { return dim == 1 ? spacing[0] : spacing[0] * spacing[1]; }

  double domain_measure() const { return dim == 1 ? extent[0] : extent[0] * extent[1]; }

  int node_index(int i, int j) const { return i + count[0] * j; }

  /// Face index for `axis`; for axis 0 the face coordinate index i runs over
  /// 0..count[0] and j over cross lines, symmetrically for axis 1.
  int face_index(int axis, int i, int j) const {
    return axis == 0 ? i + (count[0] + 1) * j : i + count[0] * j;
  }

  double node_coord(int axis, int i) const { return axis_node_coords[axis][i]; }
  double face_coord(int axis, int j) const { return axis_face_coords[axis][j]; }

  /// Cross-line count for faces of `axis` (1 in 1D).
  int face_lines(int axis) const {
    if (dim == 1) return 1;
    return axis == 0 ? count[1] : count[0];
  }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds a validated grid. Throws NonPositiveExtent / TooFewNodes.
GridPtr build_grid(int dim, const std::vector<double>& extents, const std::vector<int>& counts);

} // namespace kvwave
