#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "kvwave/grid.hpp"

namespace kvwave {

/// Description of the undamped core region (an interval in 1D, an axis-aligned
/// rectangle in 2D), or one of the degenerate cases:
///  - `none`: the core is empty, the whole domain carries viscoelastic damping;
///  - `all`:  the core is the whole domain (no viscoelastic damping anywhere).
struct RegionSpec {
  enum class Kind { box, none, all };
  Kind kind = Kind::box;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};

  static RegionSpec make_none() { return RegionSpec{Kind::none, {}, {}}; }
  static RegionSpec make_all() { return RegionSpec{Kind::all, {}, {}}; }
  static RegionSpec interval(double a, double b) { return RegionSpec{Kind::box, {a, 0}, {b, 0}}; }
  static RegionSpec rect(double ax, double bx, double ay, double by) {
    return RegionSpec{Kind::box, {ax, ay}, {bx, by}};
  }
};

/// Rasterized decomposition of the domain: the undamped core, the damped
/// collar (its complement), the interface band of half-width `band_eps`
/// around the core boundary, and the deep core (points of the core farther
/// than band_eps/2 from the core boundary). A node belongs to a set iff its
/// coordinate does; no partial-volume weighting.
struct Regions {
  GridPtr grid;
  RegionSpec core_spec;
  double band_eps = 0.0;

  std::vector<std::uint8_t> node_core;      // undamped core
  std::vector<std::uint8_t> node_collar;    // complement of the core
  std::vector<std::uint8_t> node_band;      // d(x, core boundary) < band_eps
  std::vector<std::uint8_t> node_deep_core; // in core, d(x, core boundary) > band_eps/2

  std::array<std::vector<std::uint8_t>, 2> face_core; // face coordinate inside the core

  /// Distance from a point to the (closed) core box; 0 inside, +inf for an empty core.
  double dist_to_core(const std::array<double, 2>& x) const;
  /// Distance to the boundary of the core box (from either side); +inf when degenerate.
  double dist_to_core_boundary(const std::array<double, 2>& x) const;

  double measure(const std::vector<std::uint8_t>& node_mask) const;
};

/// Builds the region masks. Throws RegionTouchesBoundary when a box core is
/// not strictly interior, EpsTooLarge when band_eps >= dist(core bdry, domain bdry).
Regions build_regions(GridPtr grid, const RegionSpec& core, double band_eps);

/// Distributed damping coefficients: the viscoelastic coefficient on faces and
/// the frictional coefficient on nodes, plus the floor the friction must meet
/// on the interface band and a sufficient-condition geometric-control flag.
struct DampingProfile {
  GridPtr grid;
  std::array<std::vector<double>, 2> kv_faces; // a(x) sampled at faces
  std::vector<double> friction_nodes;          // eta(x) sampled at nodes
  double friction_floor = 0.0;                 // eta_0
  double kv_sup = 0.0;                         // max a
  double friction_sup = 0.0;                   // max eta
  bool gcc_satisfied = false;
};

/// Shape of a coefficient field.
///  kv kinds:      "bump" (amplitude * (d(x,core)/d_max)^2, zero exactly on the core),
///                 "constant" (requires an empty core), "zero".
///  friction kinds:"band" (floor value on the interface band, zero elsewhere),
///                 "constant" (amplitude everywhere), "zero".
struct ProfileSpec {
  std::string kind;
  double amplitude = 0.0;
};

/// Builds and validates the damping fields. Throws NegativeCoefficient and
/// EtaFloorViolated (friction below `friction_floor` somewhere on the band).
DampingProfile build_damping(GridPtr grid, const Regions& regions, const ProfileSpec& kv_shape,
                             const ProfileSpec& friction_shape, double friction_floor);

} // namespace kvwave
