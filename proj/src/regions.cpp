#include "kvwave/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kvwave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double Regions::dist_to_core(const std::array<double, 2>& x) const {
  if (core_spec.kind == RegionSpec::Kind::all) return 0.0;
  if (core_spec.kind == RegionSpec::Kind::none) return kInf;
  double s = 0.0;
  for (int a = 0; a < grid->dim; ++a) {
    const double d = std::max({0.0, core_spec.lo[a] - x[a], x[a] - core_spec.hi[a]});
    s += d * d;
  }
  return std::sqrt(s);
}

double Regions::dist_to_core_boundary(const std::array<double, 2>& x) const {
  if (core_spec.kind != RegionSpec::Kind::box) return kInf;
  const double outside = dist_to_core(x);
  if (outside > 0.0) return outside;
  double inside = kInf;
  for (int a = 0; a < grid->dim; ++a)
    inside = std::min({inside, x[a] - core_spec.lo[a], core_spec.hi[a] - x[a]});
  return inside;
}

double Regions::measure(const std::vector<std::uint8_t>& node_mask) const {
  double n = 0.0;
  for (auto b : node_mask) n += b ? 1.0 : 0.0;
  return n * grid->cell_measure();
}

Regions build_regions(GridPtr grid, const RegionSpec& core, double band_eps) {
  Regions r;
  r.grid = grid;
  r.core_spec = core;
  r.band_eps = band_eps;

  if (core.kind == RegionSpec::Kind::box) {
    double gap = kInf;
    for (int a = 0; a < grid->dim; ++a) {
      if (!(core.lo[a] < core.hi[a]))
        fail(Err::ConfigInvalid, "core box must have positive extent on axis " + std::to_string(a));
      if (!(core.lo[a] > 0.0) || !(core.hi[a] < grid->extent[a]))
        fail(Err::RegionTouchesBoundary, "core box must be strictly interior to the domain");
      gap = std::min({gap, core.lo[a], grid->extent[a] - core.hi[a]});
    }
    if (!(band_eps > 0.0)) fail(Err::ConfigInvalid, "band_eps must be positive for a box core");
    if (!(band_eps < gap))
      fail(Err::EpsTooLarge, "band_eps=" + std::to_string(band_eps) +
                                 " must be < dist(core boundary, domain boundary)=" + std::to_string(gap));
  }

  const int n = grid->node_count();
  r.node_core.assign(n, 0);
  r.node_collar.assign(n, 0);
  r.node_band.assign(n, 0);
  r.node_deep_core.assign(n, 0);

  const int n0 = grid->count[0];
  const int n1 = grid->dim == 2 ? grid->count[1] : 1;
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n0; ++i) {
      const int k = grid->dim == 2 ? grid->node_index(i, j) : i;
      std::array<double, 2> x{grid->node_coord(0, i), grid->dim == 2 ? grid->node_coord(1, j) : 0.0};
      const bool in_core = r.dist_to_core(x) == 0.0;
      r.node_core[k] = in_core;
      r.node_collar[k] = !in_core;
      const double db = r.dist_to_core_boundary(x);
      r.node_band[k] = db < band_eps;
      r.node_deep_core[k] = in_core && db > 0.5 * band_eps;
    }

  for (int a = 0; a < grid->dim; ++a) {
    r.face_core[a].assign(grid->face_count(a), 0);
    const int nf = grid->count[a] + 1;
    const int lines = grid->face_lines(a);
    for (int l = 0; l < lines; ++l)
      for (int f = 0; f < nf; ++f) {
        const int idx = grid->dim == 2 ? (a == 0 ? grid->face_index(0, f, l) : grid->face_index(1, l, f)) : f;
        std::array<double, 2> x{0.0, 0.0};
        if (grid->dim == 1) {
          x[0] = grid->face_coord(0, f);
        } else if (a == 0) {
          x[0] = grid->face_coord(0, f);
          x[1] = grid->node_coord(1, l);
        } else {
          x[0] = grid->node_coord(0, l);
          x[1] = grid->face_coord(1, f);
        }
        r.face_core[a][idx] = r.dist_to_core(x) == 0.0;
      }
  }
  return r;
}

namespace {

/// Face coordinate for axis `a`, face index f along the axis, cross line l.
std::array<double, 2> face_point(const Grid& g, int a, int f, int l) {
  if (g.dim == 1) return {g.face_coord(0, f), 0.0};
  if (a == 0) return {g.face_coord(0, f), g.node_coord(1, l)};
  return {g.node_coord(0, l), g.face_coord(1, f)};
}

bool boundary_collar_damped(const Grid& g, const std::array<std::vector<double>, 2>& kv) {
  // Sufficient geometric-control test: every node adjacent to the domain
  // boundary must have all incident faces carrying a positive coefficient.
  const int n0 = g.count[0];
  if (g.dim == 1) {
    return kv[0][0] > 0.0 && kv[0][1] > 0.0 && kv[0][n0 - 1] > 0.0 && kv[0][n0] > 0.0;
  }
  const int n1 = g.count[1];
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n0; ++i) {
      const bool edge = i == 0 || i == n0 - 1 || j == 0 || j == n1 - 1;
      if (!edge) continue;
      if (!(kv[0][g.face_index(0, i, j)] > 0.0)) return false;
      if (!(kv[0][g.face_index(0, i + 1, j)] > 0.0)) return false;
      if (!(kv[1][g.face_index(1, i, j)] > 0.0)) return false;
      if (!(kv[1][g.face_index(1, i, j + 1)] > 0.0)) return false;
    }
  return true;
}

} // namespace

DampingProfile build_damping(GridPtr grid, const Regions& regions, const ProfileSpec& kv_shape,
                             const ProfileSpec& friction_shape, double friction_floor) {
  if (kv_shape.amplitude < 0.0 || friction_shape.amplitude < 0.0 || friction_floor < 0.0)
    fail(Err::NegativeCoefficient, "damping coefficients must be nonnegative");

  DampingProfile p;
  p.grid = grid;
  p.friction_floor = friction_floor;

  // Viscoelastic coefficient on faces.
  if (kv_shape.kind == "constant" && regions.core_spec.kind != RegionSpec::Kind::none)
    fail(Err::ConfigInvalid, "kv shape 'constant' requires an empty core region");
  if (kv_shape.kind == "bump" && regions.core_spec.kind != RegionSpec::Kind::box)
    fail(Err::ConfigInvalid, "kv shape 'bump' requires a box core region");

  double d_max = 0.0;
  if (kv_shape.kind == "bump") {
    for (int a = 0; a < grid->dim; ++a) {
      const int nf = grid->count[a] + 1;
      for (int l = 0; l < grid->face_lines(a); ++l)
        for (int f = 0; f < nf; ++f)
          d_max = std::max(d_max, regions.dist_to_core(face_point(*grid, a, f, l)));
    }
  }

  for (int a = 0; a < grid->dim; ++a) {
    p.kv_faces[a].assign(grid->face_count(a), 0.0);
    const int nf = grid->count[a] + 1;
    for (int l = 0; l < grid->face_lines(a); ++l)
      for (int f = 0; f < nf; ++f) {
        const int idx =
            grid->dim == 2 ? (a == 0 ? grid->face_index(0, f, l) : grid->face_index(1, l, f)) : f;
        double v = 0.0;
        if (kv_shape.kind == "zero") {
          v = 0.0;
        } else if (kv_shape.kind == "constant") {
          v = kv_shape.amplitude;
        } else if (kv_shape.kind == "bump") {
          const double d = regions.dist_to_core(face_point(*grid, a, f, l));
          const double t = d_max > 0.0 ? d / d_max : 0.0;
          v = kv_shape.amplitude * std::min(1.0, t * t);
        } else {
          fail(Err::ConfigInvalid, "unknown kv shape '" + kv_shape.kind + "' (catalog: bump, constant, zero)");
        }
        p.kv_faces[a][idx] = v;
        p.kv_sup = std::max(p.kv_sup, v);
      }
  }

  // Frictional coefficient on nodes.
  const int n = grid->node_count();
  p.friction_nodes.assign(n, 0.0);
  if (friction_shape.kind == "band" && regions.core_spec.kind != RegionSpec::Kind::box)
    fail(Err::ConfigInvalid, "friction shape 'band' requires a box core region");
  for (int k = 0; k < n; ++k) {
    double v = 0.0;
    if (friction_shape.kind == "zero") {
      v = 0.0;
    } else if (friction_shape.kind == "constant") {
      v = friction_shape.amplitude;
    } else if (friction_shape.kind == "band") {
      const double amp = friction_shape.amplitude > 0.0 ? friction_shape.amplitude : friction_floor;
      v = regions.node_band[k] ? amp : 0.0;
    } else {
      fail(Err::ConfigInvalid,
           "unknown friction shape '" + friction_shape.kind + "' (catalog: band, constant, zero)");
    }
    p.friction_nodes[k] = v;
    p.friction_sup = std::max(p.friction_sup, v);
  }

  if (friction_floor > 0.0) {
    for (int k = 0; k < n; ++k)
      if (regions.node_band[k] && p.friction_nodes[k] < friction_floor)
        fail(Err::EtaFloorViolated, "friction below floor " + std::to_string(friction_floor) +
                                        " on the interface band (node " + std::to_string(k) + ")");
  }

  p.gcc_satisfied = boundary_collar_damped(*grid, p.kv_faces);
  return p;
}

} // namespace kvwave
