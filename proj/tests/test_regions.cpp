#include "doctest.h"

#include <cmath>

#include "kvwave/regions.hpp"

using namespace kvwave;

namespace {

double mask_extent_1d(const Grid& g, const std::vector<std::uint8_t>& mask, bool lo_end) {
  // First/last node coordinate carrying the mask.
  for (int i = 0; i < g.count[0]; ++i) {
    const int k = lo_end ? i : g.count[0] - 1 - i;
    if (mask[k]) return g.node_coord(0, k);
  }
  return std::nan("");
}

} // namespace

TEST_CASE("1D band and deep core from set arithmetic") {
  GridPtr g = build_grid(1, {1.0}, {199});
  Regions r = build_regions(g, RegionSpec::interval(0.3, 0.7), 0.1);

  const double h = g->spacing[0];
  for (int i = 0; i < g->node_count(); ++i) {
    const double x = g->node_coord(0, i);
    const bool in_core = x >= 0.3 && x <= 0.7;
    CHECK(static_cast<bool>(r.node_core[i]) == in_core);
    CHECK(static_cast<bool>(r.node_collar[i]) == !in_core);
    // Independent distance oracle for d(x, core boundary).
    const double dist = in_core ? std::min(x - 0.3, 0.7 - x) : std::min(std::abs(x - 0.3), std::abs(x - 0.7));
    CHECK(static_cast<bool>(r.node_band[i]) == (dist < 0.1));
    CHECK(static_cast<bool>(r.node_deep_core[i]) == (in_core && dist > 0.05));
    // band = (0.2,0.4) u (0.6,0.8); deep core = (0.35,0.65). Checked away from
    // the set boundaries, where floating-point ties are representation noise.
    auto clearly_inside = [&](double lo, double hi) { return x > lo + 0.5 * h && x < hi - 0.5 * h; };
    auto clearly_outside = [&](double lo, double hi) { return x < lo - 0.5 * h || x > hi + 0.5 * h; };
    if (clearly_inside(0.2, 0.4) || clearly_inside(0.6, 0.8)) CHECK(r.node_band[i]);
    if (clearly_outside(0.2, 0.4) && clearly_outside(0.6, 0.8)) CHECK_FALSE(r.node_band[i]);
    if (clearly_inside(0.35, 0.65)) CHECK(r.node_deep_core[i]);
    if (clearly_outside(0.35, 0.65)) CHECK_FALSE(r.node_deep_core[i]);
  }
}

TEST_CASE("band too wide raises EpsTooLarge") {
  GridPtr g = build_grid(1, {1.0}, {99});
  CHECK_THROWS_AS(build_regions(g, RegionSpec::interval(0.3, 0.7), 0.5), Error);
  try {
    build_regions(g, RegionSpec::interval(0.3, 0.7), 0.5); // 0.5 > 0.3
    FAIL("expected EpsTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Err::EpsTooLarge);
  }
  CHECK_NOTHROW(build_regions(g, RegionSpec::interval(0.3, 0.7), 0.29));
}

TEST_CASE("core touching the boundary is rejected") {
  GridPtr g = build_grid(1, {1.0}, {99});
  try {
    build_regions(g, RegionSpec::interval(0.0, 0.7), 0.1);
    FAIL("expected RegionTouchesBoundary");
  } catch (const Error& e) {
    CHECK(e.code() == Err::RegionTouchesBoundary);
  }
  CHECK_THROWS_AS(build_regions(g, RegionSpec::interval(0.3, 1.0), 0.1), Error);
}

TEST_CASE("2D deep core is a centered square up to grid rounding") {
  GridPtr g = build_grid(2, {1.0, 1.0}, {39, 39});
  Regions r = build_regions(g, RegionSpec::rect(0.25, 0.75, 0.25, 0.75), 0.1);
  // Per-node distance oracle.
  for (int j = 0; j < g->count[1]; ++j)
    for (int i = 0; i < g->count[0]; ++i) {
      const double x = g->node_coord(0, i), y = g->node_coord(1, j);
      const bool in_core = x >= 0.25 && x <= 0.75 && y >= 0.25 && y <= 0.75;
      double dist;
      if (in_core) {
        dist = std::min(std::min(x - 0.25, 0.75 - x), std::min(y - 0.25, 0.75 - y));
      } else {
        const double dx = std::max({0.0, 0.25 - x, x - 0.75});
        const double dy = std::max({0.0, 0.25 - y, y - 0.75});
        dist = std::hypot(dx, dy);
      }
      const int k = g->node_index(i, j);
      CHECK(static_cast<bool>(r.node_deep_core[k]) == (in_core && dist > 0.05));
      CHECK(static_cast<bool>(r.node_band[k]) == (dist < 0.1));
    }
  // Expected square (0.3,0.7)^2: side 0.4 up to one cell.
  const double h = g->spacing[0];
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < g->count[0]; ++i) {
    const int k = g->node_index(i, g->count[1] / 2);
    if (r.node_deep_core[k]) {
      lo = std::min(lo, g->node_coord(0, i));
      hi = std::max(hi, g->node_coord(0, i));
    }
  }
  CHECK(std::abs((hi - lo) - 0.4) <= 2.0 * h);
}

TEST_CASE("nodes partition into core and collar") {
  for (auto spec : {RegionSpec::interval(0.3, 0.7), RegionSpec::make_all(), RegionSpec::make_none()}) {
    GridPtr g = build_grid(1, {1.0}, {57});
    Regions r = build_regions(g, spec, spec.kind == RegionSpec::Kind::box ? 0.1 : 0.0);
    for (int i = 0; i < g->node_count(); ++i) CHECK(r.node_core[i] + r.node_collar[i] == 1);
  }
}

TEST_CASE("refinement: gcc flag stable, mask measures move by O(h)") {
  bool first_gcc = false;
  double prev_measure = -1.0;
  for (int k = 0; k < 3; ++k) {
    const int n = 50 * (1 << k) - 1;
    GridPtr g = build_grid(1, {1.0}, {n});
    Regions r = build_regions(g, RegionSpec::interval(0.3, 0.7), 0.1);
    DampingProfile p = build_damping(g, r, {"bump", 1.0}, {"band", 0.5}, 0.5);
    if (k == 0)
      first_gcc = p.gcc_satisfied;
    else
      CHECK(p.gcc_satisfied == first_gcc);
    const double measure = r.measure(r.node_core);
    if (prev_measure >= 0.0) CHECK(std::abs(measure - prev_measure) <= 4.0 * g->spacing[0]);
    prev_measure = measure;
    CHECK(std::abs(measure - 0.4) <= 2.0 * g->spacing[0]);
  }
}

TEST_CASE("bump profile vanishes exactly on core faces and flags gcc") {
  GridPtr g = build_grid(1, {1.0}, {99});
  Regions r = build_regions(g, RegionSpec::interval(0.3, 0.7), 0.1);
  DampingProfile p = build_damping(g, r, {"bump", 1.0}, {"band", 0.5}, 0.5);
  CHECK(p.gcc_satisfied);
  CHECK(p.kv_sup > 0.0);
  CHECK(p.kv_sup <= 1.0);
  for (int f = 0; f <= g->count[0]; ++f) {
    if (r.face_core[0][f])
      CHECK(p.kv_faces[0][f] == 0.0);
    else
      CHECK(p.kv_faces[0][f] > 0.0);
  }
  // Faces with both adjacent nodes in the core sit inside it, so a = 0 there.
  for (int f = 1; f < g->count[0]; ++f)
    if (r.node_core[f - 1] && r.node_core[f]) CHECK(p.kv_faces[0][f] == 0.0);
}

TEST_CASE("no viscoelastic damping anywhere means gcc fails") {
  GridPtr g = build_grid(1, {1.0}, {99});
  Regions r = build_regions(g, RegionSpec::make_all(), 0.0);
  DampingProfile p = build_damping(g, r, {"zero", 0.0}, {"constant", 0.3}, 0.0);
  CHECK_FALSE(p.gcc_satisfied);
  CHECK(p.kv_sup == 0.0);
  CHECK(p.friction_sup == doctest::Approx(0.3));
}

TEST_CASE("full-domain constant coefficient satisfies the collar test") {
  GridPtr g = build_grid(2, {1.0, 1.0}, {9, 9});
  Regions r = build_regions(g, RegionSpec::make_none(), 0.0);
  DampingProfile p = build_damping(g, r, {"constant", 1.0}, {"zero", 0.0}, 0.0);
  CHECK(p.gcc_satisfied);
  CHECK(p.kv_sup == 1.0);
}

TEST_CASE("friction floor violations are caught") {
  GridPtr g = build_grid(1, {1.0}, {99});
  Regions r = build_regions(g, RegionSpec::interval(0.3, 0.7), 0.1);
  try {
    build_damping(g, r, {"bump", 1.0}, {"zero", 0.0}, 0.1); // eta == 0 with floor 0.1
    FAIL("expected EtaFloorViolated");
  } catch (const Error& e) {
    CHECK(e.code() == Err::EtaFloorViolated);
  }
  try {
    build_damping(g, r, {"bump", 1.0}, {"constant", 0.05}, 0.1);
    FAIL("expected EtaFloorViolated");
  } catch (const Error& e) {
    CHECK(e.code() == Err::EtaFloorViolated);
  }
  CHECK_NOTHROW(build_damping(g, r, {"bump", 1.0}, {"constant", 0.1}, 0.1));
}

TEST_CASE("negative amplitudes are rejected") {
  GridPtr g = build_grid(1, {1.0}, {99});
  Regions r = build_regions(g, RegionSpec::interval(0.3, 0.7), 0.1);
  try {
    build_damping(g, r, {"bump", -1.0}, {"zero", 0.0}, 0.0);
    FAIL("expected NegativeCoefficient");
  } catch (const Error& e) {
    CHECK(e.code() == Err::NegativeCoefficient);
  }
}
