#pragma once

#include <random>

#include "kvwave/discrete_ops.hpp"

namespace kvwave::testing {

inline NodalField random_nodal(GridPtr grid, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  NodalField f(grid);
  for (auto& x : f.v) x = d(rng);
  return f;
}

inline FaceField random_face(GridPtr grid, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  FaceField f(grid);
  for (int a = 0; a < grid->dim; ++a)
    for (auto& x : f.comp[a]) x = d(rng);
  return f;
}

/// Adaptive Simpson quadrature, used as an independent oracle for
/// antiderivative checks.
template <typename F>
double adaptive_simpson(F f, double a, double b, double tol = 1e-10, int depth = 30) {
  auto simpson = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
  };
  struct Rec {
    double a, b, whole;
    int depth;
  };
  const double whole = simpson(a, b);
  std::vector<Rec> stack{{a, b, whole, depth}};
  double total = 0.0;
  while (!stack.empty()) {
    Rec r = stack.back();
    stack.pop_back();
    const double m = 0.5 * (r.a + r.b);
    const double left = simpson(r.a, m), right = simpson(m, r.b);
    if (r.depth <= 0 || std::abs(left + right - r.whole) < 15.0 * tol) {
      total += left + right + (left + right - r.whole) / 15.0;
    } else {
      stack.push_back({r.a, m, left, r.depth - 1});
      stack.push_back({m, r.b, right, r.depth - 1});
    }
  }
  return total;
}

} // namespace kvwave::testing
