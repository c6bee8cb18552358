#include "kvwave/discrete_ops.hpp"

#include <cmath>

namespace kvwave {

FaceField gradient(const NodalField& u) {
  const Grid& g = *u.grid;
  FaceField w(u.grid);
  if (g.dim == 1) {
    const int n = g.count[0];
    const double ih = 1.0 / g.spacing[0];
    for (int j = 0; j <= n; ++j) {
      const double left = (j > 0) ? u[j - 1] : 0.0;
      const double right = (j < n) ? u[j] : 0.0;
      w.comp[0][j] = (right - left) * ih;
    }
    return w;
  }
  const int n0 = g.count[0], n1 = g.count[1];
  const double ih0 = 1.0 / g.spacing[0], ih1 = 1.0 / g.spacing[1];
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i <= n0; ++i) {
      const double left = (i > 0) ? u[g.node_index(i - 1, j)] : 0.0;
      const double right = (i < n0) ? u[g.node_index(i, j)] : 0.0;
      w.comp[0][g.face_index(0, i, j)] = (right - left) * ih0;
    }
  for (int j = 0; j <= n1; ++j)
    for (int i = 0; i < n0; ++i) {
      const double left = (j > 0) ? u[g.node_index(i, j - 1)] : 0.0;
      const double right = (j < n1) ? u[g.node_index(i, j)] : 0.0;
      w.comp[1][g.face_index(1, i, j)] = (right - left) * ih1;
    }
  return w;
}

NodalField divergence(const FaceField& w) {
  const Grid& g = *w.grid;
  NodalField out(w.grid);
  if (g.dim == 1) {
    const int n = g.count[0];
    const double ih = 1.0 / g.spacing[0];
    for (int i = 0; i < n; ++i) out[i] = (w.comp[0][i + 1] - w.comp[0][i]) * ih;
    return out;
  }
  const int n0 = g.count[0], n1 = g.count[1];
  const double ih0 = 1.0 / g.spacing[0], ih1 = 1.0 / g.spacing[1];
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n0; ++i) {
      const int k = g.node_index(i, j);
      out[k] = (w.comp[0][g.face_index(0, i + 1, j)] - w.comp[0][g.face_index(0, i, j)]) * ih0 +
               (w.comp[1][g.face_index(1, i, j + 1)] - w.comp[1][g.face_index(1, i, j)]) * ih1;
    }
  return out;
}

NodalField laplacian(const NodalField& u) { return divergence(gradient(u)); }

double integrate(const NodalField& u) {
  const double m = u.grid->cell_measure();
  double s = 0.0;
  for (double x : u.v) s += x;
  return s * m;
}

double integrate(const FaceField& w) {
  const double m = w.grid->cell_measure();
  double s = 0.0;
  for (int a = 0; a < w.grid->dim; ++a)
    for (double x : w.comp[a]) s += x;
  return s * m;
}

double inner(const NodalField& a, const NodalField& b) {
  const double m = a.grid->cell_measure();
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * m;
}

double inner(const FaceField& a, const FaceField& b) {
  const double m = a.grid->cell_measure();
  double s = 0.0;
  for (int ax = 0; ax < a.grid->dim; ++ax)
    for (size_t j = 0; j < a.comp[ax].size(); ++j) s += a.comp[ax][j] * b.comp[ax][j];
  return s * m;
}

double l2_norm(const NodalField& a) { return std::sqrt(inner(a, a)); }

bool all_finite(const NodalField& a) {
  for (double x : a.v)
    if (!std::isfinite(x)) return false;
  return true;
}

} // namespace kvwave
