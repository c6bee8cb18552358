#include "kvwave/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "kvwave/energy.hpp"

namespace kvwave {

namespace {

void check_components(const Model& model) {
  if (static_cast<int>(model.feedback.components.size()) != model.grid->dim)
    fail(Err::ConfigInvalid, "feedback law needs one component per axis");
}

/// a * g(grad v) on faces, componentwise per axis.
FaceField kv_flux(const FaceField& grad_v, const DampingProfile& damping, const FeedbackLaw& g) {
  FaceField out(grad_v.grid);
  for (int a = 0; a < grad_v.grid->dim; ++a) {
    const auto& gi = g.components[a].g;
    const auto& coeff = damping.kv_faces[a];
    for (size_t f = 0; f < out.comp[a].size(); ++f)
      out.comp[a][f] = coeff[f] * gi(grad_v.comp[a][f]);
  }
  return out;
}

/// lap(u) + kv(v) - eta v - f(u): the velocity equation right-hand side.
NodalField system_rhs(const NodalField& u, const NodalField& v, const Model& model) {
  NodalField out = laplacian(u);
  const NodalField kv = kv_force(v, model.damping, model.feedback);
  const auto& eta = model.damping.friction_nodes;
  const auto& f = model.source.f;
  for (int i = 0; i < out.size(); ++i) out[i] += kv[i] - eta[i] * v[i] - f(u[i]);
  return out;
}

NodalField predicted_displacement(const NodalField& v_next, const SimState& state,
                                  const StepParams& p) {
  NodalField u_star = state.u;
  const double ci = p.dt * p.theta, ce = p.dt * (1.0 - p.theta);
  for (int i = 0; i < u_star.size(); ++i) u_star[i] += ci * v_next[i] + ce * state.v[i];
  return u_star;
}

/// Tridiagonal solve (Thomas), in place on copies.
void solve_tridiag(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                   std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

/// Newton linearization around V: J w = w + dt*theta*eta w + (dt*theta)^2 f'(u*) w
///   - (dt*theta)^2 lap(w) - dt*theta div(a g'(grad V) grad w).
/// Symmetric positive definite for monotone g and f' >= 0.
struct Jacobian {
  const Model& model;
  double c; // dt * theta
  std::vector<double> node_diag;               // 1 + c eta + c^2 f'(u*)
  std::array<std::vector<double>, 2> face_coef; // c * a * g'(grad V)

  Jacobian(const Model& m, const NodalField& v_lin, const NodalField& u_star, double dt_theta)
      : model(m), c(dt_theta) {
    const Grid& g = *m.grid;
    node_diag.resize(g.node_count());
    for (int i = 0; i < g.node_count(); ++i)
      node_diag[i] = 1.0 + c * m.damping.friction_nodes[i] + c * c * m.source.fprime(u_star[i]);
    const FaceField grad_v = gradient(v_lin);
    for (int a = 0; a < g.dim; ++a) {
      const auto& gp = m.feedback.components[a].gprime;
      face_coef[a].resize(g.face_count(a));
      for (size_t f = 0; f < face_coef[a].size(); ++f)
        face_coef[a][f] = c * m.damping.kv_faces[a][f] * gp(grad_v.comp[a][f]);
    }
  }

  NodalField apply(const NodalField& w) const {
    FaceField gw = gradient(w);
    FaceField flux(w.grid);
    for (int a = 0; a < w.grid->dim; ++a)
      for (size_t f = 0; f < gw.comp[a].size(); ++f)
        flux.comp[a][f] = (c * c + face_coef[a][f]) * gw.comp[a][f];
    NodalField out = divergence(flux);
    for (int i = 0; i < out.size(); ++i) out[i] = node_diag[i] * w[i] - out[i];
    return out;
  }

  /// Direct solve for 1D grids (the system is tridiagonal).
  NodalField solve_direct(const NodalField& rhs) const {
    const Grid& g = *model.grid;
    const int n = g.count[0];
    const double ih2 = 1.0 / (g.spacing[0] * g.spacing[0]);
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), b = rhs.v;
    for (int i = 0; i < n; ++i) {
      diag[i] = node_diag[i] + (2.0 * c * c + face_coef[0][i] + face_coef[0][i + 1]) * ih2;
      if (i > 0) lower[i] = -(c * c + face_coef[0][i]) * ih2;
      if (i < n - 1) upper[i] = -(c * c + face_coef[0][i + 1]) * ih2;
    }
    solve_tridiag(std::move(lower), std::move(diag), std::move(upper), b);
    return NodalField(rhs.grid, std::move(b));
  }

  /// Jacobi-preconditioned conjugate gradients (2D path).
  NodalField solve_cg(const NodalField& rhs) const {
    const Grid& g = *model.grid;
    std::vector<double> prec(g.node_count());
    const double ih0 = 1.0 / (g.spacing[0] * g.spacing[0]);
    const double ih1 = g.dim == 2 ? 1.0 / (g.spacing[1] * g.spacing[1]) : 0.0;
    const int n0 = g.count[0], n1 = g.dim == 2 ? g.count[1] : 1;
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const int k = g.dim == 2 ? g.node_index(i, j) : i;
        double d = node_diag[k] + 2.0 * c * c * (ih0 + ih1);
        d += (face_coef[0][g.dim == 2 ? g.face_index(0, i, j) : i] +
              face_coef[0][g.dim == 2 ? g.face_index(0, i + 1, j) : i + 1]) *
             ih0;
        if (g.dim == 2)
          d += (face_coef[1][g.face_index(1, i, j)] + face_coef[1][g.face_index(1, i, j + 1)]) * ih1;
        prec[k] = 1.0 / d;
      }

    NodalField x(rhs.grid);
    NodalField r = rhs;
    NodalField z(rhs.grid);
    for (int i = 0; i < r.size(); ++i) z[i] = prec[i] * r[i];
    NodalField p = z;
    double rz = inner(r, z);
    const double rhs_norm = l2_norm(rhs);
    if (rhs_norm == 0.0) return x;
    const int max_cg = 20 * r.size() + 50;
    for (int it = 0; it < max_cg; ++it) {
      const NodalField Ap = apply(p);
      const double alpha = rz / inner(p, Ap);
      for (int i = 0; i < x.size(); ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * Ap[i];
      }
      if (l2_norm(r) <= 1e-13 * rhs_norm) break;
      for (int i = 0; i < r.size(); ++i) z[i] = prec[i] * r[i];
      const double rz_new = inner(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (int i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    return x;
  }

  NodalField solve(const NodalField& rhs) const {
    return model.grid->dim == 1 ? solve_direct(rhs) : solve_cg(rhs);
  }
};

} // namespace

NodalField kv_force(const NodalField& v, const DampingProfile& damping, const FeedbackLaw& g) {
  return divergence(kv_flux(gradient(v), damping, g));
}

NodalField damping_operator(const NodalField& v, const DampingProfile& damping, const FeedbackLaw& g) {
  NodalField out = kv_force(v, damping, g);
  for (int i = 0; i < out.size(); ++i) out[i] = -out[i] + damping.friction_nodes[i] * v[i];
  return out;
}

NodalField step_residual(const NodalField& v_next, const SimState& state, const StepParams& params,
                         const Model& model) {
  const NodalField u_star = predicted_displacement(v_next, state, params);
  const NodalField rhs_impl = system_rhs(u_star, v_next, model);
  const NodalField rhs_expl = system_rhs(state.u, state.v, model);
  NodalField r = v_next;
  const double wi = params.dt * params.theta, we = params.dt * (1.0 - params.theta);
  for (int i = 0; i < r.size(); ++i) r[i] -= state.v[i] + wi * rhs_impl[i] + we * rhs_expl[i];
  return r;
}

SimState solve_step(const SimState& state, const StepParams& params, const Model& model,
                    const std::optional<NodalField>& initial_guess) {
  check_components(model);
  if (!(params.dt > 0.0)) fail(Err::ConfigInvalid, "dt must be positive");
  if (params.theta < 0.5 || params.theta > 1.0)
    fail(Err::ConfigInvalid, "theta must lie in [1/2, 1]");

  NodalField v = initial_guess ? *initial_guess : state.v;
  const double scale = 1.0 + l2_norm(state.v);
  const double target = params.solver_tol * scale;

  NodalField r = step_residual(v, state, params, model);
  double rnorm = l2_norm(r);
  if (!std::isfinite(rnorm)) fail(Err::NonFiniteState, "non-finite residual at t=" + std::to_string(state.t));

  int iter = 0;
  while (rnorm > target) {
    if (iter++ >= params.max_iters)
      fail(Err::SolverDiverged, "no convergence after " + std::to_string(params.max_iters) +
                                    " iterations, residual " + std::to_string(rnorm));
    if (params.solver == SolverKind::newton) {
      const NodalField u_star = predicted_displacement(v, state, params);
      const Jacobian jac(model, v, u_star, params.dt * params.theta);
      NodalField neg_r = r;
      for (int i = 0; i < neg_r.size(); ++i) neg_r[i] = -neg_r[i];
      const NodalField d = jac.solve(neg_r);

      double lambda = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 30; ++bt) {
        NodalField trial = v;
        for (int i = 0; i < trial.size(); ++i) trial[i] += lambda * d[i];
        NodalField tr = step_residual(trial, state, params, model);
        const double tn = l2_norm(tr);
        if (std::isfinite(tn) && tn < rnorm) {
          v = std::move(trial);
          r = std::move(tr);
          rnorm = tn;
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted)
        fail(Err::SolverDiverged, "line search stalled, residual " + std::to_string(rnorm));
    } else {
      // Relaxed fixed point: V <- V - omega R(V).
      for (int i = 0; i < v.size(); ++i) v[i] -= 0.5 * r[i];
      r = step_residual(v, state, params, model);
      rnorm = l2_norm(r);
      if (!std::isfinite(rnorm))
        fail(Err::NonFiniteState, "non-finite iterate at t=" + std::to_string(state.t));
    }
  }

  SimState next;
  next.t = state.t + params.dt;
  next.v = v;
  next.u = predicted_displacement(v, state, params);
  if (!all_finite(next.u) || !all_finite(next.v))
    fail(Err::NonFiniteState, "non-finite state at t=" + std::to_string(next.t));
  return next;
}

Trajectory simulate(const Model& model, const StepParams& params, const SimState& init, int n_steps,
                    int sample_stride) {
  check_components(model);
  if (sample_stride < 1) sample_stride = 1;

  Trajectory traj;
  double d_kv = 0.0, d_fric = 0.0, d_obs = 0.0;

  auto record = [&](const SimState& s) {
    const EnergyBreakdown e = energy(s, model.source);
    traj.t.push_back(s.t);
    traj.states.push_back(s);
    traj.e_total.push_back(e.total);
    traj.e_kin.push_back(e.kinetic);
    traj.e_pot.push_back(e.potential);
    traj.e_src.push_back(e.source_potential);
    traj.d_kv_cum.push_back(d_kv);
    traj.d_fric_cum.push_back(d_fric);
    traj.obs_cum.push_back(d_obs);
  };

  SimState cur = init;
  record(cur);

  const Grid& g = *model.grid;
  const double meas = g.cell_measure();
  const double th = params.theta;

  // Cached face data for the outgoing state: grad v_n and g(grad v_n).
  FaceField grad_prev = gradient(cur.v);
  auto bare_g = [&](const FaceField& grad_v) {
    FaceField out(grad_v.grid);
    for (int a = 0; a < g.dim; ++a) {
      const auto& gi = model.feedback.components[a].g;
      for (size_t f = 0; f < out.comp[a].size(); ++f) out.comp[a][f] = gi(grad_v.comp[a][f]);
    }
    return out;
  };
  FaceField gbar_prev = bare_g(grad_prev);

  for (int step = 0; step < n_steps; ++step) {
    SimState next = solve_step(cur, params, model);

    const FaceField grad_next = gradient(next.v);
    const FaceField gbar_next = bare_g(grad_next);

    double kv_rate = 0.0, obs_kv_rate = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const auto& coeff = model.damping.kv_faces[a];
      for (size_t f = 0; f < grad_next.comp[a].size(); ++f) {
        const double w = th * grad_next.comp[a][f] + (1.0 - th) * grad_prev.comp[a][f];
        const double gw = th * gbar_next.comp[a][f] + (1.0 - th) * gbar_prev.comp[a][f];
        kv_rate += coeff[f] * gw * w;
        obs_kv_rate += coeff[f] * (w * w + gw * gw);
      }
    }
    double fric_rate = 0.0;
    for (int i = 0; i < cur.v.size(); ++i) {
      const double vt = th * next.v[i] + (1.0 - th) * cur.v[i];
      fric_rate += model.damping.friction_nodes[i] * vt * vt;
    }
    d_kv += params.dt * meas * kv_rate;
    d_fric += params.dt * meas * fric_rate;
    d_obs += params.dt * meas * (obs_kv_rate + fric_rate);

    cur = std::move(next);
    grad_prev = grad_next;
    gbar_prev = gbar_next;

    if ((step + 1) % sample_stride == 0 || step + 1 == n_steps) record(cur);
  }
  return traj;
}

} // namespace kvwave
