#pragma once

#include <optional>
#include <vector>

#include "kvwave/constitutive.hpp"
#include "kvwave/discrete_ops.hpp"
#include "kvwave/regions.hpp"

namespace kvwave {

/// Everything the time integrator needs to evaluate the semidiscrete system
///   du/dt = v,   dv/dt = lap(u) + div(a g(grad v)) - eta v - f(u).
struct Model {
  GridPtr grid;
  DampingProfile damping;
  FeedbackLaw feedback;
  Nonlinearity source;
};

struct SimState {
  double t = 0.0;
  NodalField u;
  NodalField v;
};

enum class SolverKind { newton, fixed_point };

struct StepParams {
  double dt = 0.0;
  double theta = 0.5;       // implicitness weight in [1/2, 1]
  double solver_tol = 1e-10; // relative residual target
  int max_iters = 50;
  SolverKind solver = SolverKind::newton;
};

/// div(a g(grad v)) with g applied componentwise per axis.
NodalField kv_force(const NodalField& v, const DampingProfile& damping, const FeedbackLaw& g);

/// -kv_force(v) + eta v: the monotone damping operator of the semidiscrete system.
NodalField damping_operator(const NodalField& v, const DampingProfile& damping, const FeedbackLaw& g);

/// Residual of the implicit step with the new velocity as unknown:
///   R(V) = V - v_n - dt [ theta (lap(u*) + kv(V) - eta V - f(u*)) + (1-theta) (explicit at t_n) ],
/// where u* = u_n + dt (theta V + (1-theta) v_n). R(V)=0 defines the step.
NodalField step_residual(const NodalField& v_next, const SimState& state, const StepParams& params,
                         const Model& model);

/// Advances one step by solving R(V)=0 (damped Newton, or relaxed fixed point).
/// The optional initial guess defaults to v_n. Throws SolverDiverged / NonFiniteState.
SimState solve_step(const SimState& state, const StepParams& params, const Model& model,
                    const std::optional<NodalField>& initial_guess = std::nullopt);

/// Sampled time series with cumulative dissipation ledgers. The ledgers use the
/// theta-weighted face/node values of the velocity so the discrete energy
/// identity telescopes exactly for theta = 1/2.
struct Trajectory {
  std::vector<double> t;
  std::vector<SimState> states;
  std::vector<double> e_total, e_kin, e_pot, e_src; // energy parts at samples
  std::vector<double> d_kv_cum;                     // cumulative viscoelastic dissipation
  std::vector<double> d_fric_cum;                   // cumulative frictional dissipation
  std::vector<double> obs_cum; // cumulative observability functional (|w|^2 + |g(w)|^2 form)

  double e0() const { return e_total.empty() ? 0.0 : e_total.front(); }
  int samples() const { return static_cast<int>(t.size()); }
};

/// Runs n_steps of the scheme from `init`, recording every `sample_stride`-th
/// state (plus the initial and final ones).
Trajectory simulate(const Model& model, const StepParams& params, const SimState& init, int n_steps,
                    int sample_stride);

} // namespace kvwave
