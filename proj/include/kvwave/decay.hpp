#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kvwave/constitutive.hpp"
#include "kvwave/stepper.hpp"

namespace kvwave {

/// Concave nondecreasing piecewise-linear majorant h with h(0)=0, dominating
/// the curve (s g(s), s^2 + g(s)^2) for |s| <= 1, extended linearly past the
/// last knot with the terminal slope.
struct ConcaveMajorant {
  std::vector<double> knots_x; // strictly increasing, knots_x[0] = 0
  std::vector<double> values;  // concave nondecreasing, values[0] = 0
  std::string provenance = "least-concave-majorant";

  double x_max() const { return knots_x.back(); }
  double terminal_slope() const;
  double eval(double x) const;
};

/// Least concave nondecreasing majorant of the dissipation-vs-kinetic curve of
/// one feedback component. Throws DegenerateFeedback when g vanishes on [0,1].
ConcaveMajorant construct_h(const FeedbackComponent& component);

/// Which fixed-point form defines the envelope rate. `standard` solves
/// w + z(w) = x (the contraction form); `legacy` solves w - z(w) = x and is
/// kept only for comparison, off by default.
enum class EnvelopeRateForm { standard, legacy };

/// The calibrated decay machinery: per-component majorants, the aggregate
/// rescaled majorant, the constants derived from the observability constant
/// and the growth bounds, and the induced monotone functions
///   z(x) = (mu I + h_hat)^{-1}(L x)   and   R(x) = x - (I + z)^{-1}(x).
struct DecayCalculus {
  std::vector<ConcaveMajorant> majorants;
  std::function<double(double)> h_hat_override; // set by from_parts

  double window_measure = 1.0; // |Omega| * T
  double c_obs = 0.0;
  double growth_lo = 1.0, growth_hi = 1.0;
  double kv_sup = 0.0;
  double rate_scale = 1.0; // L
  double rate_shift = 1.0; // mu
  EnvelopeRateForm form = EnvelopeRateForm::standard;

  // Tabulated z and R (artifact output; evaluation goes through the solvers).
  std::vector<double> z_x, z_y, r_x, r_y;

  double h_hat(double x) const;
  /// z(x): minimum window dissipation forced by energy x. Strictly increasing, z(0)=0.
  double dissipation_floor(double x) const;
  /// R(x): rate function of the envelope ODE dS/dt + R(S) = 0. Nonnegative, R(0)=0.
  double envelope_rate(double x) const;

  void tabulate(double x_max, int knots = 4096);

  static DecayCalculus from_parts(std::function<double(double)> h_hat, double mu, double L,
                                  EnvelopeRateForm form = EnvelopeRateForm::standard);
};

/// Assembles the calculus from the majorants and the scenario constants.
/// Throws NonPositiveConstant on c_obs <= 0, T <= 0, domain_measure <= 0 or
/// growth_lo <= 0.
DecayCalculus build_calculus(std::vector<ConcaveMajorant> majorants, double domain_measure, double T,
                             double c_obs, double growth_lo, double growth_hi, double kv_sup,
                             EnvelopeRateForm form = EnvelopeRateForm::standard,
                             double table_x_max = 1.0);

/// Solution of dS/dt + R(S) = 0, S(0) = E0; nonincreasing, clipped at 0.
struct Envelope {
  std::vector<double> times;
  std::vector<double> values;
  double e0 = 0.0;
  double eval(double t) const; // linear interpolation, clamped to [0, horizon]
};

/// Classical fourth-order one-step integration with dt = horizon / steps.
Envelope solve_envelope(const DecayCalculus& calc, double e0, double horizon, int steps);

/// Result of checking the window recursion s_{m+1} + z(s_{m+1}) <= s_m on a
/// sequence, and (when it holds) the domination s_m <= S(m).
struct SequenceReport {
  bool hypothesis_ok = true;
  int violation_index = -1; // index of the first offending element s_{m+1}
  bool dominated = false;
  double worst_excess = 0.0; // max over m of s_m / S(m) - 1 (0 when all below)
  Envelope envelope;
};

SequenceReport check_sequence_lemma(const std::vector<double>& s, const DecayCalculus& calc,
                                    double rel_tol = 1e-9);

struct RecursionWindow {
  int m = 0;
  double e_start = 0.0;   // E(m T)
  double e_end = 0.0;     // E((m+1) T)
  double floor_val = 0.0; // z(E((m+1) T))
  double slack = 0.0;     // e_start - e_end - floor_val
  bool ok = true;
};

/// Window recursion on sampled energies plus the envelope comparison
/// E(t) <= S(t/T - 1) for sampled t > T.
struct RecursionReport {
  double window_T = 0.0;
  std::vector<RecursionWindow> windows;
  bool recursion_ok = true;
  int first_violation = -1; // window index m of the first failure
  bool envelope_ok = true;
  double worst_envelope_excess = 0.0; // max over sampled t > T of E(t)/S(t/T-1) - 1
  Envelope envelope;
};

RecursionReport check_energy_recursion(const Trajectory& traj, const DecayCalculus& calc, double T,
                                       double rel_tol_recursion = 1e-8,
                                       double rel_tol_envelope = 1e-6);

} // namespace kvwave
