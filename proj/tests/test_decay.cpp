#include "doctest.h"

#include <cmath>
#include <random>

#include "kvwave/decay.hpp"
#include "kvwave/energy.hpp"
#include "support/oracles.hpp"

using namespace kvwave;
using namespace kvwave::testing;

namespace {
DecayCalculus closed_form_calculus() {
  // h_hat = identity, mu = L = 1: z(x) solves y + y = x, so z(x) = x/2 and
  // the rate solves w + w/2 = x, so R(x) = x/3.
  return DecayCalculus::from_parts([](double y) { return y; }, 1.0, 1.0);
}
} // namespace

TEST_CASE("majorant of the identity feedback is 2x") {
  FeedbackLaw law = make_feedback({"linear"});
  ConcaveMajorant h = construct_h(law.components[0]);
  CHECK(h.values.front() == 0.0);
  CHECK(h.knots_x.front() == 0.0);
  for (double x : {0.0, 1e-6, 0.01, 0.3, 0.5, 0.9999, 1.0}) CHECK(std::abs(h.eval(x) - 2.0 * x) <= 1e-9);
  // Linear extension beyond x(1) = 1 keeps the slope.
  CHECK(std::abs(h.eval(2.0) - 4.0) <= 1e-8);
}

TEST_CASE("majorant of the cubic branch dominates and stays below 2 sqrt(x)") {
  FeedbackLaw law = make_feedback({"cubic_near_zero"});
  ConcaveMajorant h = construct_h(law.components[0]);
  const auto& g = law.components[0].g;
  // Domination h(s g(s)) >= s^2 + g(s)^2 on the canonical 10^3-point sample.
  for (int k = 1; k <= 1000; ++k) {
    const double s = static_cast<double>(k) / 1000.0;
    for (double sign : {1.0, -1.0}) {
      const double si = sign * s;
      const double x = si * g(si);
      const double y = si * si + g(si) * g(si);
      CHECK(h.eval(x) >= y * (1.0 - 1e-12));
    }
  }
  // h(x) <= 2 sqrt(x) + 1e-6 on [0, 1] (the least concave majorant is below
  // any concave dominator).
  for (int k = 0; k <= 1000; ++k) {
    const double x = static_cast<double>(k) / 1000.0;
    CHECK(h.eval(x) <= 2.0 * std::sqrt(x) + 1e-6);
  }
}

TEST_CASE("majorants are concave, nondecreasing, zero at zero") {
  for (const char* kind : {"linear", "cubic_near_zero", "saturating"}) {
    FeedbackLaw law = make_feedback({kind});
    ConcaveMajorant h = construct_h(law.components[0]);
    CHECK(h.values.front() == 0.0);
    double prev_slope = 1e300;
    for (size_t k = 1; k < h.knots_x.size(); ++k) {
      CHECK(h.values[k] >= h.values[k - 1] - 1e-15);
      const double slope = (h.values[k] - h.values[k - 1]) / (h.knots_x[k] - h.knots_x[k - 1]);
      CHECK(slope <= prev_slope + 1e-12);
      prev_slope = slope;
    }
  }
}

TEST_CASE("vanishing feedback is degenerate") {
  FeedbackComponent comp;
  comp.kind = "custom";
  comp.g = [](double) { return 0.0; };
  comp.gprime = [](double) { return 0.0; };
  try {
    construct_h(comp);
    FAIL("expected DegenerateFeedback");
  } catch (const Error& e) {
    CHECK(e.code() == Err::DegenerateFeedback);
  }
}

TEST_CASE("closed forms: z(x) = x/2 and R(x) = x/3") {
  DecayCalculus calc = closed_form_calculus();
  for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    CHECK(std::abs(calc.dissipation_floor(x) - 0.5 * x) <= 1e-12);
    CHECK(std::abs(calc.envelope_rate(x) - x / 3.0) <= 1e-10);
  }
  // Tabulated knots agree too.
  for (size_t k = 0; k < calc.z_x.size(); k += 511)
    CHECK(std::abs(calc.z_y[k] - 0.5 * calc.z_x[k]) <= 1e-12);
}

TEST_CASE("calculus constants follow the calibration formulas") {
  FeedbackLaw law = make_feedback({"linear"});
  std::vector<ConcaveMajorant> hs{construct_h(law.components[0])};
  const double domain = 1.0, T = 2.0, c_obs = 3.0, m = 1.0, M = 1.0, a_sup = 1.0;
  DecayCalculus calc = build_calculus(hs, domain, T, c_obs, m, M, a_sup);
  CHECK(calc.window_measure == doctest::Approx(2.0));
  CHECK(calc.rate_scale == doctest::Approx(1.0 / (c_obs * (1.0 + a_sup) * 2.0)));
  CHECK(calc.rate_shift == doctest::Approx((1.0 + 1.0 / m + M) / ((1.0 + a_sup) * 2.0)));
}

TEST_CASE("nonpositive constants are rejected") {
  FeedbackLaw law = make_feedback({"linear"});
  std::vector<ConcaveMajorant> hs{construct_h(law.components[0])};
  try {
    build_calculus(hs, 1.0, 2.0, 0.0, 1.0, 1.0, 1.0);
    FAIL("expected NonPositiveConstant");
  } catch (const Error& e) {
    CHECK(e.code() == Err::NonPositiveConstant);
  }
  CHECK_THROWS_AS(build_calculus(hs, 1.0, -1.0, 1.0, 1.0, 1.0, 1.0), Error);
}

TEST_CASE("z and R invariants: monotone, consistent inverses") {
  FeedbackLaw law = make_feedback({"cubic_near_zero"});
  std::vector<ConcaveMajorant> hs{construct_h(law.components[0])};
  DecayCalculus calc = build_calculus(hs, 1.0, 2.0, 2.5, 1.0, 1.0, 1.0);
  CHECK(calc.dissipation_floor(0.0) == 0.0);
  CHECK(calc.envelope_rate(0.0) == 0.0);
  double prev_z = -1.0, prev_x = 0.0;
  for (size_t k = 0; k < calc.z_x.size(); k += 255) {
    const double x = calc.z_x[k];
    const double z = calc.z_y[k];
    if (prev_z >= 0.0 && x > prev_x) CHECK(z > prev_z); // strictly increasing
    prev_z = z;
    prev_x = x;
    // mu z + h_hat(z) = L x to 1e-10 relative.
    const double lhs = calc.rate_shift * z + calc.h_hat(z);
    CHECK(std::abs(lhs - calc.rate_scale * x) <= 1e-10 * (1.0 + std::abs(calc.rate_scale * x)));
    // (x - R(x)) + z(x - R(x)) = x to 1e-10 relative.
    const double w = x - calc.envelope_rate(x);
    CHECK(std::abs(w + calc.dissipation_floor(w) - x) <= 1e-10 * (1.0 + x));
    CHECK(calc.envelope_rate(x) >= 0.0);
  }
}

TEST_CASE("legacy rate form is exposed but pathological") {
  DecayCalculus calc =
      DecayCalculus::from_parts([](double y) { return y; }, 1.0, 1.0, EnvelopeRateForm::legacy);
  // w - z(w) = x with z = y/2 gives w = 2x, so R = x - 2x = -x.
  CHECK(calc.envelope_rate(1.0) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("envelope: exponential closed form, zero data, zero rate") {
  DecayCalculus calc = closed_form_calculus();
  Envelope env = solve_envelope(calc, 1.0, 9.0, 1000);
  CHECK(std::abs(env.eval(9.0) - std::exp(-3.0)) <= 1e-8);
  CHECK(env.values.front() == 1.0);
  for (size_t k = 1; k < env.values.size(); ++k) CHECK(env.values[k] <= env.values[k - 1]);

  Envelope zero = solve_envelope(calc, 0.0, 5.0, 100);
  for (double v : zero.values) CHECK(v == 0.0);

  DecayCalculus no_rate = DecayCalculus::from_parts([](double y) { return y; }, 1.0, 0.0);
  Envelope flat = solve_envelope(no_rate, 0.7, 5.0, 100);
  for (double v : flat.values) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("sequence lemma: geometric sequence under z = x/2") {
  DecayCalculus calc = closed_form_calculus();
  std::vector<double> s;
  double v = 1.0;
  for (int m = 0; m <= 12; ++m) {
    s.push_back(v);
    v *= 2.0 / 3.0; // equality case: s_{m+1} + s_{m+1}/2 = s_m
  }
  SequenceReport rep = check_sequence_lemma(s, calc);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.dominated);
  // S(m) = exp(-m/3) dominates (2/3)^m; envelope agrees with solve_envelope.
  for (int m = 0; m <= 12; ++m) {
    CHECK(s[m] <= std::exp(-m / 3.0) * (1.0 + 1e-9));
    CHECK(std::abs(rep.envelope.eval(m) - std::exp(-m / 3.0)) <= 1e-8);
  }
}

TEST_CASE("sequence lemma: constant sequence flagged at index 1") {
  DecayCalculus calc = closed_form_calculus();
  SequenceReport rep = check_sequence_lemma({1.0, 1.0, 1.0}, calc);
  CHECK_FALSE(rep.hypothesis_ok);
  CHECK(rep.violation_index == 1);
}

TEST_CASE("sequence lemma: zero sequence holds trivially") {
  DecayCalculus calc = closed_form_calculus();
  SequenceReport rep = check_sequence_lemma({0.0, 0.0, 0.0, 0.0}, calc);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.dominated);
}

TEST_CASE("random recursion-generated sequences stay below the envelope") {
  DecayCalculus calc = closed_form_calculus();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> shrink(0.5, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s{1.0 + shrink(rng)};
    for (int m = 0; m < 15; ++m) {
      // s_{m+1} = (I + z)^{-1}(s_m * u): solve y + z(y) = s_m * u.
      const double target = s.back() * shrink(rng);
      double lo = 0.0, hi = target;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mid + calc.dissipation_floor(mid) < target ? lo : hi) = mid;
      }
      s.push_back(0.5 * (lo + hi));
    }
    SequenceReport rep = check_sequence_lemma(s, calc);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.dominated);
    CHECK(rep.worst_excess <= 1e-9);
  }
}

TEST_CASE("energy recursion holds on a calibrated full-domain linear scenario") {
  Model m = make_model_1d(31, 1.0, 0.0, "linear", "zero");
  SimState init;
  init.u = sine_field(m.grid);
  init.v = NodalField(m.grid);
  StepParams p;
  p.dt = 0.5 * m.grid->spacing[0];
  p.solver_tol = 1e-12;
  const double T = 1.0;
  const int steps_per_window = static_cast<int>(std::llround(T / p.dt));
  const Trajectory traj = simulate(m, p, init, 4 * steps_per_window, steps_per_window / 8);

  // Calibrate c from the trajectory's own windows (the observability ratio).
  double c_obs = 0.0;
  for (int w = 0; w < 4; ++w) {
    const int i0 = w * 8, i1 = (w + 1) * 8;
    const double denom = traj.obs_cum[i1] - traj.obs_cum[i0];
    REQUIRE(denom > 0.0);
    c_obs = std::max(c_obs, traj.e_total[i0] / denom);
  }
  FeedbackLaw law = make_feedback({"linear"});
  std::vector<ConcaveMajorant> hs{construct_h(law.components[0])};
  DecayCalculus calc = build_calculus(hs, m.grid->domain_measure(), T, c_obs, law.growth_lo,
                                      law.growth_hi, m.damping.kv_sup, EnvelopeRateForm::standard,
                                      std::max(1.0, 2.0 * traj.e0()));
  RecursionReport rep = check_energy_recursion(traj, calc, T);
  CHECK(rep.recursion_ok);
  CHECK(rep.envelope_ok);
  CHECK(rep.windows.size() == 4);
}

TEST_CASE("undamped trajectory with an artificial constant violates the recursion") {
  Model m = make_model_1d(31, 0.0, 0.0, "linear", "zero");
  SimState init;
  init.u = sine_field(m.grid);
  init.v = NodalField(m.grid);
  StepParams p;
  p.dt = 0.5 * m.grid->spacing[0];
  const int steps_per_window = static_cast<int>(std::llround(1.0 / p.dt));
  const Trajectory traj = simulate(m, p, init, 3 * steps_per_window, steps_per_window);

  FeedbackLaw law = make_feedback({"linear"});
  std::vector<ConcaveMajorant> hs{construct_h(law.components[0])};
  DecayCalculus calc = build_calculus(hs, 1.0, 1.0, 1e-3, 1.0, 1.0, 0.0,
                                      EnvelopeRateForm::standard, std::max(1.0, 2.0 * traj.e0()));
  RecursionReport rep = check_energy_recursion(traj, calc, 1.0);
  CHECK_FALSE(rep.recursion_ok);
  CHECK(rep.first_violation == 0); // energy constant while z > 0
  CHECK(rep.windows[0].slack < 0.0);
}

TEST_CASE("zero initial data satisfies the recursion trivially") {
  Model m = make_model_1d(31, 1.0, 0.0, "linear", "zero");
  SimState init;
  init.u = NodalField(m.grid);
  init.v = NodalField(m.grid);
  StepParams p;
  p.dt = 0.5 * m.grid->spacing[0];
  const int steps_per_window = static_cast<int>(std::llround(1.0 / p.dt));
  const Trajectory traj = simulate(m, p, init, 2 * steps_per_window, steps_per_window);
  DecayCalculus calc = closed_form_calculus();
  RecursionReport rep = check_energy_recursion(traj, calc, 1.0);
  CHECK(rep.recursion_ok);
  CHECK(rep.envelope_ok);
}

TEST_CASE("too-short trajectories are rejected") {
  Model m = make_model_1d(19, 1.0, 0.0, "linear", "zero");
  SimState init;
  init.u = sine_field(m.grid);
  init.v = NodalField(m.grid);
  StepParams p;
  p.dt = 0.5 * m.grid->spacing[0];
  const Trajectory traj = simulate(m, p, init, 10, 5);
  CHECK_THROWS_AS(check_energy_recursion(traj, closed_form_calculus(), 1.0), Error);
}
