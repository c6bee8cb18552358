#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kvwave/errors.hpp"

namespace kvwave {

/// Source nonlinearity f with its antiderivative F(s) = int_0^s f and
/// derivative, plus the growth data (exponent p, constant k0) used by the
/// sampled assumption checks: f(0)=0, f(s)s >= 0, 0 <= F(s) <= f(s)s and
/// |f'(s)| <= k0*(1+|s|)^(p-1).
struct Nonlinearity {
  std::string kind;
  double growth_exp = 1.0;   // p
  double growth_const = 0.0; // k0
  std::function<double(double)> f;
  std::function<double(double)> F;
  std::function<double(double)> fprime;
};

/// One scalar feedback component g_i: continuous, monotone nondecreasing,
/// g(0)=0, g(s)s>0 for s!=0, and linearly bounded for |s|>=1.
struct FeedbackComponent {
  std::string kind;
  std::function<double(double)> g;
  std::function<double(double)> gprime; // generalized derivative, >= 0
  bool differentiable = true;
};

struct FeedbackLaw {
  std::vector<FeedbackComponent> components;
  double growth_lo = 1.0; // m: g(s)s >= m s^2 for |s| >= 1
  double growth_hi = 1.0; // M: g(s)s <= M s^2 for |s| >= 1
};

/// Catalog: "zero", "power" (uses p), "cubic_clipped".
/// `ambient_dim` gates the subcritical growth restriction on p.
Nonlinearity make_nonlinearity(const std::string& kind, double p, int ambient_dim);

/// Catalog per component: "linear", "cubic_near_zero", "saturating".
FeedbackLaw make_feedback(const std::vector<std::string>& kinds);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  double witness_s = 0.0;     // sample where the check failed (if it did)
  double witness_value = 0.0; // offending quantity at the witness
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const ValidationCheck* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }
};

/// Dense-sampling validation of the constitutive assumptions over
/// [sample_lo, sample_hi]; never throws, failures are carried in the report.
ValidationReport validate(const Nonlinearity& law, double sample_lo, double sample_hi, int sample_count);
ValidationReport validate(const FeedbackLaw& law, double sample_lo, double sample_hi, int sample_count);

/// Throws the typed error corresponding to the first failed check
/// (SignConditionViolated, GrowthBoundViolated, NotMonotone, ...).
void ensure_valid(const Nonlinearity& law);
void ensure_valid(const FeedbackLaw& law);

} // namespace kvwave
