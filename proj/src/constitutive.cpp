#include "kvwave/constitutive.hpp"

#include <cmath>

namespace kvwave {

namespace {

double sign_of(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }

ValidationCheck make_fail(const std::string& name, double s, double value, const std::string& detail) {
  return ValidationCheck{name, false, s, value, detail};
}

Err code_for(const std::string& check_name) {
  if (check_name == "monotone") return Err::NotMonotone;
  if (check_name == "growth_bounds" || check_name == "derivative_growth") return Err::GrowthBoundViolated;
  return Err::SignConditionViolated;
}

} // namespace

Nonlinearity make_nonlinearity(const std::string& kind, double p, int ambient_dim) {
  if (ambient_dim >= 3) {
    const double p_crit = static_cast<double>(ambient_dim) / (ambient_dim - 2);
    if (!(p < p_crit))
      fail(Err::SupercriticalExponent, "p=" + std::to_string(p) + " requires p < n/(n-2) = " +
                                           std::to_string(p_crit) + " in dimension " +
                                           std::to_string(ambient_dim));
  }
  if (!(p >= 1.0))
    fail(Err::SupercriticalExponent, "growth exponent must satisfy p >= 1, got " + std::to_string(p));

  Nonlinearity law;
  law.kind = kind;
  if (kind == "zero") {
    law.growth_exp = 1.0;
    law.growth_const = 0.0;
    law.f = [](double) { return 0.0; };
    law.F = [](double) { return 0.0; };
    law.fprime = [](double) { return 0.0; };
  } else if (kind == "power") {
    law.growth_exp = p;
    law.growth_const = p;
    law.f = [p](double s) { return sign_of(s) * std::pow(std::abs(s), p); };
    law.F = [p](double s) { return std::pow(std::abs(s), p + 1.0) / (p + 1.0); };
    law.fprime = [p](double s) { return p * std::pow(std::abs(s), p - 1.0); };
  } else if (kind == "cubic_clipped") {
    // s^3 near the origin, matched C^1 to linear growth past |s|=1.
    law.growth_exp = 1.0;
    law.growth_const = 3.0;
    law.f = [](double s) {
      return std::abs(s) <= 1.0 ? s * s * s : sign_of(s) * (3.0 * std::abs(s) - 2.0);
    };
    law.F = [](double s) {
      const double a = std::abs(s);
      return a <= 1.0 ? 0.25 * a * a * a * a : 1.5 * a * a - 2.0 * a + 0.75;
    };
    law.fprime = [](double s) { return std::abs(s) <= 1.0 ? 3.0 * s * s : 3.0; };
  } else {
    fail(Err::ConfigInvalid, "unknown nonlinearity kind '" + kind + "' (catalog: zero, power, cubic_clipped)");
  }
  ensure_valid(law);
  return law;
}

FeedbackLaw make_feedback(const std::vector<std::string>& kinds) {
  if (kinds.empty()) fail(Err::ConfigInvalid, "feedback law needs at least one component");
  FeedbackLaw law;
  law.growth_lo = 1e300;
  law.growth_hi = 0.0;
  for (const auto& kind : kinds) {
    FeedbackComponent c;
    c.kind = kind;
    double lo = 1.0, hi = 1.0;
    if (kind == "linear") {
      c.g = [](double s) { return s; };
      c.gprime = [](double) { return 1.0; };
    } else if (kind == "cubic_near_zero") {
      c.g = [](double s) { return std::abs(s) <= 1.0 ? s * s * s : s; };
      c.gprime = [](double s) { return std::abs(s) < 1.0 ? 3.0 * s * s : 1.0; };
    } else if (kind == "saturating") {
      // Linear growth with a tanh softening near the origin.
      c.g = [](double s) { return s - 0.5 * std::tanh(s); };
      c.gprime = [](double s) {
        const double ch = std::cosh(s);
        return 1.0 - 0.5 / (ch * ch);
      };
      lo = 1.0 - 0.5 * std::tanh(1.0);
      hi = 1.0;
    } else {
      fail(Err::ConfigInvalid,
           "unknown feedback kind '" + kind + "' (catalog: linear, cubic_near_zero, saturating)");
    }
    law.growth_lo = std::min(law.growth_lo, lo);
    law.growth_hi = std::max(law.growth_hi, hi);
    law.components.push_back(std::move(c));
  }
  ensure_valid(law);
  return law;
}

ValidationReport validate(const Nonlinearity& law, double sample_lo, double sample_hi, int sample_count) {
  ValidationReport rep;
  if (sample_count < 100) sample_count = 100;
  const double step = (sample_hi - sample_lo) / (sample_count - 1);

  if (std::abs(law.f(0.0)) > 0.0)
    rep.checks.push_back(make_fail("zero_at_origin", 0.0, law.f(0.0), "f(0) != 0"));
  else
    rep.checks.push_back({"zero_at_origin", true, 0, 0, ""});

  ValidationCheck sign{"sign_condition", true, 0, 0, ""};
  ValidationCheck anti{"antiderivative_bounds", true, 0, 0, ""};
  ValidationCheck growth{"derivative_growth", true, 0, 0, ""};
  for (int i = 0; i < sample_count; ++i) {
    const double s = sample_lo + i * step;
    const double fs = law.f(s);
    const double Fs = law.F(s);
    if (sign.passed && fs * s < 0.0) sign = make_fail("sign_condition", s, fs * s, "f(s)s < 0");
    if (anti.passed && (Fs < -1e-14 || Fs > fs * s + 1e-12 * (1.0 + std::abs(fs * s))))
      anti = make_fail("antiderivative_bounds", s, Fs, "0 <= F(s) <= f(s)s violated");
    const double bound = law.growth_const * std::pow(1.0 + std::abs(s), law.growth_exp - 1.0);
    if (growth.passed && std::abs(law.fprime(s)) > bound + 1e-12 * (1.0 + bound))
      growth = make_fail("derivative_growth", s, law.fprime(s), "|f'(s)| exceeds k0*(1+|s|)^(p-1)");
  }
  rep.checks.push_back(sign);
  rep.checks.push_back(anti);
  rep.checks.push_back(growth);
  return rep;
}

ValidationReport validate(const FeedbackLaw& law, double sample_lo, double sample_hi, int sample_count) {
  ValidationReport rep;
  if (sample_count < 100) sample_count = 100;
  const double step = (sample_hi - sample_lo) / (sample_count - 1);

  for (size_t ci = 0; ci < law.components.size(); ++ci) {
    const auto& g = law.components[ci].g;
    const std::string tag = "[" + std::to_string(ci) + "] ";

    if (std::abs(g(0.0)) > 0.0)
      rep.checks.push_back(make_fail(tag + "zero_at_origin", 0.0, g(0.0), "g(0) != 0"));
    else
      rep.checks.push_back({tag + "zero_at_origin", true, 0, 0, ""});

    ValidationCheck mono{"monotone", true, 0, 0, ""};
    ValidationCheck sign{"strict_sign", true, 0, 0, ""};
    ValidationCheck bounds{"growth_bounds", true, 0, 0, ""};
    double prev_s = sample_lo, prev_g = g(sample_lo);
    for (int i = 1; i < sample_count; ++i) {
      const double s = sample_lo + i * step;
      const double gs = g(s);
      if (mono.passed && (gs - prev_g) * (s - prev_s) < -1e-14)
        mono = make_fail("monotone", s, gs - prev_g, "g not nondecreasing");
      if (sign.passed && std::abs(s) > 1e-9 && gs * s <= 0.0)
        sign = make_fail("strict_sign", s, gs * s, "g(s)s <= 0 for s != 0");
      if (std::abs(s) >= 1.0) {
        const double ratio = gs * s / (s * s);
        if (bounds.passed &&
            (ratio < law.growth_lo - 1e-12 || ratio > law.growth_hi + 1e-12))
          bounds = make_fail("growth_bounds", s, ratio, "g(s)s outside [m s^2, M s^2]");
      }
      prev_s = s;
      prev_g = gs;
    }
    mono.name = tag + mono.name;
    sign.name = tag + sign.name;
    bounds.name = tag + bounds.name;
    rep.checks.push_back(mono);
    rep.checks.push_back(sign);
    rep.checks.push_back(bounds);
  }
  return rep;
}

namespace {
void throw_first_failure(const ValidationReport& rep) {
  const ValidationCheck* f = rep.first_failure();
  if (!f) return;
  // Strip the component tag when mapping to an error code.
  std::string base = f->name;
  if (auto pos = base.find("] "); pos != std::string::npos) base = base.substr(pos + 2);
  fail(code_for(base), f->name + " at s=" + std::to_string(f->witness_s) + " (" + f->detail + ")");
}
} // namespace

void ensure_valid(const Nonlinearity& law) { throw_first_failure(validate(law, -5.0, 5.0, 1000)); }
void ensure_valid(const FeedbackLaw& law) { throw_first_failure(validate(law, -5.0, 5.0, 1000)); }

} // namespace kvwave
