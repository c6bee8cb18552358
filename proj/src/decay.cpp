#include "kvwave/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kvwave {

double ConcaveMajorant::terminal_slope() const {
  const size_t n = knots_x.size();
  if (n < 2) return 0.0;
  return (values[n - 1] - values[n - 2]) / (knots_x[n - 1] - knots_x[n - 2]);
}

double ConcaveMajorant::eval(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= knots_x.back()) return values.back() + terminal_slope() * (x - knots_x.back());
  const auto it = std::upper_bound(knots_x.begin(), knots_x.end(), x);
  const size_t k = static_cast<size_t>(it - knots_x.begin());
  const double t = (x - knots_x[k - 1]) / (knots_x[k] - knots_x[k - 1]);
  return values[k - 1] + t * (values[k] - values[k - 1]);
}

namespace {

struct CurvePoint {
  double x, y;
};

/// Upper concave hull of points sorted by x (monotone chain, collinear dropped).
std::vector<CurvePoint> upper_hull(std::vector<CurvePoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return a.x < b.x || (a.x == b.x && a.y > b.y);
  });
  // Keep only the highest point per x.
  std::vector<CurvePoint> uniq;
  for (const auto& p : pts)
    if (uniq.empty() || p.x > uniq.back().x) uniq.push_back(p);

  std::vector<CurvePoint> hull;
  for (const auto& p : uniq) {
    while (hull.size() >= 2) {
      const CurvePoint& a = hull[hull.size() - 2];
      const CurvePoint& b = hull[hull.size() - 1];
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (cross >= 0.0)
        hull.pop_back(); // b below or on the chord a-p: not an upper-hull vertex
      else
        break;
    }
    hull.push_back(p);
  }
  return hull;
}

} // namespace

ConcaveMajorant construct_h(const FeedbackComponent& component) {
  const auto& g = component.g;

  // Sample the parametric curve x(s) = s g(s), y(s) = s^2 + g(s)^2 over both
  // branches s in [-1, 1]. The graded grid clusters samples at the origin
  // where the curve can be steep; the uniform grid pins the canonical sample
  // points exactly.
  std::vector<CurvePoint> cloud;
  cloud.push_back({0.0, 0.0});
  auto add_samples = [&](double s) {
    for (double sign : {1.0, -1.0}) {
      const double si = sign * s;
      const double gs = g(si);
      cloud.push_back({si * gs, si * si + gs * gs});
    }
  };
  // The uniform count is a multiple of 1000 so the canonical thousandth-grid
  // sample points are cloud points and dominated exactly, not by interpolation.
  const int graded = 16384, uniform = 8000;
  for (int k = 1; k <= graded; ++k) {
    const double t = static_cast<double>(k) / graded;
    add_samples(t * t);
  }
  for (int k = 1; k <= uniform; ++k) add_samples(static_cast<double>(k) / uniform);

  double x_top = 0.0;
  for (const auto& p : cloud) x_top = std::max(x_top, p.x);
  if (!(x_top > 0.0))
    fail(Err::DegenerateFeedback, "feedback component vanishes on [0,1], no majorant exists");
  for (const auto& p : cloud)
    if (p.x < 0.0) fail(Err::NotMonotone, "s*g(s) < 0: feedback violates the sign condition");

  std::vector<CurvePoint> hull = upper_hull(std::move(cloud));

  // Enforce monotone nondecreasing: flatten any decreasing tail at the peak.
  size_t peak = 0;
  for (size_t i = 1; i < hull.size(); ++i)
    if (hull[i].y >= hull[peak].y) peak = i;
  for (size_t i = peak + 1; i < hull.size(); ++i) hull[i].y = hull[peak].y;

  ConcaveMajorant h;
  for (const auto& p : hull) {
    h.knots_x.push_back(p.x);
    h.values.push_back(p.y);
  }
  return h;
}

double DecayCalculus::h_hat(double x) const {
  if (h_hat_override) return h_hat_override(x);
  double s = 0.0;
  for (const auto& m : majorants) s += m.eval(x / window_measure);
  return s;
}

namespace {

/// Solves phi(y) = target for increasing phi on [0, inf) by bracket growth and
/// bisection to 1e-12 absolute.
double invert_increasing(const std::function<double(double)>& phi, double target) {
  if (target <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  int grow = 0;
  while (phi(hi) < target) {
    hi *= 2.0;
    if (++grow > 200) fail(Err::NonPositiveConstant, "monotone inversion bracket failed to close");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

double DecayCalculus::dissipation_floor(double x) const {
  if (x <= 0.0) return 0.0;
  const double target = rate_scale * x;
  return invert_increasing([this](double y) { return rate_shift * y + h_hat(y); }, target);
}

double DecayCalculus::envelope_rate(double x) const {
  if (x <= 0.0) return 0.0;
  if (form == EnvelopeRateForm::standard) {
    // R(x) = x - w with w + z(w) = x. Substituting q = z(w) (so w = (mu q +
    // h_hat(q))/L) collapses the nested inversion into one monotone solve:
    // R(x) = q where (mu q + h_hat(q))/L + q = x.
    if (rate_scale <= 0.0) return 0.0; // z vanishes identically
    const double q = invert_increasing(
        [this](double y) { return (rate_shift * y + h_hat(y)) / rate_scale + y; }, x);
    return q;
  }
  // Legacy form: w - z(w) = x. Only solvable when z has slope < 1.
  double lo = x, hi = x;
  auto phi = [this](double y) { return y - dissipation_floor(y); };
  int grow = 0;
  while (phi(hi) < x) {
    hi = std::max(2.0 * hi, hi + 1.0);
    if (++grow > 100)
      fail(Err::NonPositiveConstant, "legacy envelope rate form is not invertible for this calculus");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < x ? lo : hi) = mid;
  }
  return x - 0.5 * (lo + hi);
}

void DecayCalculus::tabulate(double x_max, int knots) {
  if (knots < 2) knots = 2;
  z_x.resize(knots);
  z_y.resize(knots);
  r_x.resize(knots);
  r_y.resize(knots);
  for (int k = 0; k < knots; ++k) {
    const double x = x_max * static_cast<double>(k) / (knots - 1);
    z_x[k] = x;
    z_y[k] = dissipation_floor(x);
    r_x[k] = x;
    r_y[k] = envelope_rate(x);
  }
}

DecayCalculus DecayCalculus::from_parts(std::function<double(double)> h_hat, double mu, double L,
                                        EnvelopeRateForm form) {
  if (mu < 0.0 || L < 0.0) fail(Err::NonPositiveConstant, "mu and L must be nonnegative");
  DecayCalculus c;
  c.h_hat_override = std::move(h_hat);
  c.rate_shift = mu;
  c.rate_scale = L;
  c.form = form;
  c.tabulate(1.0);
  return c;
}

DecayCalculus build_calculus(std::vector<ConcaveMajorant> majorants, double domain_measure, double T,
                             double c_obs, double growth_lo, double growth_hi, double kv_sup,
                             EnvelopeRateForm form, double table_x_max) {
  if (!(c_obs > 0.0)) fail(Err::NonPositiveConstant, "observability constant must be positive");
  if (!(T > 0.0) || !(domain_measure > 0.0))
    fail(Err::NonPositiveConstant, "window length and domain measure must be positive");
  if (!(growth_lo > 0.0) || growth_hi < growth_lo)
    fail(Err::NonPositiveConstant, "growth bounds must satisfy 0 < m <= M");
  if (kv_sup < 0.0) fail(Err::NonPositiveConstant, "kv_sup must be nonnegative");
  if (majorants.empty()) fail(Err::NonPositiveConstant, "at least one majorant is required");

  DecayCalculus c;
  c.majorants = std::move(majorants);
  c.window_measure = domain_measure * T;
  c.c_obs = c_obs;
  c.growth_lo = growth_lo;
  c.growth_hi = growth_hi;
  c.kv_sup = kv_sup;
  c.rate_scale = 1.0 / (c_obs * (1.0 + kv_sup) * c.window_measure);
  c.rate_shift = (1.0 + 1.0 / growth_lo + growth_hi) / ((1.0 + kv_sup) * c.window_measure);
  c.form = form;
  c.tabulate(table_x_max);
  return c;
}

double Envelope::eval(double t) const {
  if (times.empty()) return 0.0;
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const size_t k = static_cast<size_t>(it - times.begin());
  const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
  return values[k - 1] + w * (values[k] - values[k - 1]);
}

Envelope solve_envelope(const DecayCalculus& calc, double e0, double horizon, int steps) {
  if (e0 < 0.0) fail(Err::NonPositiveConstant, "initial envelope value must be nonnegative");
  if (steps < 1) steps = 1;
  Envelope env;
  env.e0 = e0;
  env.times.reserve(steps + 1);
  env.values.reserve(steps + 1);
  const double dt = horizon / steps;
  double s = e0;
  env.times.push_back(0.0);
  env.values.push_back(s);
  auto rate = [&calc](double x) { return -calc.envelope_rate(std::max(x, 0.0)); };
  for (int n = 0; n < steps; ++n) {
    const double k1 = rate(s);
    const double k2 = rate(s + 0.5 * dt * k1);
    const double k3 = rate(s + 0.5 * dt * k2);
    const double k4 = rate(s + dt * k3);
    double next = s + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next = std::min(std::max(next, 0.0), s); // clip at zero, keep nonincreasing
    s = next;
    env.times.push_back((n + 1) * dt);
    env.values.push_back(s);
  }
  return env;
}

SequenceReport check_sequence_lemma(const std::vector<double>& s, const DecayCalculus& calc,
                                    double rel_tol) {
  SequenceReport rep;
  if (s.empty()) fail(Err::EmptyTrajectory, "sequence is empty");
  for (double v : s)
    if (!(v >= 0.0) || !std::isfinite(v))
      fail(Err::ConfigInvalid, "sequence entries must be finite and nonnegative");

  // The floor is evaluated by bisection to 1e-12 absolute, so the equality
  // case needs the matching absolute slack.
  for (size_t m = 0; m + 1 < s.size(); ++m) {
    const double lhs = s[m + 1] + calc.dissipation_floor(s[m + 1]);
    if (lhs > s[m] * (1.0 + 1e-12) + 2e-12) {
      rep.hypothesis_ok = false;
      rep.violation_index = static_cast<int>(m + 1);
      return rep;
    }
  }

  const int len = static_cast<int>(s.size());
  const double horizon = std::max(1, len - 1);
  rep.envelope = solve_envelope(calc, s[0], horizon, 256 * std::max(1, len - 1));
  rep.dominated = true;
  for (int m = 0; m < len; ++m) {
    const double Sm = rep.envelope.eval(m);
    if (Sm > 0.0) {
      rep.worst_excess = std::max(rep.worst_excess, s[m] / Sm - 1.0);
      if (s[m] > Sm * (1.0 + rel_tol)) rep.dominated = false;
    } else if (s[m] > 1e-300) {
      rep.dominated = false;
      rep.worst_excess = std::numeric_limits<double>::infinity();
    }
  }
  return rep;
}

RecursionReport check_energy_recursion(const Trajectory& traj, const DecayCalculus& calc, double T,
                                       double rel_tol_recursion, double rel_tol_envelope) {
  RecursionReport rep;
  rep.window_T = T;
  if (traj.t.empty()) fail(Err::EmptyTrajectory, "trajectory has no samples");
  const double span = traj.t.back();
  if (span < 2.0 * T * (1.0 - 1e-9))
    fail(Err::TrajectoryTooShort, "trajectory spans " + std::to_string(span) +
                                      ", need at least 2 windows of length " + std::to_string(T));

  auto energy_at = [&](double t) {
    // Nearest sample; window multiples must align with the sampling grid.
    size_t best = 0;
    double bd = std::abs(traj.t[0] - t);
    for (size_t i = 1; i < traj.t.size(); ++i) {
      const double d = std::abs(traj.t[i] - t);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    if (bd > 1e-6 * std::max(1.0, T))
      fail(Err::ConfigInvalid, "samples do not align with window multiples (offset " +
                                   std::to_string(bd) + " at t=" + std::to_string(t) + ")");
    return traj.e_total[best];
  };

  const int n_windows = static_cast<int>(std::floor(span / T + 1e-9));
  for (int m = 0; m + 1 <= n_windows; ++m) {
    RecursionWindow w;
    w.m = m;
    w.e_start = energy_at(m * T);
    w.e_end = energy_at((m + 1) * T);
    w.floor_val = calc.dissipation_floor(w.e_end);
    w.slack = w.e_start - w.e_end - w.floor_val;
    w.ok = w.e_end + w.floor_val <= w.e_start * (1.0 + rel_tol_recursion) + 1e-300;
    if (!w.ok && rep.first_violation < 0) rep.first_violation = m;
    rep.recursion_ok = rep.recursion_ok && w.ok;
    rep.windows.push_back(w);
  }

  const double e0 = traj.e_total.front();
  const double horizon = std::max(1.0, span / T);
  rep.envelope = solve_envelope(calc, e0, horizon, static_cast<int>(512 * std::ceil(horizon)));
  for (size_t i = 0; i < traj.t.size(); ++i) {
    const double t = traj.t[i];
    if (t <= T * (1.0 + 1e-12)) continue;
    const double s = rep.envelope.eval(t / T - 1.0);
    if (s > 0.0) {
      const double excess = traj.e_total[i] / s - 1.0;
      rep.worst_envelope_excess = std::max(rep.worst_envelope_excess, excess);
      if (traj.e_total[i] > s * (1.0 + rel_tol_envelope)) rep.envelope_ok = false;
    } else if (traj.e_total[i] > 1e-300) {
      rep.envelope_ok = false;
      rep.worst_envelope_excess = std::numeric_limits<double>::infinity();
    }
  }
  return rep;
}

} // namespace kvwave
