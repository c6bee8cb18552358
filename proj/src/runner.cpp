#include "kvwave/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "kvwave/energy.hpp"
#include "kvwave/initial_data.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace kvwave {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Err::ConfigInvalid: return 2;
    case Err::SolverDiverged:
    case Err::NonFiniteState: return 3;
    default: return 4;
  }
}

Scenario build_scenario(const ScenarioConfig& config) {
  Scenario sc;
  sc.config = config;

  GridPtr grid = build_grid(config.dim, config.extents, config.counts);
  const Regions regions = build_regions(grid, config.core, config.band_eps);
  DampingProfile damping =
      build_damping(grid, regions, config.kv_shape, config.friction_shape, config.friction_floor);

  sc.model.grid = grid;
  sc.model.damping = std::move(damping);
  sc.model.feedback = make_feedback(config.g_kinds);
  sc.model.source = make_nonlinearity(config.f_kind, config.f_p, config.dim);

  sc.params.dt = config.dt;
  sc.params.theta = config.theta;
  sc.params.solver_tol = config.solver_tol;
  sc.params.max_iters = config.max_iters;
  sc.params.solver = config.solver;

  if (config.preset == "zero") {
    sc.initial = make_state(grid, {}, {});
  } else if (config.preset == "sine") {
    sc.initial = make_state(grid, {config.amplitude}, {});
  } else if (config.preset == "modes") {
    sc.initial = make_state(grid, config.u_modes, config.v_modes);
  } else if (config.preset == "random") {
    std::mt19937_64 rng(config.seed);
    sc.initial = random_smooth_state(grid, 8, config.amplitude, rng);
  } else {
    fail(Err::ConfigInvalid, "unknown initial preset '" + config.preset + "'");
  }
  return sc;
}

Trajectory simulate_scenario(const ScenarioConfig& config) {
  const Scenario sc = build_scenario(config);
  return simulate(sc.model, sc.params, sc.initial, config.n_steps, config.sample_stride);
}

namespace {

class ArtifactWriter {
public:
  explicit ArtifactWriter(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

  void write(const std::string& name, const std::string& content) {
    const std::string p = path(name);
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(Err::ConfigInvalid, "cannot write artifact '" + p + "'");
    out << content;
    written_.push_back(p);
  }

  void remove_all() {
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    written_.clear();
  }

  const std::vector<std::string>& written() const { return written_; }

private:
  std::string dir_;
  std::vector<std::string> written_;
};

std::string timeseries_csv(const Trajectory& traj) {
  const std::vector<double> residual = balance_residual(traj);
  std::string s = "t,E_total,E_kin,E_pot,E_F,D_kv_cum,D_fric_cum,balance_residual\n";
  for (int n = 0; n < traj.samples(); ++n) {
    s += format_g17(traj.t[n]) + "," + format_g17(traj.e_total[n]) + "," + format_g17(traj.e_kin[n]) +
         "," + format_g17(traj.e_pot[n]) + "," + format_g17(traj.e_src[n]) + "," +
         format_g17(traj.d_kv_cum[n]) + "," + format_g17(traj.d_fric_cum[n]) + "," +
         format_g17(residual[n]) + "\n";
  }
  return s;
}

std::string envelope_csv(const Envelope& env) {
  std::string s = "t,S\n";
  for (size_t n = 0; n < env.times.size(); ++n)
    s += format_g17(env.times[n]) + "," + format_g17(env.values[n]) + "\n";
  return s;
}

std::string observability_csv(const ObservabilityReport& rep) {
  std::string s = "sample_id,E0,functional,ratio\n";
  for (const auto& smp : rep.samples)
    s += std::to_string(smp.id) + "," + format_g17(smp.e0) + "," + format_g17(smp.functional) + "," +
         format_g17(smp.ratio) + "\n";
  s += "c_emp,,," + format_g17(rep.c_emp) + "\n";
  return s;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string s = "name,gcc_satisfied,damping_absent,c_emp\n";
  for (const auto& r : rows)
    s += r.name + "," + (r.gcc_satisfied ? "1" : "0") + "," + (r.damping_absent ? "1" : "0") + "," +
         (r.damping_absent ? "" : format_g17(r.c_emp)) + "\n";
  return s;
}

/// Calibrates the observability constant for the decay pipeline: the random
/// ensemble estimate, sharpened with the recursion windows of the main
/// trajectory so the bound holds on every window it is later checked on.
double calibrate_c_obs(const Scenario& sc, const Trajectory& traj, double T,
                       ObservabilityReport* report_out) {
  const ObservabilityReport rep = estimate_constant(sc.model, sc.params, sc.config.decay_calib_samples,
                                                    T, sc.config.obs_radius, sc.config.seed);
  double c = rep.c_emp;
  const int n_windows = static_cast<int>(std::floor(traj.t.back() / T + 1e-9));
  for (int m = 0; m + 1 <= n_windows; ++m) {
    const double f0 = damping_functional(traj, m * T);
    const double f1 = damping_functional(traj, (m + 1) * T);
    const double denom = f1 - f0;
    // Locate E(mT) at the nearest sample.
    double e_start = 0.0;
    double best = 1e300;
    for (size_t i = 0; i < traj.t.size(); ++i) {
      const double d = std::abs(traj.t[i] - m * T);
      if (d < best) {
        best = d;
        e_start = traj.e_total[i];
      }
    }
    if (denom > 0.0) c = std::max(c, e_start / denom);
    else if (e_start > 0.0)
      fail(Err::DampingAbsent, "window " + std::to_string(m) + " dissipates nothing");
  }
  if (report_out) *report_out = rep;
  return c;
}

json config_echo(const ScenarioConfig& config) {
  json j = json::object();
  for (const auto& [k, v] : config.raw) j[k] = v;
  return j;
}

} // namespace

RunResult run(const ScenarioConfig& config_in) {
  ScenarioConfig config = config_in;
  if (const char* env = std::getenv("KVWAVE_OUTDIR"); env && *env) config.out_dir = env;

  const auto wall_start = std::chrono::steady_clock::now();
  ArtifactWriter artifacts(config.out_dir);
  RunResult result;

  json manifest;
  manifest["project"] = "kvwave";
  manifest["version"] = "0.1.0";
  manifest["task"] = config.task;
  manifest["config"] = config_echo(config);

  try {
    if (config.task == "sweep") {
      std::vector<NamedScenario> scenarios;
      for (const auto& path : config.sweep_configs) {
        ScenarioConfig sub = load_config_file(path);
        Scenario sc = build_scenario(sub);
        scenarios.push_back({fs::path(path).stem().string(), std::move(sc.model), sc.params});
      }
      const auto rows =
          sweep_geometries(scenarios, config.obs_samples, config.obs_window, config.obs_radius, config.seed);
      artifacts.write("sweep.csv", sweep_csv(rows));
      json jr = json::array();
      for (const auto& r : rows)
        jr.push_back({{"name", r.name},
                      {"gcc_satisfied", r.gcc_satisfied},
                      {"damping_absent", r.damping_absent},
                      {"c_emp", r.c_emp}});
      manifest["sweep"] = jr;
    } else {
      Scenario sc = build_scenario(config);
      manifest["derived"]["gcc_satisfied"] = sc.model.damping.gcc_satisfied;
      manifest["derived"]["kv_sup"] = sc.model.damping.kv_sup;
      manifest["derived"]["growth_lo"] = sc.model.feedback.growth_lo;
      manifest["derived"]["growth_hi"] = sc.model.feedback.growth_hi;

      if (config.task == "observability") {
        const ObservabilityReport rep = estimate_constant(
            sc.model, sc.params, config.obs_samples, config.obs_window, config.obs_radius, config.seed);
        artifacts.write("observability.csv", observability_csv(rep));
        manifest["derived"]["c_emp"] = rep.c_emp;
        manifest["derived"]["window_T"] = rep.window_T;
        manifest["derived"]["radius_R"] = rep.radius;
      } else {
        const Trajectory traj =
            simulate(sc.model, sc.params, sc.initial, config.n_steps, config.sample_stride);
        artifacts.write("timeseries.csv", timeseries_csv(traj));
        manifest["derived"]["E0"] = traj.e0();
        manifest["derived"]["max_balance_residual"] = max_balance_residual(traj);

        if (config.task == "decay") {
          const double T = config.decay_window;
          double c_obs = config.decay_c_obs;
          if (c_obs <= 0.0) c_obs = calibrate_c_obs(sc, traj, T, nullptr);

          std::vector<ConcaveMajorant> majorants;
          for (const auto& comp : sc.model.feedback.components) majorants.push_back(construct_h(comp));

          const double table_max = std::max(1.0, 2.0 * traj.e0());
          const DecayCalculus calc = build_calculus(
              majorants, sc.model.grid->domain_measure(), T, c_obs, sc.model.feedback.growth_lo,
              sc.model.feedback.growth_hi, sc.model.damping.kv_sup, EnvelopeRateForm::standard,
              table_max);
          const RecursionReport rec = check_energy_recursion(traj, calc, T);
          artifacts.write("envelope.csv", envelope_csv(rec.envelope));

          manifest["derived"]["C_obs"] = c_obs;
          manifest["derived"]["L"] = calc.rate_scale;
          manifest["derived"]["mu"] = calc.rate_shift;
          manifest["derived"]["meas_QT"] = calc.window_measure;
          manifest["derived"]["window_T"] = T;
          manifest["decay"]["recursion_ok"] = rec.recursion_ok;
          manifest["decay"]["first_violation"] = rec.first_violation;
          manifest["decay"]["envelope_ok"] = rec.envelope_ok;
          manifest["decay"]["worst_envelope_excess"] = rec.worst_envelope_excess;
          json jw = json::array();
          for (const auto& w : rec.windows)
            jw.push_back({{"m", w.m},
                          {"E_start", w.e_start},
                          {"E_end", w.e_end},
                          {"floor", w.floor_val},
                          {"slack", w.slack},
                          {"ok", w.ok}});
          manifest["decay"]["windows"] = jw;
        }
      }
    }

    const auto wall_end = std::chrono::steady_clock::now();
    manifest["wall_time_s"] = std::chrono::duration<double>(wall_end - wall_start).count();
    artifacts.write("manifest.json", manifest.dump(2) + "\n");
    result.exit_code = 0;
    result.artifacts = artifacts.written();
  } catch (const Error& e) {
    artifacts.remove_all();
    result.exit_code = exit_code_for(e);
    result.message = e.what();
  } catch (const std::exception& e) {
    artifacts.remove_all();
    result.exit_code = 1;
    result.message = e.what();
  }
  return result;
}

RunResult run_file(const std::string& config_path) {
  try {
    return run(load_config_file(config_path));
  } catch (const Error& e) {
    return RunResult{exit_code_for(e), e.what(), {}};
  }
}

RunResult run_sweep_paths(const std::vector<std::string>& config_paths, const std::string& out_dir) {
  try {
    if (config_paths.empty()) fail(Err::ConfigInvalid, "sweep needs at least one config");
    ScenarioConfig lead = load_config_file(config_paths.front());
    lead.task = "sweep";
    lead.sweep_configs = config_paths;
    if (!out_dir.empty()) lead.out_dir = out_dir;
    return run(lead);
  } catch (const Error& e) {
    return RunResult{exit_code_for(e), e.what(), {}};
  }
}

} // namespace kvwave
