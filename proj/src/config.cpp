#include "kvwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kvwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "domain.dim",        "domain.extents",      "domain.counts",
      "regions.core",      "regions.band_eps",
      "damping.kv_shape",  "damping.kv_amplitude", "damping.friction_shape",
      "damping.friction_amplitude", "damping.friction_floor",
      "laws.f",            "laws.f_p",            "laws.g",
      "time.dt",           "time.theta",          "time.t_final",
      "time.t_sample",     "time.solver_tol",     "time.max_iters",
      "time.solver",
      "initial.preset",    "initial.u_modes",     "initial.v_modes",
      "initial.seed",      "initial.amplitude",
      "output.dir",
      "task",
      "decay.window",      "decay.c_obs",         "decay.calib_samples",
      "observability.samples", "observability.window", "observability.radius",
      "sweep.configs",
  };
  return keys;
}

struct ErrorList {
  std::vector<std::string> items;
  void add(const std::string& key, const std::string& reason) { items.push_back(key + ": " + reason); }
  bool empty() const { return items.empty(); }
  std::string joined() const {
    std::string s;
    for (size_t i = 0; i < items.size(); ++i) s += (i ? "; " : "") + items[i];
    return s;
  }
};

class Reader {
public:
  Reader(const std::map<std::string, std::string>& kv, ErrorList& errs) : kv_(kv), errs_(errs) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }

  double num(const std::string& key, double dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    try {
      size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      errs_.add(key, "not a number: '" + it->second + "'");
      return dflt;
    }
  }

  long integer(const std::string& key, long dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    try {
      size_t pos = 0;
      const long v = std::stol(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      errs_.add(key, "not an integer: '" + it->second + "'");
      return dflt;
    }
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    try {
      size_t pos = 0;
      const unsigned long long v = std::stoull(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      errs_.add(key, "not an unsigned integer: '" + it->second + "'");
      return dflt;
    }
  }

  std::vector<double> num_list(const std::string& key, std::vector<double> dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    std::vector<double> out;
    for (const auto& tok : split_list(it->second)) {
      try {
        out.push_back(std::stod(tok));
      } catch (...) {
        errs_.add(key, "not a number list: '" + it->second + "'");
        return dflt;
      }
    }
    return out;
  }

  std::vector<int> int_list(const std::string& key, std::vector<int> dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    std::vector<int> out;
    for (const auto& tok : split_list(it->second)) {
      try {
        out.push_back(std::stoi(tok));
      } catch (...) {
        errs_.add(key, "not an integer list: '" + it->second + "'");
        return dflt;
      }
    }
    return out;
  }

private:
  const std::map<std::string, std::string>& kv_;
  ErrorList& errs_;
};

bool one_of(const std::string& v, std::initializer_list<const char*> catalog) {
  for (const char* c : catalog)
    if (v == c) return true;
  return false;
}

std::string catalog_str(std::initializer_list<const char*> catalog) {
  std::string s;
  for (const char* c : catalog) s += (s.empty() ? "" : ", ") + std::string(c);
  return s;
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
  ErrorList errs;
  std::map<std::string, std::string> kv;

  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.add("line " + std::to_string(lineno), "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      errs.add(key, "unknown key");
      continue;
    }
    if (kv.count(key)) errs.add(key, "duplicate key");
    kv[key] = value;
  }

  Reader r(kv, errs);
  ScenarioConfig c;
  c.raw = kv;

  // domain
  c.dim = static_cast<int>(r.integer("domain.dim", 1));
  if (c.dim != 1 && c.dim != 2) errs.add("domain.dim", "must be 1 or 2");
  c.extents = r.num_list("domain.extents", {1.0});
  c.counts = r.int_list("domain.counts", c.dim == 2 ? std::vector<int>{31, 31} : std::vector<int>{199});
  if (c.dim == 2 && c.extents.size() == 1) c.extents.push_back(c.extents[0]);
  if (static_cast<int>(c.extents.size()) != c.dim) errs.add("domain.extents", "need one entry per axis");
  if (static_cast<int>(c.counts.size()) != c.dim) errs.add("domain.counts", "need one entry per axis");
  for (double e : c.extents)
    if (!(e > 0.0)) errs.add("domain.extents", "extents must be positive");
  for (int n : c.counts)
    if (n < 3) errs.add("domain.counts", "need at least 3 interior nodes per axis");

  // regions
  const std::string core = r.str("regions.core", "all");
  if (core == "all") {
    c.core = RegionSpec::make_all();
  } else if (core == "none") {
    c.core = RegionSpec::make_none();
  } else {
    const auto nums = split_list(core);
    std::vector<double> vals;
    bool ok = true;
    for (const auto& tok : nums) {
      try {
        vals.push_back(std::stod(tok));
      } catch (...) {
        ok = false;
      }
    }
    if (!ok || static_cast<int>(vals.size()) != 2 * c.dim) {
      errs.add("regions.core", "expected 'all', 'none' or " + std::to_string(2 * std::max(c.dim, 1)) +
                                   " numbers (lo,hi per axis)");
    } else if (c.dim == 1) {
      c.core = RegionSpec::interval(vals[0], vals[1]);
    } else {
      c.core = RegionSpec::rect(vals[0], vals[1], vals[2], vals[3]);
    }
  }
  c.band_eps = r.num("regions.band_eps", 0.0);
  if (c.core.kind == RegionSpec::Kind::box && !(c.band_eps > 0.0))
    errs.add("regions.band_eps", "must be positive for a box core");
  if (c.band_eps < 0.0) errs.add("regions.band_eps", "must be nonnegative");

  // damping
  c.kv_shape.kind = r.str("damping.kv_shape", "zero");
  c.kv_shape.amplitude = r.num("damping.kv_amplitude", 1.0);
  if (!one_of(c.kv_shape.kind, {"bump", "constant", "zero"}))
    errs.add("damping.kv_shape", "unknown shape '" + c.kv_shape.kind +
                                     "' (catalog: " + catalog_str({"bump", "constant", "zero"}) + ")");
  c.friction_shape.kind = r.str("damping.friction_shape", "zero");
  c.friction_shape.amplitude = r.num("damping.friction_amplitude", 0.0);
  if (!one_of(c.friction_shape.kind, {"band", "constant", "zero"}))
    errs.add("damping.friction_shape",
             "unknown shape '" + c.friction_shape.kind +
                 "' (catalog: " + catalog_str({"band", "constant", "zero"}) + ")");
  c.friction_floor = r.num("damping.friction_floor", 0.0);
  if (c.kv_shape.amplitude < 0.0) errs.add("damping.kv_amplitude", "must be nonnegative");
  if (c.friction_shape.amplitude < 0.0) errs.add("damping.friction_amplitude", "must be nonnegative");
  if (c.friction_floor < 0.0) errs.add("damping.friction_floor", "must be nonnegative");

  // laws
  c.f_kind = r.str("laws.f", "zero");
  if (!one_of(c.f_kind, {"zero", "power", "cubic_clipped"}))
    errs.add("laws.f", "unknown nonlinearity '" + c.f_kind +
                           "' (catalog: " + catalog_str({"zero", "power", "cubic_clipped"}) + ")");
  c.f_p = r.num("laws.f_p", 1.0);
  {
    const std::string g = r.str("laws.g", "linear");
    c.g_kinds = split_list(g);
    if (c.g_kinds.empty()) c.g_kinds = {"linear"};
    if (static_cast<int>(c.g_kinds.size()) == 1 && c.dim == 2) c.g_kinds.push_back(c.g_kinds[0]);
    if (static_cast<int>(c.g_kinds.size()) != c.dim)
      errs.add("laws.g", "need one feedback kind, or one per axis");
    for (const auto& k : c.g_kinds)
      if (!one_of(k, {"linear", "cubic_near_zero", "saturating"}))
        errs.add("laws.g", "unknown feedback '" + k + "' (catalog: " +
                               catalog_str({"linear", "cubic_near_zero", "saturating"}) + ")");
  }

  // time
  double h_min = 1e300;
  if (static_cast<int>(c.extents.size()) == c.dim && static_cast<int>(c.counts.size()) == c.dim) {
    for (int a = 0; a < c.dim; ++a)
      if (c.counts[a] >= 3 && c.extents[a] > 0.0)
        h_min = std::min(h_min, c.extents[a] / (c.counts[a] + 1));
  }
  c.dt = r.num("time.dt", 0.0);
  if (r.has("time.dt") && !(c.dt > 0.0)) errs.add("time.dt", "must be positive");
  if (c.dt == 0.0) c.dt = h_min < 1e300 ? 0.5 * h_min : 0.0;
  c.theta = r.num("time.theta", 0.5);
  if (c.theta < 0.5 || c.theta > 1.0) errs.add("time.theta", "must lie in [0.5, 1]");
  c.t_final = r.num("time.t_final", 1.0);
  if (!(c.t_final > 0.0)) errs.add("time.t_final", "must be positive");
  c.t_sample = r.num("time.t_sample", 0.0);
  if (r.has("time.t_sample") && !(c.t_sample > 0.0)) errs.add("time.t_sample", "must be positive");
  c.solver_tol = r.num("time.solver_tol", 1e-10);
  if (!(c.solver_tol > 0.0)) errs.add("time.solver_tol", "must be positive");
  c.max_iters = static_cast<int>(r.integer("time.max_iters", 50));
  if (c.max_iters < 1) errs.add("time.max_iters", "must be >= 1");
  {
    const std::string solver = r.str("time.solver", "newton");
    if (solver == "newton")
      c.solver = SolverKind::newton;
    else if (solver == "fixed_point")
      c.solver = SolverKind::fixed_point;
    else
      errs.add("time.solver", "unknown solver '" + solver + "' (catalog: newton, fixed_point)");
  }

  // derived step counts (only when dt is usable)
  if (c.dt > 0.0 && c.t_final > 0.0) {
    c.n_steps = std::max(1, static_cast<int>(std::llround(c.t_final / c.dt)));
    if (std::abs(c.n_steps * c.dt - c.t_final) > 1e-6 * std::max(1.0, c.t_final))
      errs.add("time.t_final", "must be an integer multiple of dt");
    if (c.t_sample == 0.0) c.t_sample = 10.0 * c.dt;
    c.sample_stride = std::max(1, static_cast<int>(std::llround(c.t_sample / c.dt)));
    if (std::abs(c.sample_stride * c.dt - c.t_sample) > 1e-6 * std::max(1.0, c.t_sample))
      errs.add("time.t_sample", "must be an integer multiple of dt");
  }

  // initial
  c.preset = r.str("initial.preset", "sine");
  if (!one_of(c.preset, {"zero", "sine", "modes", "random"}))
    errs.add("initial.preset", "unknown preset '" + c.preset +
                                   "' (catalog: " + catalog_str({"zero", "sine", "modes", "random"}) + ")");
  c.u_modes = r.num_list("initial.u_modes", {});
  c.v_modes = r.num_list("initial.v_modes", {});
  if (c.preset == "modes" && c.u_modes.empty() && c.v_modes.empty())
    errs.add("initial.u_modes", "preset 'modes' needs mode coefficients");
  c.seed = r.unsigned64("initial.seed", 1);
  c.amplitude = r.num("initial.amplitude", 1.0);

  // output
  c.out_dir = r.str("output.dir", "out");

  // task
  c.task = r.str("task", "simulate");
  if (!one_of(c.task, {"simulate", "decay", "observability", "sweep"}))
    errs.add("task", "unknown task '" + c.task + "' (catalog: " +
                         catalog_str({"simulate", "decay", "observability", "sweep"}) + ")");

  // decay
  c.decay_window = r.num("decay.window", 0.0);
  if (r.has("decay.window") && !(c.decay_window > 0.0)) errs.add("decay.window", "must be positive");
  if (c.decay_window == 0.0) c.decay_window = c.t_sample;
  c.decay_c_obs = r.num("decay.c_obs", 0.0);
  if (c.decay_c_obs < 0.0) errs.add("decay.c_obs", "must be nonnegative");
  c.decay_calib_samples = static_cast<int>(r.integer("decay.calib_samples", 8));
  if (c.decay_calib_samples < 1) errs.add("decay.calib_samples", "must be >= 1");
  if (c.task == "decay" && c.dt > 0.0 && c.decay_window > 0.0) {
    const long k = std::llround(c.decay_window / (c.sample_stride * c.dt));
    if (k < 1 || std::abs(k * c.sample_stride * c.dt - c.decay_window) > 1e-6 * c.decay_window)
      errs.add("decay.window", "must be a multiple of the sampling period");
  }

  // observability
  c.obs_samples = static_cast<int>(r.integer("observability.samples", 8));
  if (c.obs_samples < 1) errs.add("observability.samples", "must be >= 1");
  c.obs_window = r.num("observability.window", 0.0);
  if (r.has("observability.window") && !(c.obs_window > 0.0))
    errs.add("observability.window", "must be positive");
  if (c.obs_window == 0.0) c.obs_window = c.t_final;
  c.obs_radius = r.num("observability.radius", 1.0);
  if (!(c.obs_radius > 0.0)) errs.add("observability.radius", "must be positive");

  // sweep
  {
    const std::string s = r.str("sweep.configs", "");
    c.sweep_configs = split_list(s);
    if (c.task == "sweep" && c.sweep_configs.empty())
      errs.add("sweep.configs", "task 'sweep' needs a comma-separated config list");
  }

  if (!errs.empty()) fail(Err::ConfigInvalid, errs.joined());
  return c;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::ConfigInvalid, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

} // namespace kvwave
