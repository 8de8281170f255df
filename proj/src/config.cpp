#include "polariton/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace polariton {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::pair<Experiment, std::string_view>, 6> kExperiments{{
    {Experiment::Simulate, "simulate"},
    {Experiment::Ensemble, "ensemble"},
    {Experiment::Steady, "steady"},
    {Experiment::Spectrum, "spectrum"},
    {Experiment::Correlate, "correlate"},
    {Experiment::Sweep, "sweep"},
}};

constexpr std::array<std::string_view, 9> kSweepable{
    "eps_l", "eps_r", "eta", "kappa", "gamma_x", "r_scatter", "j_re", "p_l", "p_r"};

// One JSON object of the config. Tracks which keys were read so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : path_(std::move(path)) {
    if (!node.is_null() && !node.is_object()) throw ConfigError(path_, "expected an object");
    if (node.is_object()) node_ = &node;
  }

  [[nodiscard]] std::string key(std::string_view name) const {
    return path_.empty() ? std::string(name) : path_ + "." + std::string(name);
  }

  const json* find(std::string_view name) {
    seen_.emplace(name);
    if (node_ == nullptr) return nullptr;
    auto it = node_->find(std::string(name));
    return it == node_->end() ? nullptr : &*it;
  }

  const json& require(std::string_view name) {
    const json* v = find(name);
    if (v == nullptr) throw ConfigError(key(name), "required key is missing");
    return *v;
  }

  double number(std::string_view name, const json* v) {
    if (!v->is_number()) throw ConfigError(key(name), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(key(name), "must be finite");
    return x;
  }

  double number(std::string_view name, double fallback) {
    const json* v = find(name);
    return v == nullptr ? fallback : number(name, v);
  }

  double required_number(std::string_view name) { return number(name, &require(name)); }

  std::uint64_t unsigned_integer(std::string_view name, std::uint64_t fallback) {
    const json* v = find(name);
    if (v == nullptr) return fallback;
    if (!v->is_number_unsigned()) throw ConfigError(key(name), "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(std::string_view name, bool fallback) {
    const json* v = find(name);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ConfigError(key(name), "expected true or false");
    return v->get<bool>();
  }

  std::string string(std::string_view name, std::string fallback) {
    const json* v = find(name);
    if (v == nullptr) return fallback;
    if (!v->is_string()) throw ConfigError(key(name), "expected a string");
    return v->get<std::string>();
  }

  cplx complex(std::string_view name, cplx fallback) {
    const json* v = find(name);
    if (v == nullptr) return fallback;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      throw ConfigError(key(name), "expected [re, im]");
    }
    return {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  void finish() const {
    if (node_ == nullptr) return;
    for (const auto& item : node_->items()) {
      if (!seen_.contains(item.key())) throw ConfigError(key(item.key()), "unknown key");
    }
  }

 private:
  const json* node_ = nullptr;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

void check(bool ok, const Section& sec, std::string_view name, const char* what) {
  if (!ok) throw ConfigError(sec.key(name), what);
}

ModelParams parse_model(Section sec) {
  ModelParams m;
  m.kappa = sec.required_number("kappa");
  m.gamma_x = sec.required_number("gamma_x");
  m.r_scatter = sec.required_number("r_scatter");
  m.p_l = sec.required_number("p_l");
  m.p_r = sec.required_number("p_r");
  m.eta = sec.number("eta", 0.0);
  m.eps_l = sec.number("eps_l", 0.0);
  m.eps_r = sec.number("eps_r", 0.0);
  m.j_coupling = {sec.number("j_re", 1.0), sec.number("j_im", 0.0)};
  sec.finish();

  check(m.kappa > 0.0, sec, "kappa", "must be > 0");
  check(m.gamma_x > 0.0, sec, "gamma_x", "must be > 0");
  check(m.r_scatter > 0.0, sec, "r_scatter", "must be > 0");
  check(m.p_l >= 0.0, sec, "p_l", "must be >= 0");
  check(m.p_r >= 0.0, sec, "p_r", "must be >= 0");
  check(std::abs(m.j_coupling) > 0.0, sec, "j_re", "|J| must be > 0");
  return m;
}

IntegrationConfig parse_integration(Section sec) {
  IntegrationConfig c;
  c.dt = sec.number("dt", c.dt);
  c.t_end = sec.number("t_end", c.t_end);
  c.record_stride = sec.unsigned_integer("record_stride", c.record_stride);
  c.seed_amp_l = sec.complex("seed_amp_l", c.seed_amp_l);
  c.seed_amp_r = sec.complex("seed_amp_r", c.seed_amp_r);
  const std::string policy = sec.string("n0_policy", "pump_over_gamma");
  if (policy == "pump_over_gamma") {
    c.n0_policy = ReservoirInit::PumpOverGamma;
  } else if (policy == "explicit") {
    c.n0_policy = ReservoirInit::Explicit;
  } else {
    throw ConfigError(sec.key("n0_policy"), "expected \"pump_over_gamma\" or \"explicit\"");
  }
  c.n_l0 = sec.number("n_l0", 0.0);
  c.n_r0 = sec.number("n_r0", 0.0);
  c.divergence_bound = sec.number("divergence_bound", c.divergence_bound);
  sec.finish();

  check(c.dt > 0.0, sec, "dt", "must be > 0");
  check(c.t_end > 0.0, sec, "t_end", "must be > 0");
  check(c.record_stride >= 1, sec, "record_stride", "must be >= 1");
  check(c.n_l0 >= 0.0, sec, "n_l0", "must be >= 0");
  check(c.n_r0 >= 0.0, sec, "n_r0", "must be >= 0");
  check(c.divergence_bound > 0.0, sec, "divergence_bound", "must be > 0");
  return c;
}

NoiseConfig parse_noise(Section sec, double dt) {
  NoiseConfig n;
  n.enabled = sec.boolean("enabled", false);
  n.xi = sec.number("xi", 0.0);
  n.noise_dt = sec.number("noise_dt", dt);
  sec.finish();
  check(n.xi >= 0.0, sec, "xi", "must be >= 0");
  check(n.noise_dt > 0.0, sec, "noise_dt", "must be > 0");
  return n;
}

Well parse_well(Section& sec) {
  const std::string w = sec.string("well", "L");
  if (w == "L") return Well::Left;
  if (w == "R") return Well::Right;
  throw ConfigError(sec.key("well"), "expected \"L\" or \"R\"");
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [value, name] : kExperiments) {
    if (value == e) return name;
  }
  return "unknown";
}

Experiment experiment_from_string(std::string_view name) {
  for (const auto& [value, label] : kExperiments) {
    if (label == name) return value;
  }
  throw ConfigError("experiment", "unknown experiment \"" + std::string(name) + "\"");
}

bool is_sweepable(std::string_view name) {
  for (std::string_view k : kSweepable) {
    if (k == name) return true;
  }
  return false;
}

void set_model_field(ModelParams& m, std::string_view name, double value) {
  if (name == "eps_l") m.eps_l = value;
  else if (name == "eps_r") m.eps_r = value;
  else if (name == "eta") m.eta = value;
  else if (name == "kappa") m.kappa = value;
  else if (name == "gamma_x") m.gamma_x = value;
  else if (name == "r_scatter") m.r_scatter = value;
  else if (name == "j_re") m.j_coupling.real(value);
  else if (name == "p_l") m.p_l = value;
  else if (name == "p_r") m.p_r = value;
  else throw ConfigError("sweep.parameter", "cannot sweep \"" + std::string(name) + "\"");
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");
  Section root(doc, "");

  RunConfig cfg;
  cfg.experiment = experiment_from_string(root.string("experiment", "simulate"));
  cfg.out_dir = root.string("out_dir", cfg.out_dir.string());
  cfg.seed = root.unsigned_integer("seed", cfg.seed);

  const json* model = root.find("model");
  if (model == nullptr) throw ConfigError("model", "required section is missing");
  cfg.model = parse_model(Section(*model, "model"));

  const json null_node;
  const json* node = root.find("integration");
  cfg.integration = parse_integration(Section(node ? *node : null_node, "integration"));
  node = root.find("noise");
  cfg.noise = parse_noise(Section(node ? *node : null_node, "noise"), cfg.integration.dt);

  node = root.find("ensemble");
  {
    Section sec(node ? *node : null_node, "ensemble");
    cfg.ensemble.n_realizations = sec.unsigned_integer("n_realizations", 1000);
    cfg.ensemble.workers = static_cast<unsigned>(sec.unsigned_integer("workers", 0));
    sec.finish();
    check(cfg.ensemble.n_realizations >= 1, sec, "n_realizations", "must be >= 1");
  }

  node = root.find("correlation");
  {
    Section sec(node ? *node : null_node, "correlation");
    CorrelationSettings& c = cfg.correlation;
    c.t0 = sec.number("t0", c.t0);
    c.t_i = sec.number("t_i", c.t_i);
    c.window = sec.number("window", c.window);
    c.max_lag = sec.number("max_lag", c.max_lag);
    c.ergodicity_lag = sec.number("ergodicity_lag", c.ergodicity_lag);
    c.fit_floor = sec.number("fit_floor", c.fit_floor);
    c.envelope_window = sec.number("envelope_window", c.envelope_window);
    c.well = parse_well(sec);
    sec.finish();
    check(c.t0 >= 0.0, sec, "t0", "must be >= 0");
    check(c.t_i >= 0.0, sec, "t_i", "must be >= 0");
    check(c.max_lag > 0.0, sec, "max_lag", "must be > 0");
    check(c.window >= c.max_lag, sec, "window", "must be >= max_lag");
    check(c.ergodicity_lag > 0.0, sec, "ergodicity_lag", "must be > 0");
    check(c.fit_floor > 0.0 && c.fit_floor < 1.0, sec, "fit_floor", "must lie in (0, 1)");
    check(c.envelope_window >= 0.0, sec, "envelope_window", "must be >= 0");
  }

  node = root.find("spectrum");
  {
    Section sec(node ? *node : null_node, "spectrum");
    SpectrumSettings& s = cfg.spectrum;
    s.gamma_min = sec.number("gamma_min", s.gamma_min);
    s.gamma_max = sec.number("gamma_max", s.gamma_max);
    s.steps = sec.unsigned_integer("steps", s.steps);
    sec.finish();
    check(s.gamma_min < s.gamma_max, sec, "gamma_max", "must exceed gamma_min");
    check(s.steps >= 2, sec, "steps", "must be >= 2");
  }

  node = root.find("sweep");
  {
    Section sec(node ? *node : null_node, "sweep");
    SweepSettings& s = cfg.sweep;
    s.parameter = sec.string("parameter", s.parameter);
    s.min = sec.number("min", s.min);
    s.max = sec.number("max", s.max);
    s.steps = sec.unsigned_integer("steps", s.steps);
    sec.finish();
    check(is_sweepable(s.parameter), sec, "parameter", "not a sweepable model field");
    check(s.steps >= 1, sec, "steps", "must be >= 1");
    check(s.min <= s.max, sec, "max", "must be >= min");
  }
  root.finish();

  if (cfg.noise.enabled) {
    const double ratio = cfg.noise.noise_dt / cfg.integration.dt;
    if (ratio < 1.0 - 1e-12) throw ConfigError("noise.noise_dt", "must be >= integration.dt");
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      throw ConfigError("noise.noise_dt", "must be an integer multiple of integration.dt");
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string emit_config(const RunConfig& c) {
  auto pair = [](cplx z) { return ordered_json::array({z.real(), z.imag()}); };
  ordered_json doc;
  doc["experiment"] = std::string(to_string(c.experiment));
  doc["out_dir"] = c.out_dir.string();
  doc["seed"] = c.seed;
  doc["model"] = {
      {"kappa", c.model.kappa},     {"gamma_x", c.model.gamma_x},
      {"r_scatter", c.model.r_scatter}, {"p_l", c.model.p_l},
      {"p_r", c.model.p_r},         {"eta", c.model.eta},
      {"eps_l", c.model.eps_l},     {"eps_r", c.model.eps_r},
      {"j_re", c.model.j_coupling.real()}, {"j_im", c.model.j_coupling.imag()},
  };
  doc["integration"] = {
      {"dt", c.integration.dt},
      {"t_end", c.integration.t_end},
      {"record_stride", c.integration.record_stride},
      {"seed_amp_l", pair(c.integration.seed_amp_l)},
      {"seed_amp_r", pair(c.integration.seed_amp_r)},
      {"n0_policy",
       c.integration.n0_policy == ReservoirInit::Explicit ? "explicit" : "pump_over_gamma"},
      {"n_l0", c.integration.n_l0},
      {"n_r0", c.integration.n_r0},
      {"divergence_bound", c.integration.divergence_bound},
  };
  doc["noise"] = {
      {"enabled", c.noise.enabled}, {"xi", c.noise.xi}, {"noise_dt", c.noise.noise_dt}};
  doc["ensemble"] = {{"n_realizations", c.ensemble.n_realizations},
                     {"workers", c.ensemble.workers}};
  doc["correlation"] = {
      {"t0", c.correlation.t0},
      {"t_i", c.correlation.t_i},
      {"window", c.correlation.window},
      {"max_lag", c.correlation.max_lag},
      {"ergodicity_lag", c.correlation.ergodicity_lag},
      {"fit_floor", c.correlation.fit_floor},
      {"envelope_window", c.correlation.envelope_window},
      {"well", c.correlation.well == Well::Left ? "L" : "R"},
  };
  doc["spectrum"] = {{"gamma_min", c.spectrum.gamma_min},
                     {"gamma_max", c.spectrum.gamma_max},
                     {"steps", c.spectrum.steps}};
  doc["sweep"] = {{"parameter", c.sweep.parameter},
                  {"min", c.sweep.min},
                  {"max", c.sweep.max},
                  {"steps", c.sweep.steps}};
  return doc.dump(2) + "\n";
}

}  // namespace polariton
