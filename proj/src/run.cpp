#include "polariton/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "polariton/analytics.hpp"
#include "polariton/correlation.hpp"
#include "polariton/ensemble.hpp"
#include "polariton/io.hpp"
#include "polariton/spectral.hpp"

namespace polariton {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

ordered_json quantity(double value, std::string_view unit) {
  ordered_json q;
  if (std::isfinite(value)) {
    q["value"] = value;
  } else {
    q["value"] = nullptr;
  }
  q["unit"] = unit;
  return q;
}

constexpr std::string_view kRate = "J";
constexpr std::string_view kTime = "1/J";
constexpr std::string_view kNumber = "dimensionless";

class Outputs {
 public:
  Outputs(fs::path dir, RunResult& result) : dir_(std::move(dir)), result_(result) {}

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    result_.outputs.emplace_back(name);
    return out;
  }

  void json(const std::string& name, const ordered_json& doc) {
    open(name) << doc.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  RunResult& result_;
};

EnsembleConfig ensemble_config(const RunConfig& cfg, double t_end) {
  EnsembleConfig e;
  e.n_realizations = cfg.ensemble.n_realizations;
  e.base_seed = cfg.seed;
  e.params = cfg.model;
  e.integration = cfg.integration;
  e.integration.t_end = t_end;
  e.noise = cfg.noise;
  e.workers = cfg.ensemble.workers;
  return e;
}

ordered_json state_json(const SystemState& s, const ModelParams& p) {
  const cplx theta = Coherence::of(s).theta;
  return {
      {"t", quantity(s.t, kTime)},
      {"pop_l", quantity(s.pop_l(), kNumber)},
      {"pop_r", quantity(s.pop_r(), kNumber)},
      {"n_l", quantity(s.n_l, kNumber)},
      {"n_r", quantity(s.n_r, kNumber)},
      {"re_theta", quantity(theta.real(), kNumber)},
      {"im_theta", quantity(theta.imag(), kNumber)},
      {"pt_residual", quantity(pt_residual(s, p), kRate)},
  };
}

ordered_json fit_json(const CorrelationSeries& series, const CorrelationSettings& c) {
  try {
    const DecayFit fit = fit_decay(series, c.fit_floor, c.envelope_window);
    return {{"rate", quantity(fit.rate, kRate)},
            {"r_squared", fit.r_squared},
            {"points", fit.points},
            {"fit_floor", c.fit_floor},
            {"envelope_window", quantity(c.envelope_window, kTime)}};
  } catch (const ContractError& e) {
    return {{"rate", nullptr}, {"error", e.what()}};
  }
}

void run_simulate(const RunConfig& cfg, Outputs& out, ordered_json& summary) {
  const Trajectory traj = integrate(initial_state(cfg.model, cfg.integration), cfg.model,
                                    cfg.integration, cfg.noise, cfg.seed);
  auto file = out.open("trajectory.dat");
  io::write_trajectory(file, traj);
  summary["samples"] = traj.size();
  summary["initial"] = state_json(traj.states.front(), cfg.model);
  summary["final"] = state_json(traj.states.back(), cfg.model);
  summary["gain_integral"] = quantity(traj.gain_integral.back(), kNumber);
  summary["reservoir_clamps"] = traj.warnings.clamps;
}

void run_ensemble_cmd(const RunConfig& cfg, Outputs& out, ordered_json& summary,
                      std::ostream& log) {
  const EnsembleResult r = run_ensemble(ensemble_config(cfg, cfg.integration.t_end));
  {
    auto file = out.open("ensemble_mean.dat");
    io::write_ensemble_means(file, r, cfg.model);
  }
  summary["realizations"] = r.size();
  summary["reservoir_clamps"] = r.clamps;
  summary["seeds_used"] = r.seeds_used;
  if (r.size() >= 2 && cfg.correlation.t0 <= r.times.back()) {
    for (Well w : {Well::Left, Well::Right}) {
      const CorrelationSeries g = g1_ensemble(r, cfg.correlation.t0, w, cfg.correlation.max_lag);
      const std::string tag = w == Well::Left ? "L" : "R";
      auto file = out.open("g1_ensemble_" + tag + ".dat");
      io::write_correlation(file, g);
      summary["g1_fit_" + tag] = fit_json(g, cfg.correlation);
    }
  } else {
    log << "ensemble: skipping g1 (needs >= 2 realizations and t0 inside the run)\n";
  }
}

void run_steady(const RunConfig& cfg, Outputs& out, ordered_json& summary) {
  const SteadyStateSolution s = steady_state(cfg.model);
  ordered_json doc;
  doc["threshold_pump"] = quantity(threshold_pump(cfg.model), kRate);
  doc["total_pump"] = quantity(cfg.model.p_l + cfg.model.p_r, kRate);
  doc["above_threshold"] = s.above_threshold;
  doc["pop"] = quantity(s.pop, kNumber);
  doc["n_l"] = quantity(s.n_l, kNumber);
  doc["n_r"] = quantity(s.n_r, kNumber);
  doc["n_total"] = quantity(s.n_l + s.n_r, kNumber);
  doc["gamma"] = quantity(s.gamma, kRate);
  doc["im_theta"] = quantity(s.im_theta, kNumber);
  doc["re_theta"] = quantity(s.re_theta, kNumber);
  if (!s.above_threshold) {
    doc["below_threshold_decay_rate"] = quantity(below_threshold_decay_rate(cfg.model), kRate);
  }
  out.json("steady.json", doc);
  summary["above_threshold"] = s.above_threshold;
}

void run_spectrum(const RunConfig& cfg, Outputs& out, ordered_json& summary) {
  const SpectrumSettings& sp = cfg.spectrum;
  const auto rows = bifurcation_scan(sp.gamma_min, sp.gamma_max, sp.steps, cfg.model.j_coupling);
  auto file = out.open("spectrum.dat");
  io::write_spectrum(file, rows, cfg.model.j_coupling);
  summary["rows"] = rows.size();
  summary["exceptional_point_gamma"] = quantity(std::abs(cfg.model.j_coupling), kRate);
}

void run_correlate(const RunConfig& cfg, Outputs& out, ordered_json& summary) {
  const CorrelationSettings& c = cfg.correlation;
  const double ens_end = std::max(cfg.integration.t_end, c.t0 + c.max_lag);
  const EnsembleResult r = run_ensemble(ensemble_config(cfg, ens_end));
  const CorrelationSeries ens = g1_ensemble(r, c.t0, c.well, c.max_lag);

  IntegrationConfig long_run = cfg.integration;
  long_run.t_end = c.t_i + c.window + c.max_lag;
  const Trajectory traj =
      integrate(initial_state(cfg.model, long_run), cfg.model, long_run, cfg.noise, cfg.seed);
  const CorrelationSeries avg = g1_time_avg(traj, c.t_i, c.t_i + c.window, c.max_lag, c.well);

  {
    auto file = out.open("g1_ensemble.dat");
    io::write_correlation(file, ens);
  }
  {
    auto file = out.open("g1_time_avg.dat");
    io::write_correlation(file, avg);
  }
  summary["well"] = c.well == Well::Left ? "L" : "R";
  summary["ensemble"] = {{"realizations", r.size()},
                         {"t0", quantity(c.t0, kTime)},
                         {"fit", fit_json(ens, c)}};
  summary["time_averaged"] = {{"t_i", quantity(c.t_i, kTime)},
                              {"t_f", quantity(c.t_i + c.window, kTime)},
                              {"fit", fit_json(avg, c)}};
  summary["ergodicity_metric"] = {
      {"lag_max", quantity(c.ergodicity_lag, kTime)},
      {"value", ergodicity_metric(ens, avg, c.ergodicity_lag)}};
}

void run_sweep(const RunConfig& cfg, Outputs& out, ordered_json& summary) {
  const SweepSettings& sw = cfg.sweep;
  auto file = out.open("sweep.dat");
  file << sw.parameter
       << " threshold_pump above_threshold pop n_l n_r gamma im_theta re_theta defined\n";
  const double nan = std::nan("");
  std::size_t undefined = 0;
  for (std::size_t k = 0; k < sw.steps; ++k) {
    const double value =
        sw.steps == 1 ? sw.min
                      : sw.min + (sw.max - sw.min) * static_cast<double>(k) /
                                     static_cast<double>(sw.steps - 1);
    ModelParams p = cfg.model;
    set_model_field(p, sw.parameter, value);
    try {
      p.validate();
    } catch (const ContractError& e) {
      throw ConfigError("sweep", "value " + io::format_double(value) + " is invalid: " + e.what());
    }
    SteadyStateSolution s;
    bool defined = true;
    try {
      s = steady_state(p);
    } catch (const SteadyStateError&) {
      defined = false;
      ++undefined;
      s = {nan, nan, nan, nan, nan, nan, true};
    }
    for (double v : {value, threshold_pump(p), s.above_threshold ? 1.0 : 0.0, s.pop, s.n_l, s.n_r,
                     s.gamma, s.im_theta}) {
      file << io::format_double(v) << ' ';
    }
    file << io::format_double(s.re_theta) << ' ' << (defined ? 1 : 0) << '\n';
  }
  summary["rows"] = sw.steps;
  summary["undefined_rows"] = undefined;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

RunResult run_command(const RunConfig& cfg, std::ostream& log) {
  RunResult result;
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = utc_timestamp();

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    result.status = kExitValidation;
    result.error = "cannot create output directory " + cfg.out_dir.string() + ": " + ec.message();
    log << "error: " << result.error << '\n';
    return result;
  }
  io::write_text(cfg.out_dir / "config.json", emit_config(cfg));

  Outputs out(cfg.out_dir, result);
  ordered_json summary;
  summary["experiment"] = to_string(cfg.experiment);
  ordered_json error;
  try {
    switch (cfg.experiment) {
      case Experiment::Simulate: run_simulate(cfg, out, summary); break;
      case Experiment::Ensemble: run_ensemble_cmd(cfg, out, summary, log); break;
      case Experiment::Steady: run_steady(cfg, out, summary); break;
      case Experiment::Spectrum: run_spectrum(cfg, out, summary); break;
      case Experiment::Correlate: run_correlate(cfg, out, summary); break;
      case Experiment::Sweep: run_sweep(cfg, out, summary); break;
    }
  } catch (const ConfigError& e) {
    result.status = kExitValidation;
    error = {{"kind", "validation"}, {"key", e.key()}, {"message", e.what()}};
  } catch (const ContractError& e) {
    result.status = kExitValidation;
    error = {{"kind", "validation"}, {"message", e.what()}};
  } catch (const EnsembleError& e) {
    result.status = kExitNumerical;
    error = {{"kind", "divergence"},
             {"message", e.what()},
             {"realization", e.index()},
             {"time", e.time()}};
  } catch (const DivergenceError& e) {
    result.status = kExitNumerical;
    error = {{"kind", "divergence"}, {"message", e.what()}, {"time", e.time()}};
  } catch (const SteadyStateError& e) {
    result.status = kExitNumerical;
    error = {{"kind", "steady_state_undefined"}, {"message", e.what()}};
  }

  if (result.status != kExitOk) {
    error["status"] = result.status;
    result.error = error["message"].get<std::string>();
    result.outputs.clear();
    io::write_text(cfg.out_dir / "error.json", error.dump(2) + "\n");
    log << "error: " << result.error << '\n';
  } else {
    io::write_text(cfg.out_dir / "summary.json", summary.dump(2) + "\n");
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["experiment"] = to_string(cfg.experiment);
  manifest["seed"] = cfg.seed;
  manifest["workers"] = cfg.ensemble.workers;
  manifest["started_at"] = started_at;
  manifest["elapsed_seconds"] = elapsed;
  manifest["status"] = result.status;
  ordered_json files = ordered_json::array();
  for (const auto& f : result.outputs) files.push_back(f.string());
  manifest["outputs"] = files;
  io::write_text(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace polariton
