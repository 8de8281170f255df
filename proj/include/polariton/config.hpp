#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "polariton/correlation.hpp"
#include "polariton/integrator.hpp"
#include "polariton/model.hpp"

namespace polariton {

/// Invalid configuration document; `key()` is the dotted path of the culprit.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Experiment { Simulate, Ensemble, Steady, Spectrum, Correlate, Sweep };

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view name);

struct EnsembleSettings {
  std::size_t n_realizations = 1000;
  unsigned workers = 0;

  bool operator==(const EnsembleSettings&) const = default;
};

struct CorrelationSettings {
  double t0 = 50.0;      ///< ensemble reference time
  double t_i = 50.0;     ///< start of the time-averaging window
  double window = 3000.0;
  double max_lag = 100.0;
  double ergodicity_lag = 50.0;
  double fit_floor = 0.05;
  double envelope_window = 0.0;
  Well well = Well::Left;

  bool operator==(const CorrelationSettings&) const = default;
};

struct SpectrumSettings {
  double gamma_min = 0.0;
  double gamma_max = 2.0;
  std::size_t steps = 201;

  bool operator==(const SpectrumSettings&) const = default;
};

struct SweepSettings {
  std::string parameter = "p_l";
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 11;

  bool operator==(const SweepSettings&) const = default;
};

/// Fully validated run description. Units: J = 1, times in 1/J.
struct RunConfig {
  Experiment experiment = Experiment::Simulate;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;
  ModelParams model;
  IntegrationConfig integration;
  NoiseConfig noise;
  EnsembleSettings ensemble;
  CorrelationSettings correlation;
  SpectrumSettings spectrum;
  SweepSettings sweep;

  bool operator==(const RunConfig&) const = default;
};

/// Parses a JSON configuration document. model.kappa, model.gamma_x,
/// model.r_scatter, model.p_l and model.p_r are required; everything else
/// has a default. Unknown keys and invalid values raise ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Effective configuration as JSON; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

/// Names accepted by sweep.parameter.
bool is_sweepable(std::string_view name);
void set_model_field(ModelParams& params, std::string_view name, double value);

}  // namespace polariton
