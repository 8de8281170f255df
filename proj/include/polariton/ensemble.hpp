#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "polariton/integrator.hpp"

namespace polariton {

struct EnsembleConfig {
  std::size_t n_realizations = 1000;
  std::uint64_t base_seed = 1;
  ModelParams params;
  IntegrationConfig integration;
  NoiseConfig noise;
  unsigned workers = 0;  ///< 0 selects std::thread::hardware_concurrency()

  void validate() const;
};

/// Recorded fields of one realization, at record_stride resolution.
struct RealizationSeries {
  std::vector<cplx> psi_l;
  std::vector<cplx> psi_r;
  std::vector<double> n_l;
  std::vector<double> n_r;
};

struct EnsembleResult {
  std::vector<double> times;
  std::vector<double> mean_pop_l;
  std::vector<double> mean_pop_r;
  std::vector<double> mean_n_l;
  std::vector<double> mean_n_r;
  std::vector<cplx> mean_theta;
  std::vector<RealizationSeries> realizations;
  std::vector<std::uint64_t> seeds_used;
  std::size_t clamps = 0;

  [[nodiscard]] std::size_t size() const { return realizations.size(); }
};

/// A realization diverged; carries the lowest failing index.
class EnsembleError : public std::runtime_error {
 public:
  EnsembleError(const std::string& what, std::size_t index, double time)
      : std::runtime_error(what), index_(index), time_(time) {}

  [[nodiscard]] std::size_t index() const { return index_; }
  [[nodiscard]] double time() const { return time_; }

 private:
  std::size_t index_;
  double time_;
};

/// Stateless per-realization seed: SplitMix64 finalizer applied to
/// base + (index + 1) * 0x9E3779B97F4A7C15. Both steps are bijections on
/// 64-bit integers, so the map is injective in `index` for a fixed base.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

/// Runs all realizations (in parallel when workers > 1) and reduces them in
/// index order, so the result does not depend on the worker count.
EnsembleResult run_ensemble(const EnsembleConfig& cfg);

}  // namespace polariton
