#include "polariton/ensemble.hpp"

#include <atomic>
#include <exception>
#include <optional>
#include <string>
#include <thread>

namespace polariton {

namespace {

RealizationSeries to_series(const Trajectory& traj) {
  RealizationSeries out;
  const std::size_t n = traj.size();
  out.psi_l.resize(n);
  out.psi_r.resize(n);
  out.n_l.resize(n);
  out.n_r.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SystemState& s = traj.states[k];
    out.psi_l[k] = s.psi_l;
    out.psi_r[k] = s.psi_r;
    out.n_l[k] = s.n_l;
    out.n_r[k] = s.n_r;
  }
  return out;
}

struct Slot {
  RealizationSeries series;
  std::size_t clamps = 0;
  std::optional<std::string> error;
  double error_time = 0.0;
};

}  // namespace

void EnsembleConfig::validate() const {
  if (n_realizations < 1) throw ContractError("ensemble.n_realizations must be >= 1");
  params.validate();
  integration.validate(noise);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t z = base_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_realizations;
  const SystemState initial = initial_state(cfg.params, cfg.integration);

  std::vector<Slot> slots(n);
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t i = 0; i < n; ++i) seeds[i] = derive_seed(cfg.base_seed, i);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        Trajectory traj = integrate(initial, cfg.params, cfg.integration, cfg.noise, seeds[i]);
        slots[i].clamps = traj.warnings.clamps;
        slots[i].series = to_series(traj);
      } catch (const DivergenceError& e) {
        slots[i].error = e.what();
        slots[i].error_time = e.time();
      }
    }
  };

  unsigned workers = cfg.workers != 0 ? cfg.workers : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (workers > n) workers = static_cast<unsigned>(n);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i].error) {
      throw EnsembleError("realization " + std::to_string(i) + " diverged: " + *slots[i].error, i,
                          slots[i].error_time);
    }
  }

  EnsembleResult result;
  const std::size_t samples = slots.front().series.psi_l.size();
  result.times.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    result.times[k] = static_cast<double>(k * cfg.integration.record_stride) * cfg.integration.dt;
  }
  result.mean_pop_l.assign(samples, 0.0);
  result.mean_pop_r.assign(samples, 0.0);
  result.mean_n_l.assign(samples, 0.0);
  result.mean_n_r.assign(samples, 0.0);
  result.mean_theta.assign(samples, cplx{});

  for (std::size_t i = 0; i < n; ++i) {
    const RealizationSeries& s = slots[i].series;
    for (std::size_t k = 0; k < samples; ++k) {
      result.mean_pop_l[k] += std::norm(s.psi_l[k]);
      result.mean_pop_r[k] += std::norm(s.psi_r[k]);
      result.mean_n_l[k] += s.n_l[k];
      result.mean_n_r[k] += s.n_r[k];
      result.mean_theta[k] += s.psi_l[k] * std::conj(s.psi_r[k]);
    }
    result.clamps += slots[i].clamps;
  }
  const double count = static_cast<double>(n);
  for (std::size_t k = 0; k < samples; ++k) {
    result.mean_pop_l[k] /= count;
    result.mean_pop_r[k] /= count;
    result.mean_n_l[k] /= count;
    result.mean_n_r[k] /= count;
    result.mean_theta[k] /= count;
  }

  result.realizations.reserve(n);
  for (auto& slot : slots) result.realizations.push_back(std::move(slot.series));
  result.seeds_used = std::move(seeds);
  return result;
}

}  // namespace polariton
