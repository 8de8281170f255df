#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "polariton/model.hpp"

namespace polariton {

/// Population blow-up or loss of finiteness during integration.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  [[nodiscard]] double time() const { return time_; }

 private:
  double time_;
};

/// Stochastic fluctuations of the single-particle energies.
///
/// Each well's energy is an independent Gaussian with zero mean and variance
/// 2 xi / noise_dt, redrawn every noise_dt and held constant in between.
struct NoiseConfig {
  double xi = 0.0;
  double noise_dt = 1e-3;
  bool enabled = false;

  [[nodiscard]] double sigma() const;
  [[nodiscard]] bool active() const { return enabled && xi > 0.0; }
  void validate() const;

  bool operator==(const NoiseConfig&) const = default;
};

enum class ReservoirInit { PumpOverGamma, Explicit };

struct IntegrationConfig {
  double dt = 1e-3;
  double t_end = 100.0;
  std::size_t record_stride = 100;
  cplx seed_amp_l{0.1, 0.0};
  cplx seed_amp_r{0.1, 0.0};
  ReservoirInit n0_policy = ReservoirInit::PumpOverGamma;
  double n_l0 = 0.0;  ///< used with ReservoirInit::Explicit
  double n_r0 = 0.0;
  double divergence_bound = 1e12;

  void validate() const;
  void validate(const NoiseConfig& noise) const;
  [[nodiscard]] std::size_t total_steps() const;
  [[nodiscard]] double record_interval() const { return dt * static_cast<double>(record_stride); }

  bool operator==(const IntegrationConfig&) const = default;
};

struct TrajectoryWarnings {
  std::size_t clamps = 0;  ///< times a reservoir population was clamped at zero
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SystemState> states;
  /// Running integral of (gamma_l + gamma_r) from t = 0, sampled with `states`.
  std::vector<double> gain_integral;
  std::uint64_t rng_seed = 0;
  TrajectoryWarnings warnings;

  [[nodiscard]] std::size_t size() const { return states.size(); }
};

/// Seeded Gaussian source with a platform-independent bit stream.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : engine_(seed) {}

  /// Standard normal variate (Box-Muller on 53-bit uniforms).
  double gaussian();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct NoiseSample {
  double eps_l = 0.0;
  double eps_r = 0.0;
};

NoiseSample sample_noise(NoiseStream& rng, const NoiseConfig& noise);

/// One RK4 step of the full model using the energies stored in `params`,
/// followed by the exact phase rotation psi <- psi exp(-i eps dt) for the
/// noise energies. Throws DivergenceError once a population exceeds `bound`.
SystemState step(const SystemState& state, const ModelParams& params, double dt, double eps_l,
                 double eps_r, double bound = 1e12);

/// Initial condition from the seed amplitudes and the reservoir policy.
SystemState initial_state(const ModelParams& params, const IntegrationConfig& cfg);

Trajectory integrate(const SystemState& initial, const ModelParams& params,
                     const IntegrationConfig& cfg, const NoiseConfig& noise, std::uint64_t seed);

}  // namespace polariton
