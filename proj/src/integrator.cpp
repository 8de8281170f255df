#include "polariton/integrator.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace polariton {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Advance {
  SystemState state;
  double gain_increment = 0.0;
};

SystemState shifted(const SystemState& s, const StateDerivative& d, double h) {
  SystemState out = s;
  out.psi_l += h * d.d_psi_l;
  out.psi_r += h * d.d_psi_r;
  out.n_l += h * d.d_n_l;
  out.n_r += h * d.d_n_r;
  return out;
}

double gain_sum(const SystemState& s, const ModelParams& p) {
  return 0.5 * p.r_scatter * (s.n_l + s.n_r) - p.kappa;
}

// Classical RK4. The integral of gamma_l + gamma_r rides along as an extra
// component evaluated at the same stage points.
Advance rk4(const SystemState& s, const ModelParams& p, double dt) {
  const double half = 0.5 * dt;
  const StateDerivative k1 = rhs_full(s, p, p.eps_l, p.eps_r);
  const SystemState s2 = shifted(s, k1, half);
  const StateDerivative k2 = rhs_full(s2, p, p.eps_l, p.eps_r);
  const SystemState s3 = shifted(s, k2, half);
  const StateDerivative k3 = rhs_full(s3, p, p.eps_l, p.eps_r);
  const SystemState s4 = shifted(s, k3, dt);
  const StateDerivative k4 = rhs_full(s4, p, p.eps_l, p.eps_r);

  const double w = dt / 6.0;
  Advance a;
  a.state = s;
  a.state.psi_l += w * (k1.d_psi_l + 2.0 * k2.d_psi_l + 2.0 * k3.d_psi_l + k4.d_psi_l);
  a.state.psi_r += w * (k1.d_psi_r + 2.0 * k2.d_psi_r + 2.0 * k3.d_psi_r + k4.d_psi_r);
  a.state.n_l += w * (k1.d_n_l + 2.0 * k2.d_n_l + 2.0 * k3.d_n_l + k4.d_n_l);
  a.state.n_r += w * (k1.d_n_r + 2.0 * k2.d_n_r + 2.0 * k3.d_n_r + k4.d_n_r);
  a.state.t = s.t + dt;
  a.gain_increment =
      w * (gain_sum(s, p) + 2.0 * gain_sum(s2, p) + 2.0 * gain_sum(s3, p) + gain_sum(s4, p));
  return a;
}

void check_bounds(const SystemState& s, double bound) {
  if (!s.finite()) {
    throw DivergenceError("state became non-finite at t = " + std::to_string(s.t), s.t);
  }
  if (s.pop_l() > bound || s.pop_r() > bound || s.n_l > bound || s.n_r > bound) {
    throw DivergenceError("population exceeded " + std::to_string(bound) +
                              " at t = " + std::to_string(s.t),
                          s.t);
  }
}

}  // namespace

double NoiseConfig::sigma() const { return std::sqrt(2.0 * xi / noise_dt); }

void NoiseConfig::validate() const {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw ContractError("noise.xi must be >= 0");
  if (!(noise_dt > 0.0) || !std::isfinite(noise_dt)) {
    throw ContractError("noise.noise_dt must be > 0");
  }
}

void IntegrationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractError("integration.dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ContractError("integration.t_end must be > 0");
  }
  if (record_stride < 1) throw ContractError("integration.record_stride must be >= 1");
  if (!(divergence_bound > 0.0)) throw ContractError("integration.divergence_bound must be > 0");
  if (n0_policy == ReservoirInit::Explicit && (n_l0 < 0.0 || n_r0 < 0.0)) {
    throw ContractError("integration.n0 explicit reservoir populations must be >= 0");
  }
}

void IntegrationConfig::validate(const NoiseConfig& noise) const {
  validate();
  noise.validate();
  if (noise.enabled) {
    if (dt > noise.noise_dt * (1.0 + 1e-12)) {
      throw ContractError("integration.dt must not exceed noise.noise_dt");
    }
    const double ratio = noise.noise_dt / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      throw ContractError("noise.noise_dt must be an integer multiple of integration.dt");
    }
  }
}

std::size_t IntegrationConfig::total_steps() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

double NoiseStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double kScale = 0x1.0p-53;
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kScale;  // (0, 1]
  const double u2 = static_cast<double>(engine_() >> 11) * kScale;          // [0, 1)
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return radius * std::cos(kTwoPi * u2);
}

NoiseSample sample_noise(NoiseStream& rng, const NoiseConfig& noise) {
  if (!noise.enabled) throw ContractError("sample_noise: noise is disabled");
  if (noise.xi == 0.0) return {};
  const double sigma = noise.sigma();
  NoiseSample out;
  out.eps_l = sigma * rng.gaussian();
  out.eps_r = sigma * rng.gaussian();
  return out;
}

SystemState step(const SystemState& state, const ModelParams& params, double dt, double eps_l,
                 double eps_r, double bound) {
  if (!(dt > 0.0)) throw ContractError("step: dt must be > 0");
  SystemState next = rk4(state, params, dt).state;
  if (eps_l != 0.0) next.psi_l *= cplx{std::cos(eps_l * dt), -std::sin(eps_l * dt)};
  if (eps_r != 0.0) next.psi_r *= cplx{std::cos(eps_r * dt), -std::sin(eps_r * dt)};
  check_bounds(next, bound);
  return next;
}

SystemState initial_state(const ModelParams& params, const IntegrationConfig& cfg) {
  SystemState s;
  s.psi_l = cfg.seed_amp_l;
  s.psi_r = cfg.seed_amp_r;
  if (cfg.n0_policy == ReservoirInit::PumpOverGamma) {
    s.n_l = params.p_l / params.gamma_x;
    s.n_r = params.p_r / params.gamma_x;
  } else {
    s.n_l = cfg.n_l0;
    s.n_r = cfg.n_r0;
  }
  s.t = 0.0;
  return s;
}

Trajectory integrate(const SystemState& initial, const ModelParams& params,
                     const IntegrationConfig& cfg, const NoiseConfig& noise, std::uint64_t seed) {
  params.validate();
  cfg.validate(noise);
  if (!initial.finite()) throw ContractError("integrate: initial state is not finite");

  const std::size_t n_steps = cfg.total_steps();
  const bool stochastic = noise.active();
  const std::size_t hold_steps =
      noise.enabled ? static_cast<std::size_t>(std::llround(noise.noise_dt / cfg.dt)) : 1;

  Trajectory traj;
  traj.rng_seed = seed;
  const std::size_t n_records = n_steps / cfg.record_stride + 1;
  traj.times.reserve(n_records);
  traj.states.reserve(n_records);
  traj.gain_integral.reserve(n_records);

  NoiseStream rng(seed);
  SystemState s = initial;
  s.t = 0.0;
  double gain_integral = 0.0;
  traj.times.push_back(0.0);
  traj.states.push_back(s);
  traj.gain_integral.push_back(0.0);

  cplx rot_l{1.0, 0.0};
  cplx rot_r{1.0, 0.0};
  NoiseSample eps;

  for (std::size_t k = 1; k <= n_steps; ++k) {
    if (stochastic && (k - 1) % hold_steps == 0) {
      eps = sample_noise(rng, noise);
      rot_l = cplx{std::cos(eps.eps_l * cfg.dt), -std::sin(eps.eps_l * cfg.dt)};
      rot_r = cplx{std::cos(eps.eps_r * cfg.dt), -std::sin(eps.eps_r * cfg.dt)};
    }

    Advance a = rk4(s, params, cfg.dt);
    s = a.state;
    s.t = static_cast<double>(k) * cfg.dt;
    gain_integral += a.gain_increment;
    if (stochastic) {
      s.psi_l *= rot_l;
      s.psi_r *= rot_r;
    }
    if (s.n_l < 0.0) {
      s.n_l = 0.0;
      ++traj.warnings.clamps;
    }
    if (s.n_r < 0.0) {
      s.n_r = 0.0;
      ++traj.warnings.clamps;
    }
    check_bounds(s, cfg.divergence_bound);

    if (k % cfg.record_stride == 0) {
      traj.times.push_back(s.t);
      traj.states.push_back(s);
      traj.gain_integral.push_back(gain_integral);
    }
  }
  return traj;
}

}  // namespace polariton
