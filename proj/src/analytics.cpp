#include "polariton/analytics.hpp"

#include <cmath>

namespace polariton {

double threshold_pump(const ModelParams& p) {
  return 2.0 * p.kappa * p.gamma_x / p.r_scatter;
}

double reservoir_quasi_steady(double pump, double pop, const ModelParams& p) {
  if (pop < 0.0) throw ContractError("reservoir_quasi_steady: pop must be >= 0");
  return pump / (p.gamma_x + p.r_scatter * pop);
}

SteadyStateSolution steady_state(const ModelParams& p) {
  p.validate();
  if (!p.real_coupling()) throw ContractError("steady_state: requires real J");
  if (p.eps_l != p.eps_r) throw ContractError("steady_state: requires eps_l == eps_r");

  const double total = p.p_l + p.p_r;
  const double diff = p.p_l - p.p_r;
  SteadyStateSolution s;
  if (total <= threshold_pump(p)) {
    s.n_l = reservoir_quasi_steady(p.p_l, 0.0, p);
    s.n_r = reservoir_quasi_steady(p.p_r, 0.0, p);
    return s;
  }

  const double j = p.j_coupling.real();
  const double k = p.kappa;
  const double radicand = 4.0 * j * j * total * total - k * k * diff * diff;
  if (radicand < 0.0) {
    throw SteadyStateError(
        "steady_state: pump imbalance too large for the coupling (balanced gain exceeds |J|)");
  }

  s.above_threshold = true;
  s.pop = total / (2.0 * k) - p.gamma_x / p.r_scatter;
  s.n_l = 2.0 * k * p.p_l / (p.r_scatter * total);
  s.n_r = 2.0 * k * p.p_r / (p.r_scatter * total);
  s.gamma = k * diff / (2.0 * total);
  s.im_theta = k * p.gamma_x * diff / (2.0 * p.r_scatter * j * total) - diff / (4.0 * j);
  const double prefactor = (total - threshold_pump(p)) / (4.0 * j * k * total);
  s.re_theta = std::abs(prefactor * std::sqrt(radicand));
  return s;
}

double below_threshold_decay_rate(const ModelParams& p) {
  const double total = p.p_l + p.p_r;
  if (total > threshold_pump(p)) {
    throw ContractError("below_threshold_decay_rate: pumping is above threshold");
  }
  return p.r_scatter / (2.0 * p.gamma_x) * total - p.kappa;
}

}  // namespace polariton
