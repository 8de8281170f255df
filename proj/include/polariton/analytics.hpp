#pragma once

#include <stdexcept>

#include "polariton/model.hpp"

namespace polariton {

/// The steady coherence is undefined: the pump imbalance puts the balanced
/// gain/loss rate beyond |J|.
class SteadyStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Closed-form fixed point of the pumped double well.
struct SteadyStateSolution {
  double pop = 0.0;  ///< common |psi_l|^2 = |psi_r|^2
  double n_l = 0.0;
  double n_r = 0.0;
  double gamma = 0.0;  ///< gamma_l = -gamma_r
  double im_theta = 0.0;
  double re_theta = 0.0;  ///< non-negative branch
  bool above_threshold = false;
};

/// Total pump 2 kappa Gamma / R at which the condensate starts to form.
double threshold_pump(const ModelParams& params);

/// Stationary reservoir population P / (Gamma + R pop).
double reservoir_quasi_steady(double pump, double pop, const ModelParams& params);

/// Fixed point for degenerate wells and real J.
///
/// Above threshold:
///   pop      = (P_l + P_r) / (2 kappa) - Gamma / R
///   n_{l,r}  = 2 kappa P_{l,r} / (R (P_l + P_r))
///   gamma    = kappa (P_l - P_r) / (2 (P_l + P_r))
///   Im theta = kappa Gamma (P_l - P_r) / (2 R J (P_l + P_r)) - (P_l - P_r) / (4 J)
///   Re theta = D sqrt(4 J^2 (P_l + P_r)^2 - kappa^2 (P_l - P_r)^2),
///   D        = (P_l + P_r - 2 kappa Gamma / R) / (4 J kappa (P_l + P_r)).
///
/// The kappa in D is what makes |theta| equal pop. Below threshold the
/// condensate is empty and the reservoirs sit at P / Gamma.
///
/// Throws SteadyStateError when the radicand is negative, ContractError for
/// complex J or detuned wells.
SteadyStateSolution steady_state(const ModelParams& params);

/// Net seed decay rate (R / 2 Gamma)(P_l + P_r) - kappa, valid at or below
/// threshold. Throws ContractError above threshold.
double below_threshold_decay_rate(const ModelParams& params);

}  // namespace polariton
