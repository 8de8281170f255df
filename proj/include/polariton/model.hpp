#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace polariton {

using cplx = std::complex<double>;

/// Raised when an operation is called outside its documented domain.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical constants of the driven-dissipative double-well model.
///
/// Energies and rates are in units of the Josephson coupling magnitude |J|,
/// so with the default J = 1 time is measured in 1/J.
struct ModelParams {
  double eps_l = 0.0;      ///< single-particle energy, left well
  double eps_r = 0.0;      ///< single-particle energy, right well
  double eta = 0.0;        ///< Kerr nonlinearity
  double kappa = 10.0;     ///< polariton decay rate
  double gamma_x = 2.0;    ///< exciton reservoir decay rate
  double r_scatter = 0.02; ///< reservoir-to-condensate scattering rate
  cplx j_coupling{1.0, 0.0};
  double p_l = 0.0; ///< pump rate into the left reservoir
  double p_r = 0.0; ///< pump rate into the right reservoir

  /// Throws ContractError naming the first offending field.
  void validate() const;

  [[nodiscard]] bool real_coupling() const { return j_coupling.imag() == 0.0; }

  bool operator==(const ModelParams&) const = default;
};

struct SystemState {
  cplx psi_l{};
  cplx psi_r{};
  double n_l = 0.0;
  double n_r = 0.0;
  double t = 0.0;

  [[nodiscard]] double pop_l() const { return std::norm(psi_l); }
  [[nodiscard]] double pop_r() const { return std::norm(psi_r); }
  [[nodiscard]] bool finite() const;
};

/// Inter-well coherence theta = psi_l * conj(psi_r).
struct Coherence {
  cplx theta{};

  static Coherence of(const SystemState& s) { return {s.psi_l * std::conj(s.psi_r)}; }
};

struct StateDerivative {
  cplx d_psi_l{};
  cplx d_psi_r{};
  double d_n_l = 0.0;
  double d_n_r = 0.0;
};

/// Net amplification (positive) or decay (negative) of each mode.
struct GainRates {
  double left = 0.0;
  double right = 0.0;

  [[nodiscard]] double sum() const { return left + right; }
};

struct PopCoherenceRates {
  double d_pop_l = 0.0;
  double d_pop_r = 0.0;
  cplx d_theta{};
};

/// gamma = (R n - kappa) / 2 for each well.
GainRates gain_rates(double n_l, double n_r, const ModelParams& params);

/// Time derivative of the full model.
///
/// The model is written in the Schroedinger form i dpsi/dt = H psi; the value
/// returned here is dpsi/dt itself, i.e. -i times that right-hand side:
///
///   dpsi_l/dt = -i (eps_l + eta |psi_l|^2) psi_l + (R n_l - kappa)/2 psi_l + i J  psi_r
///   dpsi_r/dt = -i (eps_r + eta |psi_r|^2) psi_r + (R n_r - kappa)/2 psi_r + i J* psi_l
///   dn/dt     = P - Gamma n - R n |psi|^2
///
/// `eps_l` and `eps_r` replace the energies stored in `params`, so callers can
/// pass instantaneous (e.g. noisy) values.
StateDerivative rhs_full(const SystemState& state, const ModelParams& params, double eps_l,
                         double eps_r);

/// Right-hand sides of the population/coherence form of the model.
/// Only valid for real J; complex coupling throws ContractError.
PopCoherenceRates pop_coherence_rhs(double pop_l, double pop_r, Coherence theta, GainRates gains,
                                    const ModelParams& params);

/// R (n_l + n_r) - 2 kappa; zero exactly on the balanced gain/loss manifold.
double pt_residual(const SystemState& state, const ModelParams& params);

}  // namespace polariton
