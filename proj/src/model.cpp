#include "polariton/model.hpp"

#include <cmath>

namespace polariton {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ContractError("invalid model parameter '" + field + "': " + what);
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(eps_l), "eps_l", "must be finite");
  require(std::isfinite(eps_r), "eps_r", "must be finite");
  require(std::isfinite(eta), "eta", "must be finite");
  require(kappa > 0.0 && std::isfinite(kappa), "kappa", "must be > 0");
  require(gamma_x > 0.0 && std::isfinite(gamma_x), "gamma_x", "must be > 0");
  require(r_scatter > 0.0 && std::isfinite(r_scatter), "r_scatter", "must be > 0");
  require(std::abs(j_coupling) > 0.0 && std::isfinite(std::abs(j_coupling)), "j_coupling",
          "|J| must be > 0");
  require(p_l >= 0.0 && std::isfinite(p_l), "p_l", "must be >= 0");
  require(p_r >= 0.0 && std::isfinite(p_r), "p_r", "must be >= 0");
}

bool SystemState::finite() const {
  return std::isfinite(psi_l.real()) && std::isfinite(psi_l.imag()) &&
         std::isfinite(psi_r.real()) && std::isfinite(psi_r.imag()) && std::isfinite(n_l) &&
         std::isfinite(n_r);
}

GainRates gain_rates(double n_l, double n_r, const ModelParams& params) {
  return {0.5 * (params.r_scatter * n_l - params.kappa),
          0.5 * (params.r_scatter * n_r - params.kappa)};
}

StateDerivative rhs_full(const SystemState& s, const ModelParams& p, double eps_l, double eps_r) {
  const double pop_l = s.pop_l();
  const double pop_r = s.pop_r();
  const GainRates g = gain_rates(s.n_l, s.n_r, p);
  const cplx i{0.0, 1.0};

  // -i E psi + gamma psi = (gamma - i E) psi
  const cplx self_l{g.left, -(eps_l + p.eta * pop_l)};
  const cplx self_r{g.right, -(eps_r + p.eta * pop_r)};

  StateDerivative d;
  d.d_psi_l = self_l * s.psi_l + i * p.j_coupling * s.psi_r;
  d.d_psi_r = self_r * s.psi_r + i * std::conj(p.j_coupling) * s.psi_l;
  d.d_n_l = p.p_l - p.gamma_x * s.n_l - p.r_scatter * s.n_l * pop_l;
  d.d_n_r = p.p_r - p.gamma_x * s.n_r - p.r_scatter * s.n_r * pop_r;
  return d;
}

PopCoherenceRates pop_coherence_rhs(double pop_l, double pop_r, Coherence theta, GainRates gains,
                                    const ModelParams& p) {
  if (!p.real_coupling()) {
    throw ContractError("pop_coherence_rhs: population/coherence form requires real J");
  }
  if (pop_l < 0.0 || pop_r < 0.0) {
    throw ContractError("pop_coherence_rhs: populations must be non-negative");
  }
  const double j = p.j_coupling.real();
  const double im_theta = theta.theta.imag();
  const double detuning = p.eps_l - p.eps_r + p.eta * (pop_l - pop_r);
  const cplx i{0.0, 1.0};

  PopCoherenceRates r;
  r.d_pop_l = 2.0 * gains.left * pop_l + 2.0 * j * im_theta;
  r.d_pop_r = 2.0 * gains.right * pop_r - 2.0 * j * im_theta;
  r.d_theta = -i * detuning * theta.theta + gains.sum() * theta.theta - i * j * (pop_l - pop_r);
  return r;
}

double pt_residual(const SystemState& s, const ModelParams& p) {
  return p.r_scatter * (s.n_l + s.n_r) - 2.0 * p.kappa;
}

}  // namespace polariton
