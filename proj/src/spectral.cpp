#include "polariton/spectral.hpp"

#include <cmath>

namespace polariton {

namespace {

Vec2 normalized(Vec2 v) {
  const double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  const std::size_t k = std::abs(v[0]) > 0.0 ? 0 : 1;
  // Unit length, leading component on the positive real axis.
  const cplx scale = std::conj(v[k]) / (std::abs(v[k]) * norm);
  v[1 - k] *= scale;
  v[k] = std::abs(v[k]) / norm;
  return v;
}

}  // namespace

TwoModeHamiltonian TwoModeHamiltonian::make(double gamma, cplx j) {
  TwoModeHamiltonian h;
  h.gamma = gamma;
  h.j_coupling = j;
  h.entries = {{{cplx{0.0, gamma}, -j}, {-std::conj(j), cplx{0.0, -gamma}}}};
  return h;
}

Vec2 TwoModeHamiltonian::apply(const Vec2& v) const {
  return {entries[0][0] * v[0] + entries[0][1] * v[1],
          entries[1][0] * v[0] + entries[1][1] * v[1]};
}

cplx TwoModeHamiltonian::determinant() const {
  return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
}

Eigensystem eigensystem(double gamma, cplx j) {
  if (!(std::abs(j) > 0.0)) throw ContractError("eigensystem: |J| must be > 0");
  const double radicand = std::norm(j) - gamma * gamma;
  const cplx s = radicand >= 0.0 ? cplx{std::sqrt(radicand), 0.0}
                                 : cplx{0.0, std::sqrt(-radicand)};
  const cplx ig{0.0, gamma};

  Eigensystem e;
  e.lambda_plus = s;
  e.lambda_minus = -s;
  e.v_plus = normalized({s + ig, -std::conj(j)});
  e.v_minus = normalized({s - ig, std::conj(j)});
  return e;
}

PhaseClassification classify_phase(double gamma, cplx j, double tol) {
  if (!(tol > 0.0)) throw ContractError("classify_phase: tol must be > 0");
  const double g = std::abs(gamma);
  const double mag = std::abs(j);
  PhaseClassification c;
  c.tolerance = tol;
  if (std::abs(g - mag) <= tol) {
    c.phase = PtPhase::ExceptionalPoint;
  } else if (g < mag) {
    c.phase = PtPhase::PTSymmetric;
  } else {
    c.phase = PtPhase::PTBroken;
  }
  return c;
}

PhaseClassification classify_phase(double gamma, cplx j) {
  return classify_phase(gamma, j, kExceptionalPointRelTol * std::abs(j));
}

std::vector<SpectrumRow> bifurcation_scan(double gamma_min, double gamma_max, std::size_t steps,
                                          cplx j) {
  if (!(gamma_min < gamma_max)) throw ContractError("bifurcation_scan: need gamma_min < gamma_max");
  if (steps < 2) throw ContractError("bifurcation_scan: need at least 2 steps");
  std::vector<SpectrumRow> rows(steps);
  const double width = gamma_max - gamma_min;
  for (std::size_t k = 0; k < steps; ++k) {
    const double gamma =
        k + 1 == steps ? gamma_max
                       : gamma_min + width * static_cast<double>(k) / static_cast<double>(steps - 1);
    const Eigensystem e = eigensystem(gamma, j);
    rows[k] = {gamma, e.lambda_plus, e.lambda_minus};
  }
  return rows;
}

double residual_norm(const TwoModeHamiltonian& h, cplx lambda, const Vec2& v) {
  const Vec2 hv = h.apply(v);
  return std::sqrt(std::norm(hv[0] - lambda * v[0]) + std::norm(hv[1] - lambda * v[1]));
}

}  // namespace polariton
