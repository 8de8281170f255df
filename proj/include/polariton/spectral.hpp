#pragma once

#include <array>
#include <vector>

#include "polariton/model.hpp"

namespace polariton {

using Vec2 = std::array<cplx, 2>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

/// Balanced gain/loss two-mode matrix [[i gamma, -J], [-J*, -i gamma]].
struct TwoModeHamiltonian {
  double gamma = 0.0;
  cplx j_coupling{1.0, 0.0};
  Mat2 entries{};

  static TwoModeHamiltonian make(double gamma, cplx j);

  [[nodiscard]] Vec2 apply(const Vec2& v) const;
  [[nodiscard]] cplx trace() const { return entries[0][0] + entries[1][1]; }
  [[nodiscard]] cplx determinant() const;
};

enum class PtPhase { PTSymmetric, ExceptionalPoint, PTBroken };

struct PhaseClassification {
  PtPhase phase = PtPhase::PTSymmetric;
  double tolerance = 0.0;
};

struct Eigensystem {
  cplx lambda_plus{};
  cplx lambda_minus{};
  Vec2 v_plus{};
  Vec2 v_minus{};
};

struct SpectrumRow {
  double gamma = 0.0;
  cplx lambda_plus{};
  cplx lambda_minus{};
};

/// Default half-width of the exceptional-point band, relative to |J|.
inline constexpr double kExceptionalPointRelTol = 1e-9;

/// lambda_{+-} = +-sqrt(|J|^2 - gamma^2) (the + branch has Im >= 0 past the
/// exceptional point) with eigenvectors ((s +- i gamma), -+J*), s = lambda_+,
/// scaled to unit norm with the first nonzero component real and positive.
Eigensystem eigensystem(double gamma, cplx j);

/// Phase from |gamma| against |J| with a symmetric band of half-width `tol`.
PhaseClassification classify_phase(double gamma, cplx j, double tol);
PhaseClassification classify_phase(double gamma, cplx j);

/// Uniform scan gamma_min .. gamma_max inclusive, `steps` points.
std::vector<SpectrumRow> bifurcation_scan(double gamma_min, double gamma_max, std::size_t steps,
                                          cplx j);

double residual_norm(const TwoModeHamiltonian& h, cplx lambda, const Vec2& v);

}  // namespace polariton
