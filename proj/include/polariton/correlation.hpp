#pragma once

#include <span>
#include <vector>

#include "polariton/ensemble.hpp"
#include "polariton/integrator.hpp"

namespace polariton {

enum class Well { Left, Right };

enum class EstimatorKind { Ensemble, TimeAveraged };

struct EstimatorInfo {
  EstimatorKind kind = EstimatorKind::Ensemble;
  double t0 = 0.0;               ///< ensemble reference time
  std::size_t realizations = 0;  ///< ensemble size
  double t_i = 0.0;              ///< time-averaging window start
  double t_f = 0.0;              ///< time-averaging window end
};

/// First-order coherence g1 sampled on a uniform lag grid.
struct CorrelationSeries {
  std::vector<double> lags;
  std::vector<cplx> values;
  EstimatorInfo estimator;
  /// Rough 3-sigma statistical band on |g1|.
  double stat_tolerance = 0.0;

  [[nodiscard]] std::vector<double> magnitudes() const;
  [[nodiscard]] std::size_t size() const { return lags.size(); }
};

struct DecayFit {
  double rate = 0.0;  ///< positive for decay
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// g1(t) = <psi*(t0) psi(t0 + t)> / sqrt(<|psi(t0)|^2> <|psi(t0 + t)|^2>)
/// averaged over realizations. Lags run from 0 to the end of the record, or
/// to `max_lag` when given.
CorrelationSeries g1_ensemble(const EnsembleResult& ensemble, double t0, Well well,
                              double max_lag = -1.0);
CorrelationSeries g1_ensemble(std::span<const Trajectory> trajectories, double t0, Well well,
                              double max_lag = -1.0);

/// Single-trajectory estimate: sliding inner product of psi with itself over
/// tau in [t_i, t_f), normalised by the two windowed powers.
CorrelationSeries g1_time_avg(const Trajectory& trajectory, double t_i, double t_f,
                              double max_lag, Well well);
CorrelationSeries g1_time_avg(std::span<const double> times, std::span<const cplx> field,
                              double t_i, double t_f, double max_lag);

/// Least-squares slope of ln|g1| against lag over the leading run of points
/// with |g1| > fit_floor (the run ends at the first point at or below it).
/// The series needs at least 10 points above the floor.
///
/// With envelope_window > 0 the series is first reduced to its peak envelope:
/// the largest |g1| in each consecutive block of lags of that width, placed at
/// its own lag. Use a window of at least one oscillation period when |g1|
/// carries Rabi beats.
DecayFit fit_decay(const CorrelationSeries& series, double fit_floor = 0.05,
                   double envelope_window = 0.0);

/// max over lags <= lag_max of | |a| - |b| |, with |b| linearly interpolated
/// onto the lags of `a`.
double ergodicity_metric(const CorrelationSeries& a, const CorrelationSeries& b, double lag_max);

}  // namespace polariton
