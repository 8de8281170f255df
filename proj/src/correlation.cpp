#include "polariton/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace polariton {

namespace {

std::size_t grid_index(std::span<const double> times, double t, const char* what) {
  if (times.size() < 2) throw ContractError(std::string(what) + ": time grid too short");
  const double spacing = times[1] - times[0];
  const double pos = (t - times.front()) / spacing;
  const double rounded = std::round(pos);
  if (std::abs(pos - rounded) > 1e-6 || rounded < 0.0 ||
      rounded > static_cast<double>(times.size() - 1)) {
    throw ContractError(std::string(what) + ": t = " + std::to_string(t) +
                        " is not on the recorded grid");
  }
  return static_cast<std::size_t>(rounded);
}

std::size_t lag_count(std::span<const double> times, std::size_t start, double max_lag) {
  const std::size_t available = times.size() - start;
  if (max_lag < 0.0) return available;
  const double spacing = times[1] - times[0];
  const auto wanted = static_cast<std::size_t>(std::floor(max_lag / spacing + 1e-9)) + 1;
  return std::min(available, wanted);
}

// field(r, k) returns psi of realization r at sample k.
template <class Field>
CorrelationSeries ensemble_estimate(std::span<const double> times, std::size_t realizations,
                                    Field field, double t0, double max_lag) {
  if (realizations < 2) throw ContractError("g1_ensemble: need at least two realizations");
  const std::size_t k0 = grid_index(times, t0, "g1_ensemble");
  const std::size_t lags = lag_count(times, k0, max_lag);

  std::vector<cplx> cross(lags, cplx{});
  std::vector<double> power(lags, 0.0);
  for (std::size_t r = 0; r < realizations; ++r) {
    const cplx ref = std::conj(field(r, k0));
    for (std::size_t m = 0; m < lags; ++m) {
      const cplx psi = field(r, k0 + m);
      cross[m] += ref * psi;
      power[m] += std::norm(psi);
    }
  }

  CorrelationSeries out;
  out.lags.resize(lags);
  out.values.resize(lags);
  for (std::size_t m = 0; m < lags; ++m) {
    out.lags[m] = times[k0 + m] - times[k0];
    const double norm = std::sqrt(power[0] * power[m]);
    out.values[m] = norm > 0.0 ? cross[m] / norm : cplx{};
  }
  out.estimator.kind = EstimatorKind::Ensemble;
  out.estimator.t0 = times[k0];
  out.estimator.realizations = realizations;
  out.stat_tolerance = 3.0 / std::sqrt(static_cast<double>(realizations));
  return out;
}

}  // namespace

std::vector<double> CorrelationSeries::magnitudes() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](cplx v) { return std::abs(v); });
  return out;
}

CorrelationSeries g1_ensemble(const EnsembleResult& ensemble, double t0, Well well,
                              double max_lag) {
  const auto& rs = ensemble.realizations;
  auto field = [&](std::size_t r, std::size_t k) {
    return well == Well::Left ? rs[r].psi_l[k] : rs[r].psi_r[k];
  };
  return ensemble_estimate(ensemble.times, rs.size(), field, t0, max_lag);
}

CorrelationSeries g1_ensemble(std::span<const Trajectory> trajectories, double t0, Well well,
                              double max_lag) {
  if (trajectories.empty()) throw ContractError("g1_ensemble: no trajectories");
  const auto& times = trajectories.front().times;
  for (const Trajectory& tr : trajectories) {
    if (tr.times != times) throw ContractError("g1_ensemble: trajectories do not share a time grid");
  }
  auto field = [&](std::size_t r, std::size_t k) {
    const SystemState& s = trajectories[r].states[k];
    return well == Well::Left ? s.psi_l : s.psi_r;
  };
  return ensemble_estimate(times, trajectories.size(), field, t0, max_lag);
}

CorrelationSeries g1_time_avg(std::span<const double> times, std::span<const cplx> field,
                              double t_i, double t_f, double max_lag) {
  if (times.size() != field.size()) throw ContractError("g1_time_avg: size mismatch");
  if (!(t_f > t_i)) throw ContractError("g1_time_avg: need t_f > t_i");
  if (max_lag < 0.0 || t_f - t_i < max_lag) {
    throw ContractError("g1_time_avg: window shorter than max_lag");
  }
  const std::size_t i0 = grid_index(times, t_i, "g1_time_avg");
  const double spacing = times[1] - times[0];
  const double end_pos = (t_f - times.front()) / spacing;
  if (end_pos > static_cast<double>(times.size() - 1) + 1e-6) {
    throw ContractError("g1_time_avg: window exceeds trajectory extent");
  }
  const auto i1 = static_cast<std::size_t>(std::llround(end_pos));
  const auto lags = static_cast<std::size_t>(std::floor(max_lag / spacing + 1e-9)) + 1;
  if (i1 + lags - 1 > times.size()) {
    throw ContractError("g1_time_avg: window plus max_lag exceeds trajectory extent");
  }

  // Rectangle rule over tau samples i0 .. i1-1.
  const std::size_t width = i1 - i0;
  double base_power = 0.0;
  for (std::size_t i = i0; i < i1; ++i) base_power += std::norm(field[i]);

  CorrelationSeries out;
  out.lags.resize(lags);
  out.values.resize(lags);
  for (std::size_t m = 0; m < lags; ++m) {
    cplx cross{};
    double shifted_power = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
      cross += std::conj(field[i]) * field[i + m];
      shifted_power += std::norm(field[i + m]);
    }
    out.lags[m] = times[i0 + m] - times[i0];
    const double norm = std::sqrt(base_power * shifted_power);
    out.values[m] = norm > 0.0 ? cross / norm : cplx{};
  }
  out.estimator.kind = EstimatorKind::TimeAveraged;
  out.estimator.t_i = times[i0];
  out.estimator.t_f = times[i0] + static_cast<double>(width) * spacing;
  out.stat_tolerance = 3.0 * std::sqrt(max_lag / (t_f - t_i));
  return out;
}

CorrelationSeries g1_time_avg(const Trajectory& trajectory, double t_i, double t_f,
                              double max_lag, Well well) {
  std::vector<cplx> field(trajectory.size());
  for (std::size_t k = 0; k < field.size(); ++k) {
    const SystemState& s = trajectory.states[k];
    field[k] = well == Well::Left ? s.psi_l : s.psi_r;
  }
  return g1_time_avg(trajectory.times, field, t_i, t_f, max_lag);
}

DecayFit fit_decay(const CorrelationSeries& series, double fit_floor, double envelope_window) {
  std::vector<double> lags;
  std::vector<double> mags;
  const std::vector<double> all = series.magnitudes();
  if (envelope_window > 0.0 && series.size() >= 2) {
    const double spacing = series.lags[1] - series.lags[0];
    const auto block = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(envelope_window / spacing)));
    for (std::size_t start = 0; start + block <= series.size(); start += block) {
      const auto peak = std::max_element(all.begin() + static_cast<std::ptrdiff_t>(start),
                                         all.begin() + static_cast<std::ptrdiff_t>(start + block));
      const auto k = static_cast<std::size_t>(peak - all.begin());
      lags.push_back(series.lags[k]);
      mags.push_back(all[k]);
    }
  } else {
    lags = series.lags;
    mags = all;
  }

  const auto above = std::count_if(all.begin(), all.end(), [&](double m) { return m > fit_floor; });
  if (above < 10) {
    throw ContractError("fit_decay: only " + std::to_string(above) +
                        " points above the fit floor (need 10)");
  }
  std::size_t used = 0;
  while (used < mags.size() && mags[used] > fit_floor) ++used;
  if (used < 3) {
    throw ContractError("fit_decay: fewer than 3 leading samples above the fit floor");
  }

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t k = 0; k < used; ++k) {
    mean_x += lags[k];
    mean_y += std::log(mags[k]);
  }
  mean_x /= static_cast<double>(used);
  mean_y /= static_cast<double>(used);

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < used; ++k) {
    const double dx = lags[k] - mean_x;
    const double dy = std::log(mags[k]) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  DecayFit fit;
  fit.rate = -sxy / sxx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points = used;
  return fit;
}

double ergodicity_metric(const CorrelationSeries& a, const CorrelationSeries& b, double lag_max) {
  if (a.size() == 0 || b.size() == 0) throw ContractError("ergodicity_metric: empty series");
  const std::vector<double> mag_b = b.magnitudes();
  double worst = -1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double lag = a.lags[k];
    if (lag > lag_max + 1e-9) break;
    if (lag < b.lags.front() - 1e-9 || lag > b.lags.back() + 1e-9) continue;
    auto it = std::lower_bound(b.lags.begin(), b.lags.end(), lag - 1e-9);
    std::size_t j = static_cast<std::size_t>(it - b.lags.begin());
    double interp;
    if (j < b.size() && std::abs(b.lags[j] - lag) <= 1e-9) {
      interp = mag_b[j];
    } else {
      const std::size_t lo = j - 1;
      const double w = (lag - b.lags[lo]) / (b.lags[j] - b.lags[lo]);
      interp = (1.0 - w) * mag_b[lo] + w * mag_b[j];
    }
    worst = std::max(worst, std::abs(std::abs(a.values[k]) - interp));
  }
  if (worst < 0.0) throw ContractError("ergodicity_metric: series have no overlapping lags");
  return worst;
}

}  // namespace polariton
