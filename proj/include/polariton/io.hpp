#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "polariton/correlation.hpp"
#include "polariton/ensemble.hpp"
#include "polariton/integrator.hpp"
#include "polariton/spectral.hpp"

namespace polariton::io {

/// Shortest decimal that parses back to the same double (locale-free).
std::string format_double(double x);

/// Columns: t re_psi_l im_psi_l re_psi_r im_psi_r n_l n_r pop_l pop_r re_theta im_theta
void write_trajectory(std::ostream& out, const Trajectory& traj);

/// Columns: lag re_g1 im_g1 abs_g1
void write_correlation(std::ostream& out, const CorrelationSeries& series);

/// Columns: t mean_pop_l mean_pop_r mean_n_l mean_n_r re_mean_theta im_mean_theta mean_pt_residual
void write_ensemble_means(std::ostream& out, const EnsembleResult& result,
                          const ModelParams& params);

/// Columns: gamma re_lambda_plus im_lambda_plus re_lambda_minus im_lambda_minus phase
void write_spectrum(std::ostream& out, std::span<const SpectrumRow> rows, cplx j);

/// Parses a whitespace-separated table with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::size_t column(const std::string& name) const;
};
Table read_table(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace polariton::io
