#include "polariton/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polariton::io {

namespace {

void row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ' ';
    out << format_double(v);
    first = false;
  }
  out << '\n';
}

std::string_view phase_name(PtPhase p) {
  switch (p) {
    case PtPhase::PTSymmetric: return "pt_symmetric";
    case PtPhase::ExceptionalPoint: return "exceptional_point";
    case PtPhase::PTBroken: return "pt_broken";
  }
  return "unknown";
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // no "-0" in tables
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << "t re_psi_l im_psi_l re_psi_r im_psi_r n_l n_r pop_l pop_r re_theta im_theta\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const SystemState& s = traj.states[k];
    const cplx theta = Coherence::of(s).theta;
    row(out, {traj.times[k], s.psi_l.real(), s.psi_l.imag(), s.psi_r.real(), s.psi_r.imag(), s.n_l,
              s.n_r, s.pop_l(), s.pop_r(), theta.real(), theta.imag()});
  }
}

void write_correlation(std::ostream& out, const CorrelationSeries& series) {
  out << "lag re_g1 im_g1 abs_g1\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const cplx g = series.values[k];
    row(out, {series.lags[k], g.real(), g.imag(), std::abs(g)});
  }
}

void write_ensemble_means(std::ostream& out, const EnsembleResult& r, const ModelParams& p) {
  out << "t mean_pop_l mean_pop_r mean_n_l mean_n_r re_mean_theta im_mean_theta "
         "mean_pt_residual\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double residual = p.r_scatter * (r.mean_n_l[k] + r.mean_n_r[k]) - 2.0 * p.kappa;
    row(out, {r.times[k], r.mean_pop_l[k], r.mean_pop_r[k], r.mean_n_l[k], r.mean_n_r[k],
              r.mean_theta[k].real(), r.mean_theta[k].imag(), residual});
  }
}

void write_spectrum(std::ostream& out, std::span<const SpectrumRow> rows, cplx j) {
  out << "gamma re_lambda_plus im_lambda_plus re_lambda_minus im_lambda_minus phase\n";
  for (const SpectrumRow& r : rows) {
    out << format_double(r.gamma) << ' ' << format_double(r.lambda_plus.real()) << ' '
        << format_double(r.lambda_plus.imag()) << ' ' << format_double(r.lambda_minus.real())
        << ' ' << format_double(r.lambda_minus.imag()) << ' '
        << phase_name(classify_phase(r.gamma, j).phase) << '\n';
  }
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw std::out_of_range("no column named " + name);
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Table t;
  std::string line;
  if (std::getline(in, line)) {
    std::istringstream hs(line);
    for (std::string name; hs >> name;) t.header.push_back(name);
  }
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> values;
    for (std::string tok; ls >> tok;) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      values.push_back(ec == std::errc{} && ptr == tok.data() + tok.size()
                           ? v
                           : std::numeric_limits<double>::quiet_NaN());
    }
    if (!values.empty()) t.rows.push_back(std::move(values));
  }
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace polariton::io
