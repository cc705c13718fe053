#include "prnls/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "io_util.hpp"
#include "prnls/error.hpp"

namespace prnls {

ModeExtension make_mode(double xi_sq, std::complex<double> coefficient,
                        const PhysParams& params) {
  const double mc = params.m * params.c;
  return {xi_sq, std::sqrt(xi_sq + mc * mc), coefficient};
}

double trace_energy(const ModeExtension& ext, const PhysParams& params) {
  const double c = params.c;
  const double m = params.m;
  return std::sqrt(c * c * ext.xi_sq + m * m * c * c * c * c) *
         std::norm(ext.coefficient);
}

namespace {

double energy_with_decay(const ModeExtension& ext, double rate,
                         const PhysParams& params) {
  const double c = params.c;
  const double m = params.m;
  const double num = c * c * ext.xi_sq + m * m * c * c * c * c + c * c * rate * rate;
  return std::norm(ext.coefficient) * num / (2.0 * rate) / c;
}

}  // namespace

double mode_energy(const ModeExtension& ext, const PhysParams& params) {
  return energy_with_decay(ext, ext.decay, params);
}

double perturbed_mode_energy(const ModeExtension& ext, double delta,
                             const PhysParams& params) {
  if (!(delta > -ext.decay))
    fail(ErrorKind::invalid_argument, "competitor must decay: delta > -s");
  return energy_with_decay(ext, ext.decay + delta, params);
}

double perturbed_excess(const ModeExtension& ext, double delta,
                        const PhysParams& params) {
  if (!(delta > -ext.decay))
    fail(ErrorKind::invalid_argument, "competitor must decay: delta > -s");
  return params.c * std::norm(ext.coefficient) * delta * delta /
         (2.0 * (ext.decay + delta));
}

double neumann_consistency(const RealField& u, const PhysParams& params) {
  const SpectralField U = to_spectral(u);
  const auto xi_sq = U.grid.xi_sq_table();
  const double c = params.c;
  const double m = params.m;
  double worst = 0.0;
  for (std::size_t k = 0; k < xi_sq.size(); ++k) {
    const std::complex<double> a = U.coeffs[k];
    if (a == 0.0) continue;
    const ModeExtension ext = make_mode(xi_sq[k], a, params);
    const auto neumann = c * ext.decay * a;
    const auto symbol = std::sqrt(c * c * xi_sq[k] + m * m * c * c * c * c) * a;
    worst = std::max(worst, std::abs(neumann - symbol) / std::abs(symbol));
  }
  return worst;
}

ExtensionReport extension_check(const RealField& u, const PhysParams& params) {
  const SpectralField U = to_spectral(u);
  const auto xi_sq = U.grid.xi_sq_table();
  ExtensionReport rep;
  rep.rows.reserve(xi_sq.size());
  rep.min_perturbed_excess = std::numeric_limits<double>::infinity();

  std::vector<double> deltas;
  for (int e = -6; e <= 3; ++e)
    for (double f : {1.0, 2.0, 5.0}) deltas.push_back(f * std::pow(10.0, e));

  double sum_ext = 0.0;
  double sum_trace = 0.0;
  for (std::size_t k = 0; k < xi_sq.size(); ++k) {
    const ModeExtension ext = make_mode(xi_sq[k], U.coeffs[k], params);
    const double lhs = trace_energy(ext, params);
    const double rhs = mode_energy(ext, params);
    const double gap = rhs > 0.0 ? std::abs(lhs - rhs) / rhs : std::abs(lhs - rhs);
    rep.rows.push_back({k, xi_sq[k], lhs, rhs, gap});
    rep.max_equality_gap = std::max(rep.max_equality_gap, gap);
    sum_ext += rhs;
    sum_trace += lhs;
    if (rhs > 0.0) {
      for (double d : deltas) {
        const double excess = perturbed_excess(ext, d, params);
        const double perturbed = perturbed_mode_energy(ext, d, params);
        rep.min_perturbed_excess = std::min(rep.min_perturbed_excess, excess / rhs);
        rep.max_excess_mismatch = std::max(
            rep.max_excess_mismatch, std::abs((perturbed - rhs) - excess) / perturbed);
      }
    }
  }
  rep.neumann_gap = neumann_consistency(u, params);
  rep.summed_gap = sum_trace > 0.0 ? std::abs(sum_ext - sum_trace) / sum_trace : 0.0;
  rep.passed = rep.max_equality_gap <= 1e-12 && rep.min_perturbed_excess > 0.0 &&
               rep.max_excess_mismatch <= 1e-12 &&
               rep.neumann_gap <= 1e-12 && rep.summed_gap <= 1e-10;
  return rep;
}

std::string extension_csv(const ExtensionReport& report) {
  std::string out = "mode,xi_sq,lhs,rhs,gap\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.mode);
    for (double v : {r.xi_sq, r.lhs, r.rhs, r.gap}) {
      out += ',';
      out += detail::format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace prnls
