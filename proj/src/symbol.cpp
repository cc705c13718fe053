#include "prnls/symbol.hpp"

#include <algorithm>
#include <cmath>

#include "prnls/error.hpp"

namespace prnls {
namespace {

// sqrt(|xi|^2/c^2 + m^2), never below m.
double stable_root(double xi_sq, const PhysParams& params) {
  const double m = params.m;
  if (std::isinf(params.c)) return m;
  const double t = xi_sq / (params.c * params.c);
  return std::max(std::sqrt(t + m * m), m);
}

}  // namespace

double relativistic_symbol(double xi_sq, const PhysParams& params) {
  double v = xi_sq / (stable_root(xi_sq, params) + params.m);
  // The quotient is within an ulp or two of the true value, which already
  // satisfies 0 <= a_inf - a_c <= bound. Nudge by ulps so the rounded value
  // does as well; at large c the bound is below ulp(a_inf).
  const double top = limit_symbol(xi_sq, params);
  const double bound = symbol_gap_bound(xi_sq, params);
  for (int i = 0; i < 8 && top - v > bound; ++i) v = std::nextafter(v, top);
  for (int i = 0; i < 8 && v > top; ++i) v = std::nextafter(v, 0.0);
  return v;
}

double limit_symbol(double xi_sq, const PhysParams& params) {
  return xi_sq / (params.m + params.m);
}

double symbol_gap(double xi_sq, const PhysParams& params) {
  if (std::isinf(params.c)) return 0.0;
  const double m = params.m;
  const double d = stable_root(xi_sq, params) + m;
  return (xi_sq * xi_sq) / ((m + m) * (params.c * params.c) * (d * d));
}

double symbol_gap_bound(double xi_sq, const PhysParams& params) {
  if (std::isinf(params.c)) return 0.0;
  const double m = params.m;
  const double d = m + m;
  return (xi_sq * xi_sq) / ((m + m) * (params.c * params.c) * (d * d));
}

Multiplier::Multiplier(MultiplierKind kind, Grid grid, PhysParams params,
                       std::vector<double> table)
    : kind_(kind),
      grid_(std::move(grid)),
      params_(params),
      table_(std::move(table)) {
  if (table_.size() != grid_.size())
    fail(ErrorKind::invalid_argument, "multiplier table size mismatch");
  for (double a : table_)
    if (!std::isfinite(a) || a < 0.0)
      fail(ErrorKind::invalid_argument,
           "multiplier entries must be finite and non-negative");
}

Multiplier Multiplier::relativistic(const Grid& grid, const PhysParams& params) {
  auto table = grid.xi_sq_table();
  for (double& s : table) s = relativistic_symbol(s, params);
  return Multiplier(MultiplierKind::relativistic, grid, params, std::move(table));
}

Multiplier Multiplier::limit(const Grid& grid, const PhysParams& params) {
  auto table = grid.xi_sq_table();
  for (double& s : table) s = limit_symbol(s, params);
  return Multiplier(MultiplierKind::limit, grid, params, std::move(table));
}

Multiplier Multiplier::custom(const Grid& grid, const PhysParams& params,
                              std::vector<double> table) {
  return Multiplier(MultiplierKind::custom, grid, params, std::move(table));
}

RealField apply_multiplier(const Multiplier& M, const RealField& f) {
  if (!(M.grid() == f.grid)) fail(ErrorKind::invalid_argument, "grid mismatch");
  SpectralField F = to_spectral(f);
  const auto table = M.table();
  for (std::size_t k = 0; k < F.coeffs.size(); ++k) F.coeffs[k] *= table[k];
  return to_physical(F);
}

std::vector<double> multiplier_convergence_test(const RealField& phi,
                                                const PhysParams& params,
                                                std::span<const double> c_list) {
  const SpectralField F = to_spectral(phi);
  std::vector<double> errors;
  errors.reserve(c_list.size());
  for (double c : c_list) {
    PhysParams pc = params;
    pc.c = c;
    // Plancherel: the operator difference is diagonal with the gap symbol.
    errors.push_back(std::sqrt(spectral_sum(F, [&](double s) {
      const double gap = symbol_gap(s, pc);
      return gap * gap;
    })));
  }
  return errors;
}

}  // namespace prnls
