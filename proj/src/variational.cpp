#include "prnls/variational.hpp"

#include <cmath>

#include "prnls/error.hpp"

namespace prnls {
namespace {

void require_grid(const RealField& u, const Multiplier& M) {
  if (!(u.grid == M.grid())) fail(ErrorKind::invalid_argument, "grid mismatch");
}

double quadratic_from_spectrum(const SpectralField& U, const Multiplier& M) {
  const auto table = M.table();
  const double mu = M.params().mu;
  double acc = 0.0;
  for (std::size_t k = 0; k < U.coeffs.size(); ++k)
    acc += (table[k] + mu) * std::norm(U.coeffs[k]);
  return acc * U.grid.mode_volume();
}

}  // namespace

double quadratic_form(const RealField& u, const Multiplier& M) {
  require_grid(u, M);
  return quadratic_from_spectrum(to_spectral(u), M);
}

RealField apply_shifted(const Multiplier& M, const RealField& u) {
  require_grid(u, M);
  SpectralField U = to_spectral(u);
  const auto table = M.table();
  const double mu = M.params().mu;
  for (std::size_t k = 0; k < U.coeffs.size(); ++k)
    U.coeffs[k] *= table[k] + mu;
  return to_physical(U);
}

RealField power_nonlinearity(const RealField& u, double p) {
  std::vector<double> v(u.values.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double x = u.values[k];
    v[k] = std::copysign(std::pow(std::abs(x), p - 1.0), x);
  }
  return RealField(u.grid, std::move(v));
}

double residual(const RealField& u, const Multiplier& M) {
  const double norm = norm_l2(u);
  if (norm == 0.0) return 0.0;
  const RealField lhs = apply_shifted(M, u);
  const RealField rhs = power_nonlinearity(u, M.params().p);
  return norm_l2(add(lhs, rhs, -1.0)) / norm;
}

EnergyReport energy(const RealField& u, const Multiplier& M) {
  const double p = M.params().p;
  EnergyReport r;
  r.quadratic = quadratic_form(u, M);
  r.lp = lp_integral(u, p);
  r.energy = 0.5 * r.quadratic - r.lp / p;
  r.nehari = r.quadratic - r.lp;
  r.residual = residual(u, M);
  r.identity_gap = std::abs(r.energy - (0.5 - 1.0 / p) * r.lp);
  return r;
}

NehariProjection nehari_project(const RealField& u, const Multiplier& M) {
  const double p = M.params().p;
  const double lp = lp_integral(u, p);
  if (!(lp > 0.0))
    fail(ErrorKind::invalid_argument, "Nehari projection of the zero field");
  const double t = std::pow(quadratic_form(u, M) / lp, 1.0 / (p - 2.0));
  return {t, scaled(u, t)};
}

double rayleigh_quotient(const RealField& u, const Multiplier& M) {
  const double p = M.params().p;
  const double lp = lp_integral(u, p);
  if (!(lp > 0.0))
    fail(ErrorKind::invalid_argument, "Rayleigh quotient of the zero field");
  const double q = quadratic_form(u, M);
  return std::pow(q, p / (p - 2.0)) / std::pow(lp, 2.0 / (p - 2.0));
}

}  // namespace prnls
