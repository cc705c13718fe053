#pragma once

// Shooting oracle for the positive radial solution of the limit equation
//
//   u'' + ((n-1)/r) u' = 2m (mu u - |u|^{p-2} u),   u'(0) = 0,
//
// independent of the spectral machinery.

#include <string>
#include <utility>
#include <vector>

#include "prnls/model.hpp"
#include "prnls/solver.hpp"

namespace prnls {

struct RadialProfile {
  double r_max = 0.0;
  double dr = 0.0;
  double u0 = 0.0;
  /// u(i*dr) and u'(i*dr), i = 0..r_max/dr
  std::vector<double> values;
  std::vector<double> slopes;

  /// Cubic Hermite interpolation; 0 beyond r_max.
  double value_at(double r) const;
};

enum class ShotOutcome {
  /// Stays positive: turns back up (u' > 0) or reaches r_max.
  decays,
  /// Reaches u < 0.
  crosses_zero,
  /// Non-finite state or |u| > 1e6 u0.
  diverges,
};

struct Shot {
  ShotOutcome outcome;
  /// Trajectory up to the classification point.
  RadialProfile profile;
};

struct OracleConfig {
  double r_max = 30.0;
  double dr = 1e-3;
};

/// Fourth-order Runge-Kutta shot from u(0) = u0. The first step uses the
/// regular expansion u''(0) = (2m/n)(mu u0 - u0^{p-1}). Throws
/// Error(numeric) when the energy u'^2/2 - 2m(mu u^2/2 - |u|^p/p), which is
/// non-increasing along exact solutions, grows.
Shot shoot(double u0, const PhysParams& params, double r_max, double dr);

/// Bracket [lo, hi] with shoot(lo) decaying and shoot(hi) crossing zero.
std::pair<double, double> default_bracket(const PhysParams& params);

/// Bisection on the decay/crossing dichotomy; result within 1e-10.
double find_ground_u0(const PhysParams& params, std::pair<double, double> bracket,
                      const OracleConfig& cfg = {});

/// Accepted ground-state profile on [0, r_max]: the converged shot up to
/// u <= 1e-4 u0, continued by the linear decaying tail r^{-nu} K_nu(kappa r),
/// nu = (n-2)/2, kappa = sqrt(2 m mu).
RadialProfile ground_profile(const PhysParams& params, const OracleConfig& cfg = {});

/// sup over radius bins of width h of |bin mean of gs - bin mean of prof| /
/// max(prof), both sampled at the grid points of the bin.
double compare_profiles(const RealField& gs, const RadialProfile& prof);
double compare_profiles(const GroundState& gs, const RadialProfile& prof);

/// If w solves the limit equation with (m, mu) = (1/2, 1), then
/// mu^{1/(p-2)} w(sqrt(2 m mu) r) solves it for (m, mu). Returns the largest
/// deviation from that map between the profiles of `a` and `b` (n, p shared),
/// relative to the amplitude of `b`, over r in [0, 10] and the shooting
/// amplitudes.
double scaling_closure(const PhysParams& a, const PhysParams& b,
                       const OracleConfig& cfg = {});

/// CSV with header r,u.
std::string profile_csv(const RadialProfile& prof);

/// prof(|x|) sampled on the grid.
RealField lift_profile(const RadialProfile& prof, const Grid& grid);

}  // namespace prnls
