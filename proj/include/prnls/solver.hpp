#pragma once

// Ground states of (A + mu) u = |u|^{p-2} u for a diagonal kinetic multiplier
// A, computed by Petviashvili iteration
//
//   u <- (Q(u) / <u^{p-1}, u>)^gamma (A + mu)^{-1} u^{p-1}
//
// with a Nehari-projected preconditioned descent as a second route.

#include <array>
#include <optional>

#include "prnls/model.hpp"
#include "prnls/symbol.hpp"
#include "prnls/variational.hpp"

namespace prnls {

struct SolverConfig {
  double tol_residual = 1e-9;
  int max_iter = 10000;
  /// Defaults to (p-1)/(p-2).
  std::optional<double> gamma;
  /// Width w of the default guess exp(-|x|^2 / (2 w^2)).
  double init_width = 2.0;
  /// Replaces the Gaussian guess when set.
  std::optional<RealField> init_field;
  /// Step of the descent route, in the (A + mu)^{-1} metric.
  double fallback_step = 0.5;
  /// L^2 norm above which an iteration is declared blown up.
  double blowup_norm = 1e12;

  void validate() const;
};

struct GroundState {
  RealField field;
  EnergyReport report;
  int iterations = 0;
  bool converged = false;
  PhysParams params;
  /// max |u| on the box faces / max |u|
  double boundary_ratio = 0.0;
};

/// Petviashvili iteration. Non-convergence returns converged = false with the
/// last iterate; blow-up throws Error(numeric).
GroundState solve_ground_state(const Multiplier& M, const SolverConfig& cfg);

/// Preconditioned descent v <- v - tau (A + mu)^{-1} ((A + mu) v - v^{p-1}),
/// Nehari-projected after every step.
GroundState projected_gradient_solve(const Multiplier& M,
                                     const SolverConfig& cfg);

/// exp(-|x|^2 / (2 w^2)) centered in the box, optionally displaced.
RealField gaussian(const Grid& grid, double width,
                   const std::array<double, 3>& center = {0.0, 0.0, 0.0});

struct Recentered {
  RealField field;
  /// No isolated maximum: lexicographically smallest grid maximizer used and
  /// no sub-grid correction applied.
  bool degenerate = false;
};

/// Moves the maximum of f to the box center: cyclic shift of the grid
/// maximizer followed by a sub-grid spectral shift to the maximum of the
/// trigonometric interpolant.
Recentered recenter(const RealField& f);

/// Largest deviation from the shell mean of f over circles (spheres) of
/// radius k*h around the box center, relative to max |f|. Values come from the
/// trigonometric interpolant.
double radial_scatter(const RealField& f);

/// max |f| over the box faces relative to max |f|.
double boundary_ratio(const RealField& f);

}  // namespace prnls

namespace prnls {

/// Petviashvili first; the descent route when it fails to converge or blows up.
GroundState solve_with_fallback(const Multiplier& M, const SolverConfig& cfg);

}  // namespace prnls
