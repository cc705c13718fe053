#pragma once

// Kinetic symbols of the pseudo-relativistic operator and its
// nonrelativistic limit, and their action as diagonal Fourier multipliers.

#include <span>
#include <vector>

#include "prnls/model.hpp"

namespace prnls {

/// sqrt(c^2|xi|^2 + m^2 c^4) - m c^2, evaluated as
/// |xi|^2 / (sqrt(|xi|^2/c^2 + m^2) + m). Exact |xi|^2/(2m) for c = inf.
double relativistic_symbol(double xi_sq, const PhysParams& params);

/// |xi|^2 / (2m)
double limit_symbol(double xi_sq, const PhysParams& params);

/// limit_symbol - relativistic_symbol without cancellation:
/// |xi|^4 / (2 m c^2 (sqrt(|xi|^2/c^2 + m^2) + m)^2).
double symbol_gap(double xi_sq, const PhysParams& params);

/// |xi|^4 / (8 m^3 c^2). symbol_gap never exceeds it in floating point.
double symbol_gap_bound(double xi_sq, const PhysParams& params);

enum class MultiplierKind { relativistic, limit, custom };

/// Per-lattice-mode table a(xi_k) >= 0 in spectral storage order.
class Multiplier {
 public:
  static Multiplier relativistic(const Grid& grid, const PhysParams& params);
  static Multiplier limit(const Grid& grid, const PhysParams& params);
  static Multiplier custom(const Grid& grid, const PhysParams& params,
                           std::vector<double> table);

  MultiplierKind kind() const { return kind_; }
  const PhysParams& params() const { return params_; }
  const Grid& grid() const { return grid_; }
  std::span<const double> table() const { return table_; }

 private:
  Multiplier(MultiplierKind kind, Grid grid, PhysParams params,
             std::vector<double> table);

  MultiplierKind kind_;
  Grid grid_;
  PhysParams params_;
  std::vector<double> table_;
};

RealField apply_multiplier(const Multiplier& M, const RealField& f);

/// e(c) = ||(A_c - A_inf) phi||_2 for each c in c_list.
std::vector<double> multiplier_convergence_test(const RealField& phi,
                                                const PhysParams& params,
                                                std::span<const double> c_list);

}  // namespace prnls
