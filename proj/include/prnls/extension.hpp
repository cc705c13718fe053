#pragma once

// Per-mode form of the half-space extension whose Neumann data realizes
// sqrt(-c^2 Delta + m^2 c^4). The harmonic extension of one Fourier mode is
//   U(xi, y) = u^(xi) exp(-y s),  s = sqrt(|xi|^2 + m^2 c^2),
// and every y-integral is done in closed form.

#include <complex>
#include <string>
#include <vector>

#include "prnls/model.hpp"

namespace prnls {

struct ModeExtension {
  double xi_sq = 0.0;
  double decay = 0.0;  // s >= m c
  std::complex<double> coefficient;
};

ModeExtension make_mode(double xi_sq, std::complex<double> coefficient,
                        const PhysParams& params);

/// sqrt(c^2|xi|^2 + m^2 c^4) |u^|^2
double trace_energy(const ModeExtension& ext, const PhysParams& params);

/// (1/c) int_0^inf c^2 |grad U|^2 + m^2 c^4 U^2 dy for the harmonic extension.
double mode_energy(const ModeExtension& ext, const PhysParams& params);

/// Same energy for the competitor u^ exp(-y (s + delta)), which has the same
/// trace. Throws for delta <= -s.
double perturbed_mode_energy(const ModeExtension& ext, double delta,
                             const PhysParams& params);

/// perturbed_mode_energy - mode_energy in the cancellation-free form
/// c |u^|^2 delta^2 / (2 (s + delta)).
double perturbed_excess(const ModeExtension& ext, double delta,
                        const PhysParams& params);

/// max over modes of |c s u^ - sqrt(c^2|xi|^2 + m^2 c^4) u^| / |sqrt(...) u^|.
double neumann_consistency(const RealField& u, const PhysParams& params);

struct ExtensionRow {
  std::size_t mode;
  double xi_sq;
  double lhs;  // trace side
  double rhs;  // extension energy
  double gap;  // |lhs - rhs| / max(rhs, tiny)
};

struct ExtensionReport {
  std::vector<ExtensionRow> rows;
  double max_equality_gap = 0.0;
  /// min over nonzero modes and deltas of perturbed_excess / mode_energy
  /// (must be > 0)
  double min_perturbed_excess = 0.0;
  /// max over the same set of |(perturbed - mode) - excess| / perturbed
  double max_excess_mismatch = 0.0;
  double neumann_gap = 0.0;
  /// |sum extension energy - sum trace energy| / sum trace energy
  double summed_gap = 0.0;
  bool passed = false;
};

/// Runs every per-mode check on the spectrum of u with the log grid of
/// delta in [1e-6, 1e3].
ExtensionReport extension_check(const RealField& u, const PhysParams& params);

/// CSV with header mode,xi_sq,lhs,rhs,gap.
std::string extension_csv(const ExtensionReport& report);

}  // namespace prnls
