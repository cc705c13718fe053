#pragma once

// Domain types, periodic grid, unitary spectral transforms and the norms
// used throughout the solver.
//
// R^n is truncated to the periodic box [-L/2, L/2)^n sampled at
// x_j = -L/2 + j*h. Spectral coefficients approximate the continuous
// transform (2pi)^{-n/2} \int e^{-i x.xi} u(x) dx, so that
//
//     h^n * sum_j f_j^2 == dxi^n * sum_k |F_k|^2,   dxi = 2pi/L.
//
// Storage is row-major with axis 0 (x_1) slowest; spectral storage uses the
// FFT-native index order (0..N/2-1, -N/2..-1) on every axis.

#include <array>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace prnls {

/// Model parameters of the standing-wave equation. `c` may be +inf for the
/// nonrelativistic limit.
struct PhysParams {
  double m = 1.0;
  double mu = 1.0;
  double c = 1.0;
  double p = 3.0;
  int n = 2;

  /// Throws Error(config) when outside the admissible range.
  void validate() const;

  /// Upper end 2n/(n-1) of the subcritical exponent range.
  double critical_exponent() const { return 2.0 * n / (n - 1.0); }
};

class Grid {
 public:
  Grid(int n, double length, int points);

  int dim() const { return n_; }
  double length() const { return length_; }
  int points() const { return points_; }
  double spacing() const { return length_ / points_; }
  std::size_t size() const { return size_; }

  /// Spatial coordinate of index i along any axis.
  double coord(int i) const { return -0.5 * length_ + i * spacing(); }
  /// Frequency of storage index i along any axis.
  double freq(int i) const { return freqs_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& freqs() const { return freqs_; }
  double dxi() const;

  /// Quadrature weight h^n of physical-space sums.
  double cell_volume() const;
  /// Weight dxi^n of spectral sums.
  double mode_volume() const;

  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;

  /// |xi|^2 for every lattice mode in storage order.
  std::vector<double> xi_sq_table() const;
  /// |x|^2 (distance to the box center) for every grid point.
  std::vector<double> radius_sq_table() const;

  bool operator==(const Grid& other) const;

 private:
  int n_;
  double length_;
  int points_;
  std::size_t size_;
  std::vector<double> freqs_;
};

/// Validated constructor: n in {2,3}, L > 0, N a power of two >= 16.
Grid make_grid(int n, double length, int points);

struct RealField {
  Grid grid;
  std::vector<double> values;

  explicit RealField(Grid g);
  RealField(Grid g, std::vector<double> v);

  double max() const;
  double min() const;
};

struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeffs;

  explicit SpectralField(Grid g);
  SpectralField(Grid g, std::vector<std::complex<double>> c);
};

SpectralField to_spectral(const RealField& f);
/// Inverse transform; the imaginary part is dropped.
RealField to_physical(const SpectralField& F);
/// Inverse transform keeping the complex result.
std::vector<std::complex<double>> to_physical_complex(const SpectralField& F);

/// Discrete L^2 inner product h^n sum f g.
double inner(const RealField& f, const RealField& g);
double norm_l2(const RealField& f);
double norm_lp(const RealField& f, double p);
/// h^n sum |f|^p
double lp_integral(const RealField& f, double p);
double norm_h1(const RealField& f);
double norm_hhalf(const RealField& f);
/// ||grad f||^2 by physical-space quadrature of the spectral gradient.
double gradient_norm_sq(const RealField& f);

/// dxi^n sum_k w(|xi_k|^2) |F_k|^2
template <class Weight>
double spectral_sum(const SpectralField& F, Weight&& weight) {
  const Grid& g = F.grid;
  const auto xi_sq = g.xi_sq_table();
  double acc = 0.0;
  for (std::size_t k = 0; k < F.coeffs.size(); ++k)
    acc += weight(xi_sq[k]) * std::norm(F.coeffs[k]);
  return acc * g.mode_volume();
}

/// Spectral (zero-padded) interpolation onto a finer grid of the same box.
RealField prolong(const RealField& f, const Grid& fine);

/// Trigonometric interpolant of F at an arbitrary point (box coordinates,
/// center at the origin). Only the first grid.dim() entries of x are used.
double interpolate(const SpectralField& F, const std::array<double, 3>& x);

RealField add(const RealField& a, const RealField& b, double scale_b = 1.0);
RealField scaled(const RealField& f, double s);

// Field snapshot: one-line JSON header {"n","L","N","params"} followed by
// N^n little-endian float64 values in row-major order.
void write_snapshot(const std::filesystem::path& path, const RealField& f,
                    const PhysParams& params);
struct Snapshot {
  RealField field;
  PhysParams params;
};
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace prnls
