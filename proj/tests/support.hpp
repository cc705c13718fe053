#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "prnls/model.hpp"

namespace test {

inline prnls::RealField random_field(const prnls::Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  prnls::RealField f(g);
  for (double& v : f.values) v = dist(rng);
  return f;
}

// Smooth random field: a few Gaussians with random centers and weights.
inline prnls::RealField smooth_field(const prnls::Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-4.0, 4.0);
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  prnls::RealField f(g);
  for (int bump = 0; bump < 4; ++bump) {
    const double a = amp(rng), x0 = pos(rng), y0 = pos(rng), z0 = pos(rng);
    for (std::size_t k = 0; k < f.values.size(); ++k) {
      const auto idx = g.unflatten(k);
      double r2 = std::pow(g.coord(idx[0]) - x0, 2) + std::pow(g.coord(idx[1]) - y0, 2);
      if (g.dim() == 3) r2 += std::pow(g.coord(idx[2]) - z0, 2);
      f.values[k] += a * std::exp(-0.5 * r2);
    }
  }
  return f;
}

// cos(2 pi x_1 / L)
inline prnls::RealField cos_mode(const prnls::Grid& g) {
  prnls::RealField f(g);
  for (std::size_t k = 0; k < f.values.size(); ++k)
    f.values[k] = std::cos(2.0 * std::numbers::pi * g.coord(g.unflatten(k)[0]) / g.length());
  return f;
}

inline double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("prnls_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test
