#pragma once

// Run configuration, read from a single JSON file:
//
// {
//   "physics":  {"m": 1, "mu": 1, "p": 3, "n": 2},
//   "grid":     {"L": 32, "N": 256},
//   "schedule": {"c": [1, 2, 4, 8, 16, 32]},
//   "solver":   {"method": "petviashvili", "tol_residual": 1e-9,
//                "max_iter": 10000, "gamma": 2, "init_width": 2,
//                "fallback_step": 0.5},
//   "oracle":   {"r_max": 30, "dr": 1e-3},
//   "output":   {"dir": "out"}
// }
//
// Every key is optional; missing keys take the defaults shown (gamma defaults
// to (p-1)/(p-2)).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "prnls/model.hpp"
#include "prnls/radial_oracle.hpp"
#include "prnls/solver.hpp"

namespace prnls {

enum class SolveMethod { petviashvili, gradient };

struct RunConfig {
  /// c is ignored; the schedule supplies it.
  PhysParams params;
  std::vector<double> c_schedule{1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  double box_length = 32.0;
  int points = 256;
  SolverConfig solver;
  SolveMethod method = SolveMethod::petviashvili;
  OracleConfig oracle;
  std::filesystem::path output_dir = "out";

  /// Throws Error(config).
  void validate() const;
  Grid grid() const;
  PhysParams params_at(double c) const;
};

RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace prnls
