#pragma once

// Nonrelativistic-limit experiment: ground states u_c along a schedule of
// light speeds, the limit state u_inf, and the diagnostics comparing them.

#include <filesystem>
#include <string>
#include <vector>

#include "prnls/config.hpp"
#include "prnls/solver.hpp"

namespace prnls {

struct SweepRecord {
  double c = 0.0;  // +inf for the limit row
  double energy = 0.0;
  double lp = 0.0;       // ||u||_p^p
  double l2_sq = 0.0;    // ||u||_2^2
  double grad_sq = 0.0;  // ||grad u||_2^2
  double hhalf = 0.0;    // ||u||_{H^1/2}
  double err_h1 = 0.0;   // ||u_c - u_inf||_{H^1}
  double residual = 0.0;
  int iterations = 0;
  double radial_scatter = 0.0;
  double min_over_max = 0.0;
  bool converged = false;
};

struct BoundsReport {
  /// max / min of ||u_c||_p^p over converged rows
  double lp_ratio = 0.0;
  /// 2m ||u||_p^p - (||grad u||^2 + 2 m mu ||u||^2), per row
  std::vector<double> slack;
  /// same, divided by 2m ||u||_p^p
  std::vector<double> slack_relative;
  double limit_slack_relative = 0.0;
  double sup_energy = 0.0;
  /// max_c ||u_c||_{H^1/2} / ||u_inf||_{H^1/2}
  double hhalf_ratio = 0.0;
};

struct SweepCheck {
  std::string name;
  bool passed = false;
  /// findings are reported but do not fail the run
  bool finding = false;
  std::string detail;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  SweepRecord limit;
  std::vector<GroundState> states;  // parallel to records
  GroundState limit_state;
  BoundsReport bounds;
  /// H^1 distance between the warm-started and a cold-started solve at c_max
  double cold_start_distance = 0.0;
  std::vector<SweepCheck> checks;

  bool all_passed() const;
};

SweepRecord make_record(const GroundState& gs, const RealField* limit_field);

/// Throws Error(invalid_argument) with fewer than two converged rows.
BoundsReport check_uniform_bounds(const std::vector<SweepRecord>& records,
                                  const SweepRecord& limit, const PhysParams& params);

SweepResult run_sweep(const RunConfig& cfg);

/// CSV in SweepRecord field order, one row per record.
std::string sweep_csv(const std::vector<SweepRecord>& records);
std::string sweep_json(const SweepResult& result);
std::string ground_state_json(const GroundState& gs);

/// sweep.csv, sweep.json and one snapshot (+ JSON side-car) per state.
void emit(const SweepResult& result, const std::filesystem::path& dir);

/// Snapshot plus "<path>.json" side-car with the EnergyReport.
void write_ground_state(const std::filesystem::path& path, const GroundState& gs);

/// File stem used for the snapshot of the state at light speed c.
std::string snapshot_stem(double c);

}  // namespace prnls
