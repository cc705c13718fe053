#include "prnls/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "io_util.hpp"
#include "prnls/error.hpp"

namespace prnls {

bool SweepResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const SweepCheck& c) { return c.passed || c.finding; });
}

SweepRecord make_record(const GroundState& gs, const RealField* limit_field) {
  SweepRecord r;
  const RealField& u = gs.field;
  r.c = gs.params.c;
  r.energy = gs.report.energy;
  r.lp = gs.report.lp;
  r.l2_sq = inner(u, u);
  r.grad_sq = spectral_sum(to_spectral(u), [](double s) { return s; });
  r.hhalf = norm_hhalf(u);
  r.err_h1 = limit_field ? norm_h1(add(u, *limit_field, -1.0)) : 0.0;
  r.residual = gs.report.residual;
  r.iterations = gs.iterations;
  r.radial_scatter = radial_scatter(u);
  const double peak = u.max();
  r.min_over_max = peak > 0.0 ? u.min() / peak : 0.0;
  r.converged = gs.converged;
  return r;
}

namespace {

double slack_of(const SweepRecord& r, const PhysParams& P) {
  return 2.0 * P.m * r.lp - (r.grad_sq + 2.0 * P.m * P.mu * r.l2_sq);
}

void fill_slack(BoundsReport& b, const std::vector<SweepRecord>& records,
                const SweepRecord& limit, const PhysParams& P) {
  b.slack.clear();
  b.slack_relative.clear();
  for (const auto& r : records) {
    const double s = slack_of(r, P);
    b.slack.push_back(s);
    b.slack_relative.push_back(s / (2.0 * P.m * r.lp));
  }
  b.limit_slack_relative = slack_of(limit, P) / (2.0 * P.m * limit.lp);
}

}  // namespace

BoundsReport check_uniform_bounds(const std::vector<SweepRecord>& records,
                                  const SweepRecord& limit, const PhysParams& params) {
  std::vector<const SweepRecord*> ok;
  for (const auto& r : records)
    if (r.converged) ok.push_back(&r);
  if (ok.size() < 2)
    fail(ErrorKind::invalid_argument, "uniform bounds need at least two converged rows");

  BoundsReport b;
  double lo = INFINITY;
  double hi = 0.0;
  b.sup_energy = -INFINITY;
  for (const auto* r : ok) {
    lo = std::min(lo, r->lp);
    hi = std::max(hi, r->lp);
    b.sup_energy = std::max(b.sup_energy, r->energy);
    if (limit.hhalf > 0.0) b.hhalf_ratio = std::max(b.hhalf_ratio, r->hhalf / limit.hhalf);
  }
  b.lp_ratio = hi / lo;
  fill_slack(b, records, limit, params);
  return b;
}

namespace {

SweepCheck check(std::string name, bool passed, std::string detail,
                 bool finding = false) {
  return {std::move(name), passed, finding, std::move(detail)};
}

std::vector<SweepCheck> evaluate_checks(const SweepResult& s, const RunConfig& cfg) {
  std::vector<SweepCheck> out;
  const auto& rows = s.records;
  const auto& lim = s.limit;
  const double tol = cfg.solver.tol_residual;

  bool all_conv = lim.converged;
  for (const auto& r : rows) all_conv = all_conv && r.converged;
  out.push_back(check("all_converged", all_conv, ""));

  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    decreasing = decreasing && rows[i].err_h1 < rows[i - 1].err_h1;
  out.push_back(check("err_strictly_decreasing", decreasing, "", true));

  bool last_min = true;
  for (const auto& r : rows) last_min = last_min && rows.back().err_h1 <= r.err_h1;
  out.push_back(check("err_cmax_is_minimum", last_min, ""));

  const double limit_h1 = norm_h1(s.limit_state.field);
  const double final_rel = rows.back().err_h1 / limit_h1;
  out.push_back(check("err_cmax_relative", final_rel <= 1e-2,
                      fmt::format("{:.3e} <= 1e-2", final_rel)));

  std::string ratios;
  bool ratios_ok = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].c < 8.0 || rows[i].c != 2.0 * rows[i - 1].c) continue;
    const double q = rows[i].err_h1 / rows[i - 1].err_h1;
    ratios += fmt::format("{}{:.4f}", ratios.empty() ? "" : " ", q);
    ratios_ok = ratios_ok && q >= 0.2 && q <= 0.35;
  }
  out.push_back(check("err_ratio_in_0.2_0.35", ratios_ok, ratios, true));

  std::vector<const SweepRecord*> all;
  for (const auto& r : rows) all.push_back(&r);
  all.push_back(&lim);
  bool nehari_ok = true;
  bool positive = true;
  bool radial = true;
  double worst_scatter = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const SweepRecord& r = *all[i];
    if (!r.converged) continue;
    const GroundState& gs = i < rows.size() ? s.states[i] : s.limit_state;
    const auto& rep = gs.report;
    nehari_ok = nehari_ok && rep.identity_gap <= 1e-8 * std::abs(rep.energy) &&
                std::abs(rep.nehari) <= 1e-8 * rep.quadratic && r.residual <= tol;
    positive = positive && r.min_over_max >= -1e-10;
    radial = radial && r.radial_scatter <= 1e-6;
    worst_scatter = std::max(worst_scatter, r.radial_scatter);
  }
  out.push_back(check("nehari_identity", nehari_ok, ""));
  out.push_back(check("positivity", positive, ""));
  out.push_back(check("radial_symmetry", radial, fmt::format("max scatter {:.3e}", worst_scatter)));

  bool ordered = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    ordered = ordered && rows[i].energy >= rows[i - 1].energy;
  const double slack_tol = 1e-8 * std::abs(lim.energy);
  ordered = ordered && rows.back().energy <= lim.energy + slack_tol;
  out.push_back(check("energy_monotone_and_bounded", ordered, ""));

  const auto& b = s.bounds;
  out.push_back(check("lp_ratio", b.lp_ratio <= 2.0, fmt::format("{:.4f} <= 2", b.lp_ratio)));
  out.push_back(check("hhalf_bounded", b.hhalf_ratio <= 2.0,
                      fmt::format("{:.4f} <= 2", b.hhalf_ratio)));
  out.push_back(check("limit_h1_identity", std::abs(b.limit_slack_relative) <= 1e-6,
                      fmt::format("{:.3e}", b.limit_slack_relative)));
  out.push_back(check("h1_slack_cmax", b.slack_relative.back() >= -0.05,
                      fmt::format("{:.3e} >= -0.05", b.slack_relative.back())));
  out.push_back(check("cold_start_agreement", s.cold_start_distance <= 1e-6 * limit_h1,
                      fmt::format("{:.3e}", s.cold_start_distance)));
  return out;
}

GroundState run_solver(const Multiplier& M, const SolverConfig& sc, SolveMethod method) {
  return method == SolveMethod::gradient ? projected_gradient_solve(M, sc)
                                         : solve_with_fallback(M, sc);
}

}  // namespace

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const Grid grid = cfg.grid();
  SolverConfig cold = cfg.solver;
  cold.init_field.reset();

  const PhysParams limit_params = cfg.params_at(std::numeric_limits<double>::infinity());
  GroundState limit_state = run_solver(Multiplier::limit(grid, limit_params), cold, cfg.method);
  SweepRecord limit = make_record(limit_state, &limit_state.field);
  SweepResult out{{}, limit, {}, std::move(limit_state), {}, 0.0, {}};

  SolverConfig warm = cold;
  for (double c : cfg.c_schedule) {
    const Multiplier M = Multiplier::relativistic(grid, cfg.params_at(c));
    GroundState gs = run_solver(M, warm, cfg.method);
    out.records.push_back(make_record(gs, &out.limit_state.field));
    if (gs.converged) warm.init_field = gs.field;
    out.states.push_back(std::move(gs));
  }

  const Multiplier Mmax = Multiplier::relativistic(grid, cfg.params_at(cfg.c_schedule.back()));
  const GroundState cold_state = run_solver(Mmax, cold, cfg.method);
  out.cold_start_distance = norm_h1(add(cold_state.field, out.states.back().field, -1.0));

  if (std::count_if(out.records.begin(), out.records.end(),
                    [](const SweepRecord& r) { return r.converged; }) >= 2) {
    out.bounds = check_uniform_bounds(out.records, out.limit, cfg.params);
    out.checks = evaluate_checks(out, cfg);
  } else {
    out.checks.push_back(check("all_converged", false, "fewer than two converged rows"));
  }
  return out;
}

namespace {

constexpr const char* kCsvHeader =
    "c,energy,lp,l2_sq,grad_sq,hhalf,err_h1,residual,iterations,"
    "radial_scatter,min_over_max,converged\n";

nlohmann::json record_json(const SweepRecord& r) {
  nlohmann::json j;
  if (std::isinf(r.c))
    j["c"] = "inf";
  else
    j["c"] = r.c;
  j["energy"] = r.energy;
  j["lp"] = r.lp;
  j["l2_sq"] = r.l2_sq;
  j["grad_sq"] = r.grad_sq;
  j["hhalf"] = r.hhalf;
  j["err_h1"] = r.err_h1;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["radial_scatter"] = r.radial_scatter;
  j["min_over_max"] = r.min_over_max;
  j["converged"] = r.converged;
  return j;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  using detail::format_double;
  std::string out = kCsvHeader;
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", format_double(r.c),
                       format_double(r.energy), format_double(r.lp),
                       format_double(r.l2_sq), format_double(r.grad_sq),
                       format_double(r.hhalf), format_double(r.err_h1),
                       format_double(r.residual), r.iterations,
                       format_double(r.radial_scatter), format_double(r.min_over_max),
                       r.converged ? 1 : 0);
  }
  return out;
}

std::string sweep_json(const SweepResult& result) {
  nlohmann::json j;
  j["records"] = nlohmann::json::array();
  for (const auto& r : result.records) j["records"].push_back(record_json(r));
  j["limit"] = record_json(result.limit);
  const auto& b = result.bounds;
  j["bounds"] = {{"lp_ratio", b.lp_ratio},
                 {"slack", b.slack},
                 {"slack_relative", b.slack_relative},
                 {"limit_slack_relative", b.limit_slack_relative},
                 {"sup_energy", b.sup_energy},
                 {"hhalf_ratio", b.hhalf_ratio}};
  j["cold_start_distance"] = result.cold_start_distance;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : result.checks)
    j["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"finding", c.finding}, {"detail", c.detail}});
  j["all_passed"] = result.all_passed();
  return j.dump(2) + "\n";
}

std::string ground_state_json(const GroundState& gs) {
  nlohmann::json j;
  if (std::isinf(gs.params.c))
    j["c"] = "inf";
  else
    j["c"] = gs.params.c;
  j["converged"] = gs.converged;
  j["iterations"] = gs.iterations;
  j["boundary_ratio"] = gs.boundary_ratio;
  const auto& r = gs.report;
  j["report"] = {{"Q", r.quadratic}, {"lp", r.lp},       {"I", r.energy},
                 {"J", r.nehari},    {"residual", r.residual}, {"identity_gap", r.identity_gap}};
  return j.dump(2) + "\n";
}

std::string snapshot_stem(double c) {
  return std::isinf(c) ? std::string("u_inf") : fmt::format("u_c{}", c);
}

void write_ground_state(const std::filesystem::path& path, const GroundState& gs) {
  write_snapshot(path, gs.field, gs.params);
  auto side = path;
  side += ".json";
  detail::write_atomic(side, ground_state_json(gs));
}

void emit(const SweepResult& result, const std::filesystem::path& dir) {
  detail::write_atomic(dir / "sweep.csv", sweep_csv(result.records));
  detail::write_atomic(dir / "sweep.json", sweep_json(result));
  for (const auto& gs : result.states)
    write_ground_state(dir / (snapshot_stem(gs.params.c) + ".bin"), gs);
  write_ground_state(dir / (snapshot_stem(INFINITY) + ".bin"), result.limit_state);
}

}  // namespace prnls
