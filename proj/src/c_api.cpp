#include "prnls/prnls.h"

#include <cmath>
#include <limits>
#include <new>
#include <string>

#include "io_util.hpp"
#include "prnls/config.hpp"
#include "prnls/error.hpp"
#include "prnls/extension.hpp"
#include "prnls/radial_oracle.hpp"
#include "prnls/sweep.hpp"

struct prnls_config {
  prnls::RunConfig cfg;
  std::string output_dir;
};

struct prnls_ground_state {
  prnls::GroundState gs;
};

struct prnls_sweep {
  prnls::SweepResult result;
};

namespace {

thread_local std::string g_last_error;

prnls_status status_of(prnls::ErrorKind kind) {
  switch (kind) {
    case prnls::ErrorKind::invalid_argument: return PRNLS_ERR_INVALID_ARGUMENT;
    case prnls::ErrorKind::config: return PRNLS_ERR_CONFIG;
    case prnls::ErrorKind::io: return PRNLS_ERR_IO;
    case prnls::ErrorKind::numeric: return PRNLS_ERR_NUMERIC;
  }
  return PRNLS_ERR_INTERNAL;
}

template <class Fn>
prnls_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PRNLS_OK;
  } catch (const prnls::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return PRNLS_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) prnls::fail(prnls::ErrorKind::invalid_argument, what);
}

prnls_sweep_record to_c(const prnls::SweepRecord& r) {
  return {r.c,        r.energy,   r.lp,         r.l2_sq,          r.grad_sq,
          r.hhalf,    r.err_h1,   r.residual,   r.iterations,     r.radial_scatter,
          r.min_over_max, r.converged ? 1 : 0};
}

prnls::GroundState solve_at(const prnls::RunConfig& cfg, double c) {
  const prnls::Grid grid = cfg.grid();
  const prnls::PhysParams params = cfg.params_at(c);
  const auto M = std::isinf(c) ? prnls::Multiplier::limit(grid, params)
                               : prnls::Multiplier::relativistic(grid, params);
  return cfg.method == prnls::SolveMethod::gradient
             ? prnls::projected_gradient_solve(M, cfg.solver)
             : prnls::solve_with_fallback(M, cfg.solver);
}

}  // namespace

extern "C" {

const char* prnls_last_error(void) { return g_last_error.c_str(); }

const char* prnls_version(void) { return "1.0.0"; }

prnls_status prnls_config_default(prnls_config** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    auto* h = new prnls_config{};
    h->output_dir = h->cfg.output_dir.string();
    *out = h;
  });
}

prnls_status prnls_config_load(const char* path, prnls_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto cfg = prnls::load_config(path);
    auto* h = new prnls_config{std::move(cfg), {}};
    h->output_dir = h->cfg.output_dir.string();
    *out = h;
  });
}

prnls_status prnls_config_parse(const char* json, prnls_config** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    auto cfg = prnls::parse_config(json);
    auto* h = new prnls_config{std::move(cfg), {}};
    h->output_dir = h->cfg.output_dir.string();
    *out = h;
  });
}

void prnls_config_free(prnls_config* cfg) { delete cfg; }

const char* prnls_config_output_dir(const prnls_config* cfg) {
  return cfg ? cfg->output_dir.c_str() : "";
}

prnls_status prnls_config_set_output_dir(prnls_config* cfg, const char* dir) {
  return guarded([&] {
    require(cfg != nullptr && dir != nullptr, "null argument");
    cfg->cfg.output_dir = dir;
    cfg->output_dir = dir;
  });
}

prnls_status prnls_solve(const prnls_config* cfg, double c, prnls_ground_state** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "null argument");
    require(c >= 1.0, "c must be >= 1 (or INFINITY)");
    *out = new prnls_ground_state{solve_at(cfg->cfg, c)};
  });
}

int prnls_ground_state_converged(const prnls_ground_state* gs) {
  return gs && gs->gs.converged ? 1 : 0;
}

int prnls_ground_state_iterations(const prnls_ground_state* gs) {
  return gs ? gs->gs.iterations : 0;
}

prnls_status prnls_ground_state_report(const prnls_ground_state* gs,
                                       prnls_energy_report* out) {
  return guarded([&] {
    require(gs != nullptr && out != nullptr, "null argument");
    const auto& r = gs->gs.report;
    *out = {r.quadratic, r.lp, r.energy, r.nehari, r.residual, r.identity_gap};
  });
}

size_t prnls_ground_state_size(const prnls_ground_state* gs) {
  return gs ? gs->gs.field.values.size() : 0;
}

prnls_status prnls_ground_state_values(const prnls_ground_state* gs, double* buf,
                                       size_t len) {
  return guarded([&] {
    require(gs != nullptr && buf != nullptr, "null argument");
    const auto& v = gs->gs.field.values;
    require(len >= v.size(), "buffer too small");
    std::copy(v.begin(), v.end(), buf);
  });
}

prnls_status prnls_ground_state_diagnostics(const prnls_ground_state* gs,
                                            double* radial_scatter,
                                            double* min_over_max,
                                            double* boundary_ratio) {
  return guarded([&] {
    require(gs != nullptr, "null argument");
    const auto& f = gs->gs.field;
    if (radial_scatter) *radial_scatter = prnls::radial_scatter(f);
    if (min_over_max) *min_over_max = f.max() > 0.0 ? f.min() / f.max() : 0.0;
    if (boundary_ratio) *boundary_ratio = gs->gs.boundary_ratio;
  });
}

prnls_status prnls_ground_state_write(const prnls_ground_state* gs, const char* path) {
  return guarded([&] {
    require(gs != nullptr && path != nullptr, "null argument");
    prnls::write_ground_state(path, gs->gs);
  });
}

void prnls_ground_state_free(prnls_ground_state* gs) { delete gs; }

prnls_status prnls_sweep_run(const prnls_config* cfg, prnls_sweep** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "null argument");
    *out = new prnls_sweep{prnls::run_sweep(cfg->cfg)};
  });
}

size_t prnls_sweep_row_count(const prnls_sweep* s) {
  return s ? s->result.records.size() : 0;
}

prnls_status prnls_sweep_row(const prnls_sweep* s, size_t i, prnls_sweep_record* out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    require(i < s->result.records.size(), "row index out of range");
    *out = to_c(s->result.records[i]);
  });
}

prnls_status prnls_sweep_limit(const prnls_sweep* s, prnls_sweep_record* out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    *out = to_c(s->result.limit);
  });
}

prnls_status prnls_sweep_bounds(const prnls_sweep* s, prnls_bounds* out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    const auto& b = s->result.bounds;
    *out = {b.lp_ratio, b.limit_slack_relative,
            b.slack_relative.empty() ? 0.0 : b.slack_relative.back(), b.sup_energy,
            b.hhalf_ratio};
  });
}

size_t prnls_sweep_check_count(const prnls_sweep* s) {
  return s ? s->result.checks.size() : 0;
}

prnls_status prnls_sweep_check(const prnls_sweep* s, size_t i, const char** name,
                               int* passed, int* finding, const char** detail) {
  return guarded([&] {
    require(s != nullptr, "null argument");
    require(i < s->result.checks.size(), "check index out of range");
    const auto& c = s->result.checks[i];
    if (name) *name = c.name.c_str();
    if (passed) *passed = c.passed ? 1 : 0;
    if (finding) *finding = c.finding ? 1 : 0;
    if (detail) *detail = c.detail.c_str();
  });
}

int prnls_sweep_all_passed(const prnls_sweep* s) {
  return s && s->result.all_passed() ? 1 : 0;
}

prnls_status prnls_sweep_write(const prnls_sweep* s, const char* dir) {
  return guarded([&] {
    require(s != nullptr && dir != nullptr, "null argument");
    prnls::emit(s->result, dir);
  });
}

void prnls_sweep_free(prnls_sweep* s) { delete s; }

prnls_status prnls_extension_check(const prnls_config* cfg, double c,
                                   const char* csv_path, prnls_extension_summary* out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "null argument");
    require(std::isfinite(c), "extension check needs a finite c");
    const prnls::GroundState gs = solve_at(cfg->cfg, c);
    const auto rep = prnls::extension_check(gs.field, gs.params);
    if (csv_path) prnls::detail::write_atomic(csv_path, prnls::extension_csv(rep));
    *out = {rep.max_equality_gap, rep.min_perturbed_excess, rep.max_excess_mismatch,
            rep.neumann_gap,      rep.summed_gap,           rep.passed ? 1 : 0};
  });
}

prnls_status prnls_oracle_run(const prnls_config* cfg, const char* csv_path,
                              prnls_oracle_summary* out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "null argument");
    const auto& rc = cfg->cfg;
    const double inf = std::numeric_limits<double>::infinity();
    const prnls::PhysParams params = rc.params_at(inf);
    const prnls::RadialProfile prof = prnls::ground_profile(params, rc.oracle);
    if (csv_path) prnls::detail::write_atomic(csv_path, prnls::profile_csv(prof));

    const prnls::GroundState gs = solve_at(rc, inf);
    prnls::PhysParams ref = params;
    ref.m = 0.5;
    ref.mu = 1.0;
    if (ref.m == params.m && ref.mu == params.mu) {
      ref.m = 2.0;
      ref.mu = 0.5;
    }
    out->u0 = prof.u0;
    out->tail_ratio = prof.values.back() / prof.u0;
    out->spectral_deviation = prnls::compare_profiles(gs, prof);
    out->scaling_deviation = prnls::scaling_closure(ref, params, rc.oracle);
    out->passed = gs.converged && out->tail_ratio <= 1e-8 &&
                  out->spectral_deviation <= 1e-3 && out->scaling_deviation <= 1e-6;
  });
}

double prnls_relativistic_symbol(double xi_sq, double m, double c) {
  if (!(xi_sq >= 0.0) || !(m > 0.0) || !(c >= 1.0)) return std::nan("");
  prnls::PhysParams p;
  p.m = m;
  p.c = c;
  return prnls::relativistic_symbol(xi_sq, p);
}

double prnls_limit_symbol(double xi_sq, double m) {
  if (!(xi_sq >= 0.0) || !(m > 0.0)) return std::nan("");
  prnls::PhysParams p;
  p.m = m;
  return prnls::limit_symbol(xi_sq, p);
}

}  // extern "C"
