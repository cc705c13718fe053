// Command-line driver. Talks to the solver only through the C API.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "prnls/prnls.h"

namespace {

struct ConfigDeleter {
  void operator()(prnls_config* c) const { prnls_config_free(c); }
};
struct StateDeleter {
  void operator()(prnls_ground_state* g) const { prnls_ground_state_free(g); }
};
struct SweepDeleter {
  void operator()(prnls_sweep* s) const { prnls_sweep_free(s); }
};
using ConfigPtr = std::unique_ptr<prnls_config, ConfigDeleter>;

int report_error(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, prnls_last_error());
  return 2;
}

ConfigPtr open_config(const std::string& path) {
  prnls_config* raw = nullptr;
  const prnls_status st =
      path.empty() ? prnls_config_default(&raw) : prnls_config_load(path.c_str(), &raw);
  if (st != PRNLS_OK) return nullptr;
  return ConfigPtr(raw);
}

double parse_c(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  return std::stod(text);
}

std::string stem_for(double c) {
  if (std::isinf(c)) return "u_inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "u_c%g", c);
  return buf;
}

int cmd_solve(const std::string& config, const std::string& c_text) {
  const ConfigPtr cfg = open_config(config);
  if (!cfg) return report_error("config");
  const double c = parse_c(c_text);
  prnls_ground_state* raw = nullptr;
  if (prnls_solve(cfg.get(), c, &raw) != PRNLS_OK) return report_error("solve");
  std::unique_ptr<prnls_ground_state, StateDeleter> gs(raw);

  prnls_energy_report rep{};
  prnls_ground_state_report(gs.get(), &rep);
  double scatter = 0.0, min_over_max = 0.0, boundary = 0.0;
  prnls_ground_state_diagnostics(gs.get(), &scatter, &min_over_max, &boundary);
  const int converged = prnls_ground_state_converged(gs.get());

  std::printf("c              %s\n", c_text.c_str());
  std::printf("converged      %s (%d iterations)\n", converged ? "yes" : "no",
              prnls_ground_state_iterations(gs.get()));
  std::printf("energy I       %.15g\n", rep.energy);
  std::printf("Q              %.15g\n", rep.quadratic);
  std::printf("||u||_p^p      %.15g\n", rep.lp);
  std::printf("Nehari J       %.3e\n", rep.nehari);
  std::printf("residual       %.3e\n", rep.residual);
  std::printf("identity gap   %.3e\n", rep.identity_gap);
  std::printf("radial scatter %.3e\n", scatter);
  std::printf("min/max        %.3e\n", min_over_max);
  std::printf("boundary/max   %.3e\n", boundary);
  if (boundary > 1e-10)
    std::fprintf(stderr, "warning: boundary values %.2e of max exceed 1e-10; enlarge L\n",
                 boundary);

  const std::filesystem::path out =
      std::filesystem::path(prnls_config_output_dir(cfg.get())) / (stem_for(c) + ".bin");
  if (prnls_ground_state_write(gs.get(), out.string().c_str()) != PRNLS_OK)
    return report_error("write");
  std::printf("snapshot       %s\n", out.string().c_str());

  const bool ok = converged && rep.identity_gap <= 1e-8 * std::abs(rep.energy) &&
                  std::abs(rep.nehari) <= 1e-8 * rep.quadratic &&
                  min_over_max >= -1e-10 && scatter <= 1e-6;
  return ok ? 0 : 1;
}

int cmd_sweep(const std::string& config) {
  const ConfigPtr cfg = open_config(config);
  if (!cfg) return report_error("config");
  prnls_sweep* raw = nullptr;
  if (prnls_sweep_run(cfg.get(), &raw) != PRNLS_OK) return report_error("sweep");
  std::unique_ptr<prnls_sweep, SweepDeleter> sweep(raw);

  std::printf("%8s %18s %18s %12s %10s %6s\n", "c", "I_c", "||u||_p^p", "err_H1",
              "residual", "iter");
  const size_t rows = prnls_sweep_row_count(sweep.get());
  for (size_t i = 0; i <= rows; ++i) {
    prnls_sweep_record r{};
    if (i < rows)
      prnls_sweep_row(sweep.get(), i, &r);
    else
      prnls_sweep_limit(sweep.get(), &r);
    std::printf("%8g %18.12g %18.12g %12.4e %10.2e %6d%s\n", r.c, r.energy, r.lp,
                r.err_h1, r.residual, r.iterations, r.converged ? "" : "  NOT CONVERGED");
  }
  std::printf("\n");
  const size_t checks = prnls_sweep_check_count(sweep.get());
  for (size_t i = 0; i < checks; ++i) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int passed = 0, finding = 0;
    prnls_sweep_check(sweep.get(), i, &name, &passed, &finding, &detail);
    std::printf("[%s] %s %s\n", passed ? "PASS" : (finding ? "NOTE" : "FAIL"), name, detail);
  }
  const char* dir = prnls_config_output_dir(cfg.get());
  if (prnls_sweep_write(sweep.get(), dir) != PRNLS_OK) return report_error("write");
  std::printf("\nwrote %s/sweep.csv\n", dir);
  return prnls_sweep_all_passed(sweep.get()) ? 0 : 1;
}

int cmd_extension(const std::string& config, const std::string& c_text) {
  const ConfigPtr cfg = open_config(config);
  if (!cfg) return report_error("config");
  const std::filesystem::path csv =
      std::filesystem::path(prnls_config_output_dir(cfg.get())) / "extension.csv";
  prnls_extension_summary s{};
  if (prnls_extension_check(cfg.get(), parse_c(c_text), csv.string().c_str(), &s) != PRNLS_OK)
    return report_error("extension-check");
  std::printf("per-mode equality gap   %.3e (<= 1e-12)\n", s.max_equality_gap);
  std::printf("min perturbed excess    %.3e (> 0)\n", s.min_perturbed_excess);
  std::printf("excess closed-form diff %.3e (<= 1e-12)\n", s.max_excess_mismatch);
  std::printf("Neumann consistency     %.3e (<= 1e-12)\n", s.neumann_gap);
  std::printf("summed energy gap       %.3e (<= 1e-10)\n", s.summed_gap);
  std::printf("wrote %s\n", csv.string().c_str());
  return s.passed ? 0 : 1;
}

int cmd_oracle(const std::string& config) {
  const ConfigPtr cfg = open_config(config);
  if (!cfg) return report_error("config");
  const std::filesystem::path csv =
      std::filesystem::path(prnls_config_output_dir(cfg.get())) / "oracle_profile.csv";
  prnls_oracle_summary s{};
  if (prnls_oracle_run(cfg.get(), csv.string().c_str(), &s) != PRNLS_OK)
    return report_error("oracle");
  std::printf("u0*                  %.15g\n", s.u0);
  std::printf("u(r_max)/u0          %.3e (<= 1e-8)\n", s.tail_ratio);
  std::printf("spectral deviation   %.3e (<= 1e-3)\n", s.spectral_deviation);
  std::printf("scaling closure      %.3e (<= 1e-6)\n", s.scaling_deviation);
  std::printf("wrote %s\n", csv.string().c_str());
  return s.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of the pseudo-relativistic NLS and their nonrelativistic limit"};
  app.require_subcommand(1);

  std::string config;
  std::string c_text = "1";

  auto* solve = app.add_subcommand("solve", "solve for the ground state at one light speed");
  solve->add_option("--c", c_text, "light speed (or 'inf' for the limit equation)")->required();
  solve->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "run the c-sweep and the limit comparison");
  sweep->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);

  auto* ext = app.add_subcommand("extension-check", "per-mode half-space extension checks");
  ext->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
  ext->add_option("--c", c_text, "light speed of the tested ground state");

  auto* oracle = app.add_subcommand("oracle", "radial shooting oracle for the limit state");
  oracle->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; every usage error exits 2.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return cmd_solve(config, c_text);
    if (*sweep) return cmd_sweep(config);
    if (*ext) return cmd_extension(config, c_text);
    if (*oracle) return cmd_oracle(config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
