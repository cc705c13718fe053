/*
 * C interface to the pseudo-relativistic NLS ground-state solver.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function. Every fallible call returns a prnls_status; on
 * failure prnls_last_error() describes the error for the calling thread.
 */
#ifndef PRNLS_H
#define PRNLS_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(PRNLS_BUILDING)
#    define PRNLS_API __declspec(dllexport)
#  else
#    define PRNLS_API __declspec(dllimport)
#  endif
#else
#  define PRNLS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prnls_status {
  PRNLS_OK = 0,
  PRNLS_ERR_INVALID_ARGUMENT = 1,
  PRNLS_ERR_CONFIG = 2,
  PRNLS_ERR_IO = 3,
  PRNLS_ERR_NUMERIC = 4,
  PRNLS_ERR_INTERNAL = 5
} prnls_status;

typedef struct prnls_config prnls_config;
typedef struct prnls_ground_state prnls_ground_state;
typedef struct prnls_sweep prnls_sweep;

typedef struct prnls_energy_report {
  double quadratic;    /* Q(u) */
  double lp;           /* ||u||_p^p */
  double energy;       /* I(u) */
  double nehari;       /* J(u) */
  double residual;     /* relative L2 residual */
  double identity_gap; /* |I - (1/2 - 1/p) ||u||_p^p| */
} prnls_energy_report;

typedef struct prnls_sweep_record {
  double c; /* +inf for the limit row */
  double energy;
  double lp;
  double l2_sq;
  double grad_sq;
  double hhalf;
  double err_h1;
  double residual;
  int iterations;
  double radial_scatter;
  double min_over_max;
  int converged;
} prnls_sweep_record;

typedef struct prnls_bounds {
  double lp_ratio;
  double limit_slack_relative;
  double cmax_slack_relative;
  double sup_energy;
  double hhalf_ratio;
} prnls_bounds;

typedef struct prnls_extension_summary {
  double max_equality_gap;
  double min_perturbed_excess;
  double max_excess_mismatch;
  double neumann_gap;
  double summed_gap;
  int passed;
} prnls_extension_summary;

typedef struct prnls_oracle_summary {
  double u0;                 /* shooting amplitude of the accepted profile */
  double tail_ratio;         /* u(r_max) / u0 */
  double spectral_deviation; /* binned sup deviation from the spectral limit state */
  double scaling_deviation;  /* scaling-map closure between two (m, mu) pairs */
  int passed;
} prnls_oracle_summary;

PRNLS_API const char* prnls_last_error(void);
PRNLS_API const char* prnls_version(void);

/* Configuration (JSON file; see README for keys). */
PRNLS_API prnls_status prnls_config_default(prnls_config** out);
PRNLS_API prnls_status prnls_config_load(const char* path, prnls_config** out);
PRNLS_API prnls_status prnls_config_parse(const char* json, prnls_config** out);
PRNLS_API void prnls_config_free(prnls_config* cfg);
PRNLS_API const char* prnls_config_output_dir(const prnls_config* cfg);
PRNLS_API prnls_status prnls_config_set_output_dir(prnls_config* cfg, const char* dir);

/* Ground state at light speed c; pass INFINITY for the limit equation. */
PRNLS_API prnls_status prnls_solve(const prnls_config* cfg, double c,
                                   prnls_ground_state** out);
PRNLS_API int prnls_ground_state_converged(const prnls_ground_state* gs);
PRNLS_API int prnls_ground_state_iterations(const prnls_ground_state* gs);
PRNLS_API prnls_status prnls_ground_state_report(const prnls_ground_state* gs,
                                                 prnls_energy_report* out);
PRNLS_API size_t prnls_ground_state_size(const prnls_ground_state* gs);
PRNLS_API prnls_status prnls_ground_state_values(const prnls_ground_state* gs,
                                                 double* buf, size_t len);
PRNLS_API prnls_status prnls_ground_state_diagnostics(const prnls_ground_state* gs,
                                                      double* radial_scatter,
                                                      double* min_over_max,
                                                      double* boundary_ratio);
/* Snapshot at path plus a JSON side-car at path + ".json". */
PRNLS_API prnls_status prnls_ground_state_write(const prnls_ground_state* gs,
                                                const char* path);
PRNLS_API void prnls_ground_state_free(prnls_ground_state* gs);

/* Nonrelativistic-limit sweep over the configured schedule. */
PRNLS_API prnls_status prnls_sweep_run(const prnls_config* cfg, prnls_sweep** out);
PRNLS_API size_t prnls_sweep_row_count(const prnls_sweep* s);
PRNLS_API prnls_status prnls_sweep_row(const prnls_sweep* s, size_t i,
                                       prnls_sweep_record* out);
PRNLS_API prnls_status prnls_sweep_limit(const prnls_sweep* s, prnls_sweep_record* out);
PRNLS_API prnls_status prnls_sweep_bounds(const prnls_sweep* s, prnls_bounds* out);
PRNLS_API size_t prnls_sweep_check_count(const prnls_sweep* s);
/* Strings stay valid until the sweep is freed. */
PRNLS_API prnls_status prnls_sweep_check(const prnls_sweep* s, size_t i,
                                         const char** name, int* passed,
                                         int* finding, const char** detail);
PRNLS_API int prnls_sweep_all_passed(const prnls_sweep* s);
PRNLS_API prnls_status prnls_sweep_write(const prnls_sweep* s, const char* dir);
PRNLS_API void prnls_sweep_free(prnls_sweep* s);

/* Per-mode extension checks on the ground state at c; csv_path may be NULL. */
PRNLS_API prnls_status prnls_extension_check(const prnls_config* cfg, double c,
                                             const char* csv_path,
                                             prnls_extension_summary* out);

/* Radial shooting oracle vs the spectral limit state; csv_path may be NULL. */
PRNLS_API prnls_status prnls_oracle_run(const prnls_config* cfg, const char* csv_path,
                                        prnls_oracle_summary* out);

/* Kinetic symbols at |xi|^2; NaN for invalid arguments. c may be INFINITY. */
PRNLS_API double prnls_relativistic_symbol(double xi_sq, double m, double c);
PRNLS_API double prnls_limit_symbol(double xi_sq, double m);

#ifdef __cplusplus
}
#endif

#endif /* PRNLS_H */
