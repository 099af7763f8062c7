/*
 * kramers: underdamped / overdamped Langevin simulation and least-squares
 * drift estimation.
 *
 * C interface to the shared library. Every function returns a kramers_status;
 * on failure a message for the calling thread is available from
 * kramers_last_error(). Objects are opaque handles created by *_create / *_run
 * functions and released with the matching *_destroy, which accept NULL.
 */
#ifndef KRAMERS_KRAMERS_H
#define KRAMERS_KRAMERS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KRAMERS_BUILDING)
#    define KRAMERS_API __declspec(dllexport)
#  else
#    define KRAMERS_API __declspec(dllimport)
#  endif
#else
#  define KRAMERS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kramers_status {
  KRAMERS_OK = 0,
  KRAMERS_ERR_INVALID_ARGUMENT = 1,
  KRAMERS_ERR_PRECONDITION = 2,
  KRAMERS_ERR_DIVERGENCE = 3,
  KRAMERS_ERR_IDENTIFIABILITY = 4,
  KRAMERS_ERR_MODEL_EVALUATION = 5,
  KRAMERS_ERR_IO = 6,
  KRAMERS_ERR_INTERNAL = 7
} kramers_status;

/* Message describing the last failure on this thread ("" if none). */
KRAMERS_API const char* kramers_last_error(void);
KRAMERS_API const char* kramers_status_string(kramers_status status);
KRAMERS_API const char* kramers_version(void);

/* ------------------------------------------------------------------------ */
/* Drift models b(x, theta), one-dimensional.                               */

typedef struct kramers_model kramers_model;

/* theta * exp(-x / 18) - g_eff (units g, nm, s). */
KRAMERS_API kramers_status kramers_model_create_colloidal(kramers_model** out);
/* -theta * x */
KRAMERS_API kramers_status kramers_model_create_ou(kramers_model** out);
/* theta * slope + offset, independent of x. */
KRAMERS_API kramers_status kramers_model_create_affine(double slope, double offset, kramers_model** out);
KRAMERS_API kramers_status kramers_model_create_zero_drift(kramers_model** out);
KRAMERS_API void kramers_model_destroy(kramers_model* model);

KRAMERS_API kramers_status kramers_model_eval(const kramers_model* model, double x, double theta, double* out);
/* 1 when b is linear in theta (closed-form estimation available). */
KRAMERS_API int kramers_model_is_linear(const kramers_model* model);
KRAMERS_API double kramers_colloidal_g_eff(void);

/* ------------------------------------------------------------------------ */
/* Simulation                                                               */

typedef struct kramers_system_params {
  double mass;     /* mu > 0 */
  double friction; /* gamma > 0 */
  double noise;    /* sigma >= 0 */
  double x0;
  double v0;
} kramers_system_params;

/* n intervals of width dt, each integrated with `substeps` internal steps. */
typedef struct kramers_grid_spec {
  size_t n;
  double dt;
  size_t substeps;
} kramers_grid_spec;

typedef enum kramers_scheme {
  KRAMERS_SCHEME_EXPONENTIAL_VELOCITY = 0,
  KRAMERS_SCHEME_EULER_MARUYAMA = 1
} kramers_scheme;

typedef enum kramers_mode {
  KRAMERS_MODE_UNDERDAMPED = 0,
  KRAMERS_MODE_OVERDAMPED = 1
} kramers_mode;

typedef struct kramers_trajectory kramers_trajectory;

/* Noise is the substream (seed, stream_id) of the library's counter-based
 * generator; identical inputs give bit-identical trajectories. */
KRAMERS_API kramers_status kramers_simulate(const kramers_model* model, double theta,
                                            const kramers_system_params* params, const kramers_grid_spec* grid,
                                            kramers_scheme scheme, kramers_mode mode, uint64_t seed,
                                            uint64_t stream_id, kramers_trajectory** out);

/* Both equations on one noise path. Either output pointer may be NULL. */
KRAMERS_API kramers_status kramers_simulate_coupled(const kramers_model* model, double theta,
                                                    const kramers_system_params* params,
                                                    const kramers_grid_spec* grid, kramers_scheme scheme,
                                                    uint64_t seed, uint64_t stream_id,
                                                    kramers_trajectory** underdamped,
                                                    kramers_trajectory** overdamped, double* sup_distance);

/* Observations only (no velocities); times must start at 0 and increase. */
KRAMERS_API kramers_status kramers_trajectory_create(const double* times, const double* positions, size_t count,
                                                     kramers_trajectory** out);
KRAMERS_API void kramers_trajectory_destroy(kramers_trajectory* traj);
KRAMERS_API size_t kramers_trajectory_size(const kramers_trajectory* traj);
KRAMERS_API int kramers_trajectory_has_velocities(const kramers_trajectory* traj);
/* Copies up to `capacity` values; any destination may be NULL. */
KRAMERS_API kramers_status kramers_trajectory_copy(const kramers_trajectory* traj, double* times, double* positions,
                                                   double* velocities, size_t capacity);
KRAMERS_API kramers_status kramers_trajectory_write_csv(const kramers_trajectory* traj, const char* path);
KRAMERS_API kramers_status kramers_trajectory_read_csv(const char* path, kramers_trajectory** out);
KRAMERS_API kramers_status kramers_sup_distance(const kramers_trajectory* a, const kramers_trajectory* b,
                                                double* out);

/* ------------------------------------------------------------------------ */
/* Estimation                                                               */

typedef enum kramers_method {
  KRAMERS_METHOD_CLOSED_FORM = 0,
  KRAMERS_METHOD_GOLDEN_SECTION = 1
} kramers_method;

typedef struct kramers_estimate {
  double theta_hat;
  double objective_at_min;
  kramers_method method;
  int at_boundary;
  int evaluations;
} kramers_estimate;

KRAMERS_API kramers_status kramers_objective(const kramers_trajectory* traj, const kramers_model* model,
                                             double friction, double theta, double* out);
KRAMERS_API kramers_status kramers_estimate_closed_form(const kramers_trajectory* traj, const kramers_model* model,
                                                        double friction, double lo, double hi,
                                                        kramers_estimate* out);
KRAMERS_API kramers_status kramers_estimate_golden(const kramers_trajectory* traj, const kramers_model* model,
                                                   double friction, double lo, double hi, double tol,
                                                   kramers_estimate* out);
KRAMERS_API kramers_status kramers_uniform_objective_gap(const kramers_trajectory* underdamped,
                                                         const kramers_trajectory* overdamped,
                                                         const kramers_model* model, double friction, double lo,
                                                         double hi, int grid_points, double* out);

typedef struct kramers_curve kramers_curve;

KRAMERS_API kramers_status kramers_curve_create(const kramers_trajectory* traj, const kramers_model* model,
                                                double friction, double lo, double hi, int points,
                                                kramers_curve** out);
KRAMERS_API void kramers_curve_destroy(kramers_curve* curve);
KRAMERS_API size_t kramers_curve_size(const kramers_curve* curve);
KRAMERS_API kramers_status kramers_curve_point(const kramers_curve* curve, size_t index, double* theta,
                                               double* objective);
KRAMERS_API kramers_status kramers_curve_write_csv(const kramers_curve* curve, const char* path);

/* ------------------------------------------------------------------------ */
/* Experiments                                                              */

typedef struct kramers_figure1_config {
  double friction;
  double noise;
  double theta_true;
  double mass;
  double x0;
  double v0;
  size_t n;
  double dt;
  size_t substeps;
  kramers_scheme scheme;
  kramers_mode mode;
  double lo, hi; /* parameter space */
  double tol;
  double curve_lo, curve_hi;
  int curve_points;
} kramers_figure1_config;

/* gamma = 1/6, sigma = 10, theta = 0.02, mu = 1e-3, n = 1e5, dt = 0.01, ... */
KRAMERS_API void kramers_figure1_default_config(kramers_figure1_config* cfg);

/* Outputs may be NULL when not wanted. */
KRAMERS_API kramers_status kramers_figure1_run(const kramers_figure1_config* cfg, uint64_t seed,
                                               kramers_trajectory** trajectory, kramers_curve** curve,
                                               kramers_estimate* estimate);

typedef enum kramers_model_id {
  KRAMERS_MODEL_COLLOIDAL = 0,
  KRAMERS_MODEL_OU = 1
} kramers_model_id;

typedef struct kramers_sweep_config {
  const double* mu_values;
  size_t mu_count;
  const size_t* n_values;
  size_t n_count;
  double delta; /* horizon T = delta * sqrt(n) */
  size_t replicates;
  uint64_t base_seed;
  kramers_model_id model_id;
  double theta_true;
  double lo, hi;
  double friction;
  double noise;
  double x0;
  double v0;
  size_t substeps;
  kramers_scheme scheme;
  int diagnostics;
  int gap_points;
  unsigned threads; /* 0: all hardware threads */
} kramers_sweep_config;

/* Fills every field except the value arrays (set to NULL / 0). */
KRAMERS_API void kramers_sweep_default_config(kramers_model_id model, kramers_sweep_config* cfg);

typedef struct kramers_sweep_result kramers_sweep_result;

typedef struct kramers_sweep_row {
  double mu;
  size_t n;
  size_t replicate;
  double theta_hat;
  double abs_error;
  int ok;
} kramers_sweep_row;

typedef struct kramers_sweep_summary_row {
  double mu;
  size_t n;
  size_t ok;
  size_t failed;
  double median_abs_error;
  double bootstrap_se;
} kramers_sweep_summary_row;

KRAMERS_API kramers_status kramers_sweep_run(const kramers_sweep_config* cfg, kramers_sweep_result** out);
KRAMERS_API void kramers_sweep_destroy(kramers_sweep_result* result);
KRAMERS_API size_t kramers_sweep_row_count(const kramers_sweep_result* result);
KRAMERS_API size_t kramers_sweep_failure_count(const kramers_sweep_result* result);
KRAMERS_API kramers_status kramers_sweep_row_get(const kramers_sweep_result* result, size_t index,
                                                 kramers_sweep_row* row);
/* Error message of a failed row ("" for successful rows). */
KRAMERS_API const char* kramers_sweep_row_error(const kramers_sweep_result* result, size_t index);
KRAMERS_API size_t kramers_sweep_summary_count(const kramers_sweep_result* result);
KRAMERS_API kramers_status kramers_sweep_summary_get(const kramers_sweep_result* result, size_t index,
                                                     kramers_sweep_summary_row* row);
/* Columns mu,n,replicate,theta_hat,abs_error. */
KRAMERS_API kramers_status kramers_sweep_write_csv(const kramers_sweep_result* result, const char* path);
/* Columns mu,n,sup_distance,uniform_gap; written only when diagnostics ran. */
KRAMERS_API kramers_status kramers_sweep_write_diagnostics_csv(const kramers_sweep_result* result,
                                                               const char* path);

typedef struct kramers_gamma_config {
  double friction;
  double noise;
  double theta_true;
  double x0;
  double v0;
  double dt;
  size_t substeps;
  kramers_scheme scheme;
  double lo, hi;
  int gap_points;
} kramers_gamma_config;

typedef struct kramers_gamma_row {
  double mu;
  double uniform_gap;
  double sup_distance;
} kramers_gamma_row;

KRAMERS_API void kramers_gamma_default_config(kramers_gamma_config* cfg);
/* Writes one row per mass into `rows` (capacity >= mu_count). */
KRAMERS_API kramers_status kramers_gamma_diagnostic_run(const kramers_gamma_config* cfg, const double* mu_values,
                                                        size_t mu_count, size_t n, uint64_t seed,
                                                        kramers_gamma_row* rows);
/* Columns mu,uniform_gap,sup_distance. */
KRAMERS_API kramers_status kramers_gamma_write_csv(const kramers_gamma_row* rows, size_t count, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* KRAMERS_KRAMERS_H */
