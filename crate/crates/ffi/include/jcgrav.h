#ifndef JCGRAV_H
#define JCGRAV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JcgStatus {
  JCG_STATUS_OK = 0,
  JCG_STATUS_NULL_POINTER = 1,
  /**
   * Bad parameter, configuration or argument (CLI exit code 2).
   */
  JCG_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Numerical failure: series, integrator or degenerate estimate (CLI exit code 3).
   */
  JCG_STATUS_NUMERIC = 3,
  /**
   * File system error (CLI exit code 4).
   */
  JCG_STATUS_IO = 4,
  JCG_STATUS_BUFFER_TOO_SMALL = 5,
  JCG_STATUS_PANIC = 6,
} JcgStatus;

typedef enum JcgObservable {
  JCG_OBSERVABLE_DIPOLE = 0,
  JCG_OBSERVABLE_INVERSION = 1,
  JCG_OBSERVABLE_MANDEL_Q = 2,
  JCG_OBSERVABLE_S1 = 3,
  JCG_OBSERVABLE_S2 = 4,
  JCG_OBSERVABLE_DELTA_P = 5,
} JcgObservable;

/**
 * Result of one evolution: trajectory plus the derived outputs.
 */
typedef struct JcgResult JcgResult;

/**
 * Scenario configuration handle.
 */
typedef struct JcgScenario JcgScenario;

typedef struct JcgComplex {
  double re;
  double im;
} JcgComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *jcg_version(void);

/**
 * Copy the calling thread's last error message into `buf` (truncated to
 * `cap` bytes, always NUL-terminated when `cap > 0`). Returns the size
 * needed for the full message including the NUL.
 *
 * # Safety
 * `buf` must be NULL or point to `cap` writable bytes.
 */
size_t jcg_last_error(char *buf, size_t cap);

/**
 * New scenario from a preset name (`fig1a` … `fig5b`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum JcgStatus jcg_scenario_from_preset(const char *name, struct JcgScenario **out);

/**
 * New scenario from `key=value` configuration text, as read by `jcgrav run`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum JcgStatus jcg_scenario_from_config(const char *text, struct JcgScenario **out);

/**
 * # Safety
 * `scenario` must be NULL or a handle from this library not yet freed.
 */
void jcg_scenario_free(struct JcgScenario *scenario);

/**
 * Engine: `ode`, `analytic` or `both`.
 *
 * # Safety
 * `scenario` must be a live handle; `engine` a NUL-terminated string.
 */
enum JcgStatus jcg_scenario_set_engine(struct JcgScenario *scenario, const char *engine);

/**
 * Number of time steps (the grid has `steps + 1` points).
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum JcgStatus jcg_scenario_set_steps(struct JcgScenario *scenario, size_t steps);

/**
 * End of the time grid in units of λt.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum JcgStatus jcg_scenario_set_tmax_scaled(struct JcgScenario *scenario, double tmax);

/**
 * Angle between wave vector and momentum (rad); 0 switches gravity off.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum JcgStatus jcg_scenario_set_theta(struct JcgScenario *scenario, double theta);

/**
 * Directory used by [`jcg_scenario_run`].
 *
 * # Safety
 * `scenario` must be a live handle; `dir` a NUL-terminated string.
 */
enum JcgStatus jcg_scenario_set_output_dir(struct JcgScenario *scenario, const char *dir);

/**
 * Collapse and revival estimate in units of λt for the scenario's parameters.
 *
 * # Safety
 * `scenario` must be a live handle; the output pointers must be writable.
 */
enum JcgStatus jcg_scenario_collapse_revival(const struct JcgScenario *scenario,
                                             double n_mean,
                                             uint32_t m,
                                             double *lambda_t_c,
                                             double *lambda_t_r);

/**
 * Evolve the scenario in memory.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be writable.
 */
enum JcgStatus jcg_scenario_compute(const struct JcgScenario *scenario, struct JcgResult **out);

/**
 * Evolve and write CSV files, reports and `summary.json` to the output directory.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be writable.
 */
enum JcgStatus jcg_scenario_run(const struct JcgScenario *scenario, struct JcgResult **out);

/**
 * # Safety
 * `result` must be NULL or a handle from this library not yet freed.
 */
void jcg_result_free(struct JcgResult *result);

/**
 * Time grid in seconds.
 *
 * # Safety
 * `result` must be a live handle; `buf` NULL or `cap` writable doubles; `len` writable.
 */
enum JcgStatus jcg_result_time_grid(const struct JcgResult *result,
                                    double *buf,
                                    size_t cap,
                                    size_t *len);

/**
 * Any observable series on the result's grid, whether or not it was requested.
 * `kind` is a `JcgObservable` value; anything else is an invalid argument.
 *
 * # Safety
 * `result` must be a live handle; `buf` NULL or `cap` writable doubles; `len` writable.
 */
enum JcgStatus jcg_result_observable(const struct JcgResult *result,
                                     int32_t kind,
                                     double *buf,
                                     size_t cap,
                                     size_t *len);

/**
 * Photon-number distribution P(n), n = 0..=n_max+1, at grid index `index`.
 *
 * # Safety
 * `result` must be a live handle; `buf` NULL or `cap` writable doubles; `len` writable.
 */
enum JcgStatus jcg_result_photon_distribution(const struct JcgResult *result,
                                              size_t index,
                                              double *buf,
                                              size_t cap,
                                              size_t *len);

/**
 * max_t |norm(t) − norm(0)|.
 *
 * # Safety
 * `result` must be a live handle; `drift` writable.
 */
enum JcgStatus jcg_result_norm_drift(const struct JcgResult *result, double *drift);

/**
 * Run summary as JSON (the same document the CLI prints).
 *
 * # Safety
 * `result` must be a live handle; `buf` NULL or `cap` writable bytes; `len` writable.
 */
enum JcgStatus jcg_result_summary_json(const struct JcgResult *result,
                                       char *buf,
                                       size_t cap,
                                       size_t *len);

/**
 * Γ(z).
 *
 * # Safety
 * `out` must be writable.
 */
enum JcgStatus jcg_gamma(struct JcgComplex z, struct JcgComplex *out);

/**
 * ₁F₁(a; b; z) with the default series control.
 *
 * # Safety
 * `out` must be writable.
 */
enum JcgStatus jcg_kummer_1f1(struct JcgComplex a,
                              struct JcgComplex b,
                              struct JcgComplex z,
                              struct JcgComplex *out);

/**
 * Hermite function H_ν(z) of complex order.
 *
 * # Safety
 * `out` must be writable.
 */
enum JcgStatus jcg_hermite(struct JcgComplex nu, struct JcgComplex z, struct JcgComplex *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JCGRAV_H */
