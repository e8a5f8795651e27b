#ifndef BSQLAB_H
#define BSQLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum {
  BSQ_STATUS_OK = 0,
  BSQ_STATUS_NULL_POINTER = 1,
  BSQ_STATUS_INVALID_ARGUMENT = 2,
  BSQ_STATUS_CONFIG = 3,
  BSQ_STATUS_IO = 4,
  BSQ_STATUS_FORMAT = 5,
  BSQ_STATUS_NON_FINITE = 6,
  BSQ_STATUS_DIVERGED = 7,
  BSQ_STATUS_BUFFER_TOO_SMALL = 8,
  BSQ_STATUS_INTERNAL = 9,
} BsqStatus;

/**
 * Opaque simulation handle.
 */
typedef struct BsqSimulation BsqSimulation;

/**
 * Monitor sample, mirroring the CSV series columns.
 */
typedef struct {
  double t;
  double omega_l2;
  double omega_lq;
  double theta_linf;
  double theta_l2;
  double g_l2;
  double g_lq;
  double cum_lambda_half_g_sq;
  double cum_g_l2q_pow_q;
  double omega_besov;
  double theta_besov;
  double g_balance_residual;
  double tail_mass;
  double cum_omega_besov;
  double cum_theta_besov;
  int32_t in_window;
} BsqMonitorRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread (empty if none). The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *bsq_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bsq_version(void);

/**
 * Creates a simulation from configuration text (the `key = value` format).
 *
 * # Safety
 * `config_text` must be a NUL-terminated UTF-8 string; `out` must be a
 * valid pointer to writable storage for one handle.
 */
BsqStatus bsq_simulation_new(const char *config_text, BsqSimulation **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `sim` must come from [`bsq_simulation_new`] and not be used afterwards.
 */
void bsq_simulation_free(BsqSimulation *sim);

/**
 * Grid size `n` (fields hold `n²` values); 0 for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
uintptr_t bsq_simulation_grid_size(const BsqSimulation *sim);

/**
 * Current time and number of steps taken.
 *
 * # Safety
 * `sim` must be a live handle; `t` and `steps` must be writable.
 */
BsqStatus bsq_simulation_time(const BsqSimulation *sim, double *t, uint64_t *steps);

/**
 * Takes one step. `dt <= 0` selects the advective limit; a positive `dt`
 * above the limit is rejected. The step actually taken is stored in
 * `dt_taken` when it is non-null.
 *
 * # Safety
 * `sim` must be a live handle; `dt_taken` null or writable.
 */
BsqStatus bsq_simulation_step(BsqSimulation *sim, double dt, double *dt_taken);

/**
 * Steps with the advective limit until `t_target` is reached exactly.
 *
 * # Safety
 * `sim` must be a live handle.
 */
BsqStatus bsq_simulation_advance(BsqSimulation *sim, double t_target);

/**
 * Copies ω into `buf` (capacity `len` doubles).
 *
 * # Safety
 * `sim` must be a live handle; `buf` must be writable for `len` doubles.
 */
BsqStatus bsq_simulation_copy_omega(const BsqSimulation *sim, double *buf, uintptr_t len);

/**
 * Copies θ into `buf` (capacity `len` doubles).
 *
 * # Safety
 * `sim` must be a live handle; `buf` must be writable for `len` doubles.
 */
BsqStatus bsq_simulation_copy_theta(const BsqSimulation *sim, double *buf, uintptr_t len);

/**
 * Monitor row of the current state.
 *
 * # Safety
 * `sim` must be a live handle; `row` must be writable.
 */
BsqStatus bsq_simulation_monitor(const BsqSimulation *sim, BsqMonitorRow *row);

/**
 * Writes the current state as a binary snapshot.
 *
 * # Safety
 * `sim` must be a live handle; `path` a NUL-terminated UTF-8 string.
 */
BsqStatus bsq_simulation_write_snapshot(const BsqSimulation *sim, const char *path);

/**
 * Besov norm `B^{s,γ}_{p,q}` of an `n × n` field. Pass `INFINITY` for
 * `p = ∞` or `q = ∞`; `homogeneous != 0` drops the low-frequency block.
 *
 * # Safety
 * `values` must be readable for `n²` doubles; `out` writable.
 */
BsqStatus bsq_besov_norm(const double *values,
                         uintptr_t n,
                         double s,
                         double log_gamma,
                         double p,
                         double q,
                         int32_t homogeneous,
                         double *out);

/**
 * L² norm of the velocity-formulation residual of `(ω, θ)` with the given
 * coefficients (`κ`, `β` do not enter).
 *
 * # Safety
 * `omega` and `theta` must be readable for `n²` doubles; `out` writable.
 */
BsqStatus bsq_velocity_residual(const double *omega,
                                const double *theta,
                                uintptr_t n,
                                double nu,
                                double alpha,
                                double sigma,
                                double gamma,
                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BSQLAB_H */
