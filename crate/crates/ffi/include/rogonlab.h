#ifndef ROGONLAB_H
#define ROGONLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum RglStatus {
  RGL_STATUS_OK = 0,
  RGL_STATUS_NULL_POINTER = 1,
  RGL_STATUS_INVALID_PARAM = 2,
  RGL_STATUS_NON_PERIODIC_CARRIER = 3,
  RGL_STATUS_SINGULAR = 4,
  RGL_STATUS_NUMERICAL_ABORT = 5,
  RGL_STATUS_BUFFER_TOO_SMALL = 6,
  RGL_STATUS_PANIC = 7,
} RglStatus;

// Opaque simulation handle.
typedef struct RglSim RglSim;

// Model parameters. `alpha > 0`, `beta > 0`, `(a, b) != (0, 0)`.
typedef struct RglParams {
  double alpha;
  double beta;
  double a;
  double b;
  double k;
} RglParams;

// Both field components at one point.
typedef struct RglField {
  double sigma_re;
  double sigma_im;
  double psi_re;
  double psi_im;
} RglField;

typedef struct RglPeak {
  double s;
  double t;
  // Peak modulus over background modulus (3 or 5).
  double amplitude_ratio;
  double intensity_ratio;
} RglPeak;

typedef struct RglResidual {
  double max_abs_r_sigma;
  double max_abs_r_psi;
  double argmax_sigma_s;
  double argmax_sigma_t;
  double argmax_psi_s;
  double argmax_psi_t;
} RglResidual;

// Simulation options for `rgl_sim_new`.
typedef struct RglSimConfig {
  // Periodic domain length.
  double length;
  // Grid size, a power of two >= 16.
  size_t n;
  double dt;
  // Initial time; the state is the closed-form solution at `t0`.
  double t0;
  bool dealias;
  // Replace `k` by the nearest wavenumber periodic on `length`.
  bool snap_k;
} RglSimConfig;

typedef struct RglConserved {
  double t;
  double n_sigma;
  double n_psi;
  double momentum;
  double hamiltonian;
} RglConserved;

typedef struct RglAnalyticError {
  double l2_rel;
  double linf_rel;
} RglAnalyticError;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *rgl_version(void);

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next library call on the same thread.
const char *rgl_last_error_message(void);

// Checks a parameter set without evaluating anything.
//
// # Safety
// `p` must be NULL or point to a valid `RglParams`.
enum RglStatus rgl_params_validate(const struct RglParams *p);

// Closed-form field of order 1 or 2 at `(s, t)`.
//
// # Safety
// `p` and `out` must be NULL or valid.
enum RglStatus rgl_eval(const struct RglParams *p,
                        uint32_t order_n,
                        double s,
                        double t,
                        struct RglField *out);

// Closed-form field on an `ns x nt` grid spanning `[s_min, s_max] x
// [t_min, t_max]`. `out` must hold at least `ns * nt` elements.
//
// # Safety
// `p` must be NULL or valid; `out` must be NULL or valid for `out_len` writes.
enum RglStatus rgl_eval_grid(const struct RglParams *p,
                             uint32_t order_n,
                             double s_min,
                             double s_max,
                             double t_min,
                             double t_max,
                             size_t ns,
                             size_t nt,
                             struct RglField *out,
                             size_t out_len);

// Location and height of the global intensity maximum.
//
// # Safety
// `p` and `out` must be NULL or valid.
enum RglStatus rgl_peak_info(const struct RglParams *p, uint32_t order_n, struct RglPeak *out);

// Maximum finite-difference residual of the closed form over a sample grid.
// `fd_order` is 2, 4, 6 or 8.
//
// # Safety
// `p` and `out` must be NULL or valid.
enum RglStatus rgl_residual_scan(const struct RglParams *p,
                                 uint32_t order_n,
                                 double s_min,
                                 double s_max,
                                 double t_min,
                                 double t_max,
                                 size_t ns,
                                 size_t nt,
                                 double h,
                                 uint32_t fd_order,
                                 struct RglResidual *out);

// Creates a split-step simulation initialised from the closed form at
// `cfg.t0`. On success `*out` owns a handle to release with `rgl_sim_free`.
//
// # Safety
// `p`, `cfg` and `out` must be NULL or valid.
enum RglStatus rgl_sim_new(const struct RglParams *p,
                           uint32_t order_n,
                           const struct RglSimConfig *cfg,
                           struct RglSim **out);

// Releases a handle. NULL is ignored.
//
// # Safety
// `sim` must be NULL or a handle from `rgl_sim_new` not yet freed.
void rgl_sim_free(struct RglSim *sim);

// Advances the simulation to exactly `t_end` (>= current time).
//
// # Safety
// `sim` must be NULL or a live handle.
enum RglStatus rgl_sim_evolve(struct RglSim *sim, double t_end);

// Current simulation time, or NaN for a NULL handle.
//
// # Safety
// `sim` must be NULL or a live handle.
double rgl_sim_time(const struct RglSim *sim);

// Number of grid points, or 0 for a NULL handle.
//
// # Safety
// `sim` must be NULL or a live handle.
size_t rgl_sim_len(const struct RglSim *sim);

// Effective parameters, including a snapped `k`.
//
// # Safety
// `sim` and `out` must be NULL or valid.
enum RglStatus rgl_sim_params(const struct RglSim *sim, struct RglParams *out);

// Copies the grid abscissae into `s_out` (length >= `rgl_sim_len`).
//
// # Safety
// `sim` must be NULL or a live handle; `s_out` NULL or valid for `len` writes.
enum RglStatus rgl_sim_grid(const struct RglSim *sim, double *s_out, size_t len);

// Copies the current fields into `out` (length >= `rgl_sim_len`).
//
// # Safety
// `sim` must be NULL or a live handle; `out` NULL or valid for `len` writes.
enum RglStatus rgl_sim_fields(const struct RglSim *sim, struct RglField *out, size_t len);

// Norms, momentum and Hamiltonian of the current state.
//
// # Safety
// `sim` and `out` must be NULL or valid.
enum RglStatus rgl_sim_conserved(struct RglSim *sim, struct RglConserved *out);

// Relative deviation of the current state from the closed form.
//
// # Safety
// `sim` and `out` must be NULL or valid.
enum RglStatus rgl_sim_compare(const struct RglSim *sim, struct RglAnalyticError *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROGONLAB_H */
