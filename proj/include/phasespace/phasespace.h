/* C interface to the phasespace library.
 *
 * Objects are opaque handles created by *_create / *_from_json / computing
 * functions and released with the matching *_destroy. Every fallible call
 * returns a ps_status; on failure the context keeps a message retrievable
 * with ps_context_last_error. Strings returned through char** are owned by
 * the caller and released with ps_string_free.
 *
 * Quadratures are ordered (p1..pN, q1..qN). Wigner functions are normalized
 * under dp dq / 2π per mode, Q-functions under d²β / π.
 */
#ifndef PHASESPACE_PHASESPACE_H
#define PHASESPACE_PHASESPACE_H

#include <stddef.h>

#if defined(PHASESPACE_BUILDING_LIBRARY)
#define PS_API __attribute__((visibility("default")))
#else
#define PS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
  PS_OK = 0,
  PS_ERR_INVALID_ARGUMENT,
  PS_ERR_CONFIG_INVALID,
  PS_ERR_DIMENSION_MISMATCH,
  PS_ERR_NON_SYMMETRIC_B,
  PS_ERR_SYMPLECTIC_DRIFT_EXCEEDED,
  PS_ERR_NON_REAL_RESULT,
  PS_ERR_SINGULAR_DISPERSION,
  PS_ERR_SINGULAR_MATRIX,
  PS_ERR_INVALID_STATE,
  PS_ERR_INDEX_OUT_OF_RANGE,
  PS_ERR_ASYMMETRIC_R,
  PS_ERR_DEGREE_TOO_LARGE,
  PS_ERR_NEGATIVE_PROBABILITY,
  PS_ERR_GRID_TOO_COARSE,
  PS_ERR_WRONSKIAN_DRIFT,
  PS_ERR_BRANCH_TRACKING_LOST,
  PS_ERR_NOT_PERIODIC,
  PS_ERR_NULL_STATE,
  PS_ERR_NULL_POINTER,
  PS_ERR_INTERNAL
} ps_status;

typedef struct ps_context ps_context;
typedef struct ps_hamiltonian ps_hamiltonian;
typedef struct ps_propagator ps_propagator;
typedef struct ps_state ps_state;
typedef struct ps_distribution ps_distribution;
typedef struct ps_profile ps_profile;
typedef struct ps_trajectory ps_trajectory;
typedef struct ps_cat ps_cat;

/* Square (p, q) grid, endpoints included, 2 <= points <= 512. */
typedef struct ps_grid {
  double p_min;
  double p_max;
  double q_min;
  double q_max;
  int points;
} ps_grid;

typedef struct ps_eps_sample {
  double t;
  double eps_re;
  double eps_im;
  double eps_dot_re;
  double eps_dot_im;
  double phase;
  double sigma_x;
  double sigma_p;
  double sigma_xp;
  double r;
} ps_eps_sample;

typedef struct ps_quasienergy {
  double kappa;         /* unreduced phase rate; NaN when unstable */
  double kappa_reduced; /* arccos(trace/2)/T; NaN when unstable */
  int stable;
  double trace;
  double multipliers[4]; /* re0, im0, re1, im1 */
} ps_quasienergy;

typedef enum ps_parity { PS_PARITY_EVEN = 0, PS_PARITY_ODD = 1 } ps_parity;

/* Stable error name, e.g. "GridTooCoarse"; "Ok" for PS_OK. */
PS_API const char* ps_status_name(ps_status status);
PS_API const char* ps_version(void);
PS_API void ps_string_free(char* s);

/* Context: tolerance for symplectic checks (default 1e-9), thread count for
 * grid evaluation (default 1) and the last error message. */
PS_API ps_status ps_context_create(ps_context** out);
PS_API void ps_context_destroy(ps_context* ctx);
PS_API ps_status ps_context_set_tolerance(ps_context* ctx, double tol);
PS_API ps_status ps_context_set_threads(ps_context* ctx, int threads);
PS_API const char* ps_context_last_error(const ps_context* ctx);

/* Hamiltonians and propagators. */
PS_API ps_status ps_hamiltonian_from_json(ps_context* ctx, const char* json, ps_hamiltonian** out);
PS_API void ps_hamiltonian_destroy(ps_hamiltonian* h);

/* Propagator over [0, t]. steps = 0 uses the exact exponential for constant
 * Hamiltonians and the default RK4 step count otherwise. */
PS_API ps_status ps_propagator_compute(ps_context* ctx, const ps_hamiltonian* h, double t, int steps,
                                       ps_propagator** out);
PS_API ps_status ps_propagator_inverse(ps_context* ctx, const ps_propagator* p, ps_propagator** out);
PS_API ps_status ps_propagator_from_json(ps_context* ctx, const char* json, ps_propagator** out);
PS_API ps_status ps_propagator_to_json(ps_context* ctx, const ps_propagator* p, char** out);
PS_API ps_status ps_propagator_defect(ps_context* ctx, const ps_propagator* p, double* out);
PS_API void ps_propagator_destroy(ps_propagator* p);

/* Gaussian states. */
PS_API ps_status ps_state_from_json(ps_context* ctx, const char* json, ps_state** out);
PS_API ps_status ps_state_to_json(ps_context* ctx, const ps_state* s, char** out);
PS_API ps_status ps_state_n_modes(ps_context* ctx, const ps_state* s, int* out);
PS_API ps_status ps_state_evolve(ps_context* ctx, const ps_state* s, const ps_propagator* p, ps_state** out);
/* point has 2N entries. */
PS_API ps_status ps_state_wigner(ps_context* ctx, const ps_state* s, const double* point, size_t len, double* out);
/* beta holds N complex amplitudes as (re, im) pairs. */
PS_API ps_status ps_state_q_function(ps_context* ctx, const ps_state* s, const double* beta, size_t n_modes,
                                     double* out);
PS_API ps_status ps_state_mean_photon(ps_context* ctx, const ps_state* s, int mode, double* out);
/* Slices through the state mean in the (p, q) plane of one mode (0-based);
 * values receives points² entries, p-major. */
PS_API ps_status ps_state_wigner_grid(ps_context* ctx, const ps_state* s, int mode, const ps_grid* grid,
                                      double* values);
PS_API ps_status ps_state_q_grid(ps_context* ctx, const ps_state* s, int mode, const ps_grid* grid, double* values);
PS_API void ps_state_destroy(ps_state* s);

/* Photon-number distributions on the box 0 <= n_j <= cutoff. */
PS_API ps_status ps_photon_distribution(ps_context* ctx, const ps_state* s, int cutoff, ps_distribution** out);
PS_API size_t ps_distribution_size(const ps_distribution* d);
PS_API int ps_distribution_n_modes(const ps_distribution* d);
/* n receives n_modes entries. */
PS_API ps_status ps_distribution_entry(ps_context* ctx, const ps_distribution* d, size_t index, int* n, double* prob);
PS_API double ps_distribution_mass(const ps_distribution* d);
PS_API double ps_distribution_p0(const ps_distribution* d);
PS_API ps_status ps_distribution_mean(ps_context* ctx, const ps_distribution* d, int mode, double* out);
PS_API void ps_distribution_destroy(ps_distribution* d);

/* Parametric oscillator. steps = 0 picks the default step count. */
PS_API ps_status ps_profile_from_json(ps_context* ctx, const char* json, ps_profile** out);
PS_API void ps_profile_destroy(ps_profile* p);
PS_API ps_status ps_epsilon_solve(ps_context* ctx, const ps_profile* p, double t_final, int steps,
                                  ps_trajectory** out);
PS_API size_t ps_trajectory_size(const ps_trajectory* tr);
PS_API ps_status ps_trajectory_sample(ps_context* ctx, const ps_trajectory* tr, size_t index, ps_eps_sample* out);
PS_API double ps_trajectory_wronskian_drift(const ps_trajectory* tr);
PS_API void ps_trajectory_destroy(ps_trajectory* tr);
PS_API ps_status ps_quasienergy_compute(ps_context* ctx, const ps_profile* p, double period, int steps,
                                        ps_quasienergy* out);

/* Even/odd coherent states at time t of the given profile (profile may be
 * NULL for t = 0). */
PS_API ps_status ps_cat_create(ps_context* ctx, ps_parity parity, double alpha_re, double alpha_im,
                               const ps_profile* profile, double t, ps_cat** out);
PS_API void ps_cat_destroy(ps_cat* cat);
PS_API ps_status ps_cat_wavefunction(ps_context* ctx, const ps_cat* cat, double x, double* re, double* im);
/* Half-width of the interval outside which the wavefunction is negligible. */
PS_API ps_status ps_cat_extent(ps_context* ctx, const ps_cat* cat, double* out);
PS_API ps_status ps_cat_a_squared_residual(ps_context* ctx, const ps_cat* cat, double* out);
PS_API ps_status ps_cat_photon_distribution(ps_context* ctx, const ps_cat* cat, int cutoff, ps_distribution** out);
/* values receives points² entries, p-major. */
PS_API ps_status ps_cat_wigner_grid(ps_context* ctx, const ps_cat* cat, const ps_grid* grid, double* values);

#ifdef __cplusplus
}
#endif

#endif /* PHASESPACE_PHASESPACE_H */
