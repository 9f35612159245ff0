/* C interface to the window-norm and heat-kernel toolkit. All functions
 * return sh_status; outputs go through pointers. Handles are opaque and
 * freed by their _destroy function. On any non-OK status the thread-local
 * message from sh_last_error() describes what went wrong. */

#ifndef SCHECHTER_HEAT_H
#define SCHECHTER_HEAT_H

#include <stddef.h>

#if defined(_WIN32)
#define SH_API __declspec(dllexport)
#else
#define SH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sh_status {
  SH_OK = 0,
  SH_INVALID_ARGUMENT = 1,
  SH_NON_ELLIPTIC = 2,
  SH_SPECTRUM_HIT = 3,
  SH_UNDER_RESOLVED = 4,
  SH_DIVERGENT_LOCAL_INTEGRAL = 5,
  SH_NO_CONVERGENCE = 6,
  SH_NON_PERIODIC_SHIFT = 7,
  SH_BRANCH_VIOLATION = 8,
  SH_INSUFFICIENT_RESOLUTION = 9,
  SH_DEGENERATE_TRIAL = 10,
  SH_SIGN_ERROR = 11,
  SH_NO_FEASIBLE_ENVELOPE = 12,
  SH_METHOD_UNAVAILABLE = 13,
  SH_NODE_FAILURE = 14,
  SH_MASS_BELOW_FLOOR = 15,
  SH_CONFIG_ERROR = 16,
  SH_IO_ERROR = 17,
  SH_INTERNAL = 18
} sh_status;

typedef struct sh_grid sh_grid;
typedef struct sh_gridfn sh_gridfn;
typedef struct sh_symbol sh_symbol;
typedef struct sh_potential sh_potential;

/* Last error message of the calling thread; empty string when none. The
 * pointer stays valid until the thread's next failing call. */
SH_API const char* sh_last_error(void);

SH_API const char* sh_version(void);

/* ---- grid ---- */

/* Periodic box [-r_box, r_box)^n with npoints per axis (power of two). */
SH_API sh_status sh_grid_create(int n, double r_box, long npoints, sh_grid** out);
SH_API void sh_grid_destroy(sh_grid* g);
SH_API sh_status sh_grid_total(const sh_grid* g, size_t* out);
SH_API sh_status sh_grid_spacing(const sh_grid* g, double* out);

/* ---- elliptic symbol ---- */

/* |xi|^{2m} in n variables. */
SH_API sh_status sh_symbol_polyharmonic(int m, int n, sh_symbol** out);
SH_API void sh_symbol_destroy(sh_symbol* s);
SH_API sh_status sh_symbol_ellipticity(const sh_symbol* s, double* out);

/* ---- potential ---- */

/* sign * c * |x|^a, sign * c * (1+|x|)^a, sign * c. sign is +1 or -1,
 * c >= 0. */
SH_API sh_status sh_potential_power(double a, int sign, double c, sh_potential** out);
SH_API sh_status sh_potential_shifted_power(double a, int sign, double c,
                                            sh_potential** out);
SH_API sh_status sh_potential_constant(int sign, double c, sh_potential** out);
SH_API void sh_potential_destroy(sh_potential* v);

/* ---- grid functions ---- */

/* Values are lexicographic over axis indices; im may be NULL for real
 * data. count must equal the grid total. */
SH_API sh_status sh_gridfn_from_values(const sh_grid* g, const double* re,
                                       const double* im, size_t count, sh_gridfn** out);
SH_API void sh_gridfn_destroy(sh_gridfn* f);
SH_API sh_status sh_gridfn_size(const sh_gridfn* f, size_t* out);
/* Copies values out; re/im buffers of length count (im may be NULL). */
SH_API sh_status sh_gridfn_values(const sh_gridfn* f, double* re, double* im,
                                  size_t count);
SH_API sh_status sh_gridfn_lp_norm(const sh_gridfn* f, double p, double* out);

/* ---- computations ---- */

/* Windowed norm M_{alpha,r,t,delta}(V) on the grid (t may be INFINITY). */
SH_API sh_status sh_schechter_norm(const sh_potential* v, const sh_grid* g, double alpha,
                                   double r, double t, double delta, double* out);

/* Lower bound on the L^p -> L^q norm of f |-> V ((delta^2 - Lap)^{-s/2} f). */
SH_API sh_status sh_empirical_opnorm(const sh_potential* v, const sh_grid* g, double s,
                                     double delta, double p_in, double q_out, int trials,
                                     unsigned seed, double* out);

/* e^{-t(P(D)+V)} f. method: 0 spectral (V = 0 only), 1 dense (small grids),
 * 2 contour quadrature. */
SH_API sh_status sh_semigroup_apply(const sh_symbol* p, const sh_potential* v, double t,
                                    const sh_gridfn* f, int method, sh_gridfn** out);

/* ---- experiment driver ---- */

/* Task declared by a config file; *task receives a malloc'd string to free
 * with sh_string_free. */
SH_API sh_status sh_config_task(const char* config_path, char** task);

/* Runs the experiment described by the config file; writes report files
 * under out_dir (NULL or "" computes without writing). passed receives the
 * computed verdict (1/0); summary, when non-NULL, receives a malloc'd
 * one-line description to free with sh_string_free. */
SH_API sh_status sh_run_experiment(const char* config_path, const char* out_dir,
                                   unsigned seed, int* passed, char** summary);

SH_API void sh_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SCHECHTER_HEAT_H */
