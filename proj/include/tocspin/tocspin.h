/* C interface of the tocspin shared library.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function. Every call that can fail returns a status code;
 * tocspin_last_error() gives the message of the most recent failure on the
 * calling thread. Output pointers are written only on success. */
#ifndef TOCSPIN_H
#define TOCSPIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TOCSPIN_API __declspec(dllexport)
#else
#define TOCSPIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tocspin_status {
  TOCSPIN_OK = 0,
  TOCSPIN_ERR_INVALID_ARGUMENT = 1,
  TOCSPIN_ERR_INVALID_BOUND = 2,
  TOCSPIN_ERR_NOT_FOUND = 3,
  TOCSPIN_ERR_NOT_REACHED = 4,
  TOCSPIN_ERR_VERIFICATION = 5,
  TOCSPIN_ERR_INCONSISTENT = 6,
  TOCSPIN_ERR_IO = 7,
  TOCSPIN_ERR_INTERNAL = 8
} tocspin_status;

TOCSPIN_API const char* tocspin_version(void);
TOCSPIN_API const char* tocspin_status_name(tocspin_status status);
TOCSPIN_API const char* tocspin_last_error(void);
/* "strict" or "loose"; the default comes from TOCSPIN_TOLERANCE_PROFILE. */
TOCSPIN_API tocspin_status tocspin_set_tolerance_profile(const char* name);
TOCSPIN_API void tocspin_string_free(char* text);

/* ---- selective rotations ---- */

typedef struct tocspin_solution tocspin_solution;

typedef struct tocspin_solve_options {
  double bound_D;        /* field bound, tesla or normalized */
  double gamma1;         /* gyromagnetic ratio of the first spin */
  int certify;           /* attach an optimality certificate */
  int b_sign;            /* +1 or -1 */
  int enumeration_bound; /* initial search bound for m, l, k */
  int max_enumeration_bound; /* doubling stops here */
  int bzero_k_max;       /* largest k tried on the b = 0 branch */
} tocspin_solve_options;

TOCSPIN_API void tocspin_solve_options_init(tocspin_solve_options* opts);

/* gamma: "p/q" or decimal; theta: "pi", "3pi/4", ... or radians; axis: x|y|z|nx,ny,nz. */
TOCSPIN_API tocspin_status tocspin_solve(const char* gamma, const char* theta, const char* axis,
                                         const tocspin_solve_options* opts, tocspin_solution** out);
TOCSPIN_API void tocspin_solution_free(tocspin_solution* sol);

/* Result document: YAML by default, canonical JSON when json != 0. */
TOCSPIN_API tocspin_status tocspin_solution_render(const tocspin_solution* sol, int json, int verify_steps,
                                                   char** text);
TOCSPIN_API tocspin_status tocspin_solution_save(const tocspin_solution* sol, const char* path, int json,
                                                 int verify_steps);
TOCSPIN_API tocspin_status tocspin_solution_load(const char* path, tocspin_solution** out);

typedef struct tocspin_solution_info {
  double gamma;
  double theta;
  double axis[3];
  double bound_D;
  double gamma1;
  int is_bzero; /* b = 0 branch: only k is meaningful */
  int s, m, l, k;
  double t_min;      /* normalized */
  double t_physical; /* seconds for physical inputs */
  double omega, a, b;
  int sign;
  double y_re[4], y_im[4]; /* row-major */
  int has_certificate;
  int certified;
  int certificate_cases;
  double residual_spin1;
  double residual_spin2;
} tocspin_solution_info;

TOCSPIN_API tocspin_status tocspin_solution_get_info(const tocspin_solution* sol, tocspin_solution_info* info);

typedef struct tocspin_distortion {
  double rise_time; /* seconds, 0 disables the low-pass */
  double eta[3];    /* per-axis amplitude ratios */
  double gamma_shift; /* relative error of gamma used when propagating */
} tocspin_distortion;

TOCSPIN_API void tocspin_distortion_init(tocspin_distortion* d);

/* Propagates the (optionally distorted) physical field; distortion may be NULL.
 * Fidelities are |Tr(U^dag V)|/2 against U_f and the identity. */
TOCSPIN_API tocspin_status tocspin_solution_simulate(const tocspin_solution* sol, const tocspin_distortion* d,
                                                     int steps, double* fidelity_spin1, double* fidelity_spin2);

/* Waveform CSV t_seconds,Bx,By,Bz with B = -2u. sample_rate <= 0 selects the
 * default density; nyquist_ok reports whether the rate exceeds twice the
 * highest field frequency. */
TOCSPIN_API tocspin_status tocspin_solution_write_waveform(const tocspin_solution* sol, const char* path,
                                                           double sample_rate, int* nyquist_ok);

TOCSPIN_API tocspin_status tocspin_solution_sensitivity(const tocspin_solution* sol, double* finite_diff_norm,
                                                        double* bound);
TOCSPIN_API tocspin_status tocspin_solution_gamma_drop(const tocspin_solution* sol, double relative_error,
                                                       int steps, double* drop);

typedef struct tocspin_eta_grid {
  double lo, hi;
  int n;
  double steps_per_unit;
  double threshold;
} tocspin_eta_grid;

TOCSPIN_API void tocspin_eta_grid_init(tocspin_eta_grid* g);

/* Fidelity over the eta grid; csv_path may be NULL. */
TOCSPIN_API tocspin_status tocspin_solution_robustness(const tocspin_solution* sol, const tocspin_eta_grid* grid,
                                                       const char* csv_path, double* fraction);

/* ---- composite baseline ---- */

typedef struct tocspin_composite_result {
  double theta;
  double t_toc;       /* physical */
  double t_composite; /* physical */
  double saving;      /* 1 - t_toc / t_composite */
  double fidelity;    /* propagated composite sequence */
} tocspin_composite_result;

TOCSPIN_API tocspin_status tocspin_compare_composite(const char* gamma, const char* theta, const char* axis,
                                                     double bound_D, double gamma1, tocspin_composite_result* out);
/* Robustness of the composite baseline for the target of sol; csv_path may be NULL. */
TOCSPIN_API tocspin_status tocspin_composite_robustness(const tocspin_solution* sol, const tocspin_eta_grid* grid,
                                                        const char* csv_path, double* fraction);

/* ---- randomized benchmarking ---- */

typedef enum tocspin_rb_realizer {
  TOCSPIN_RB_TOC = 0,
  TOCSPIN_RB_IDEAL = 1,
  TOCSPIN_RB_DEPOLARIZING = 2
} tocspin_rb_realizer;

typedef struct tocspin_rb_config {
  const int* lengths;
  size_t n_lengths;
  int sequences;
  uint64_t seed;
  tocspin_rb_realizer realizer;
  double gamma;
  double bound_D;
  double gamma1;
  double steps_per_unit;
  tocspin_distortion distortion;
  double depolarizing_p;
} tocspin_rb_config;

typedef struct tocspin_rb_result tocspin_rb_result;

TOCSPIN_API void tocspin_rb_config_init(tocspin_rb_config* cfg);
/* "1:50", "0:50:5" or "1,2,4"; writes at most capacity entries and sets count to the full size. */
TOCSPIN_API tocspin_status tocspin_parse_lengths(const char* text, int* lengths, size_t capacity, size_t* count);
TOCSPIN_API tocspin_status tocspin_rb_run(const tocspin_rb_config* cfg, tocspin_rb_result** out);
TOCSPIN_API size_t tocspin_rb_result_size(const tocspin_rb_result* res);
TOCSPIN_API tocspin_status tocspin_rb_result_point(const tocspin_rb_result* res, size_t i, int* length,
                                                   double* mean, double* std_error);
TOCSPIN_API tocspin_status tocspin_rb_result_fit(const tocspin_rb_result* res, double* d_if, double* eps_g,
                                                 double* residual, int* degenerate);
TOCSPIN_API tocspin_status tocspin_rb_result_write_csv(const tocspin_rb_result* res, const char* path);
TOCSPIN_API void tocspin_rb_result_free(tocspin_rb_result* res);
TOCSPIN_API int tocspin_clifford_count(void);

/* ---- general targets and orbit export ---- */

typedef struct tocspin_general_result {
  double t_min;
  double omega, a, b;
  int sign;
  double y_re[4], y_im[4];
  double residual_first;
  double residual_second;
} tocspin_general_result;

/* Targets as row-major SU(2) matrices (re, im); t_max <= 0 keeps the default scan. */
TOCSPIN_API tocspin_status tocspin_general_solve(double gamma, const double u1_re[4], const double u1_im[4],
                                                 const double u2_re[4], const double u2_im[4], double t_max,
                                                 tocspin_general_result* out);

/* Orbit coordinates (t, phi, Re x, Im x) of the canonical pair on a grid x grid lattice. */
TOCSPIN_API tocspin_status tocspin_reachset(double gamma, double t, int grid, double omega_max,
                                            const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif
