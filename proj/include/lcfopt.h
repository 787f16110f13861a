/* lcfopt — fatigue-reliability toolkit, C API.
 *
 * A thin, stable shim over the C++ core: opaque configuration handles,
 * integer status codes, and plain-old-data in/out structs. Every function
 * returns LCF_OK (0) on success; on failure it returns the matching status
 * and stores a human-readable message retrievable (per thread) through
 * lcf_last_error().
 *
 * Pipeline runs write their artifacts (report.json, resolved_config.json,
 * CSV tables, VTK meshes) into the configuration's output directory.
 */
#ifndef LCFOPT_H
#define LCFOPT_H

#include <stdint.h>

/* The shared library is built with hidden visibility; LCF_API re-exports the
 * public entry points. */
#ifndef LCF_API
#if defined(_WIN32)
#define LCF_API
#elif defined(__GNUC__) || defined(__clang__)
#define LCF_API __attribute__((visibility("default")))
#else
#define LCF_API
#endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lcf_status {
  LCF_OK = 0,
  LCF_INVALID_ARGUMENT = 1, /* bad parameter values, domain violations */
  LCF_PARSE = 2,            /* malformed configuration / file contents */
  LCF_CONSTRAINT = 3,       /* admissibility / feasibility failures */
  LCF_MESH = 4,             /* meshing failures */
  LCF_SOLVER = 5,           /* linear solver did not converge */
  LCF_IO = 6,               /* file system problems */
  LCF_INTERNAL = 7          /* broken invariants; bugs */
} lcf_status;

/* Isotropic elastic-plastic fatigue material description. */
typedef struct lcf_material {
  double lambda;           /* first Lame parameter */
  double mu;               /* shear modulus, > 0 */
  double K;                /* cyclic hardening coefficient, > 0 */
  double n_prime;          /* cyclic hardening exponent, in (0, 1) */
  double sigma_f;          /* fatigue strength coefficient, > 0 */
  double eps_f;            /* fatigue ductility coefficient, > 0 */
  double b;                /* fatigue strength exponent, < 0 */
  double c;                /* fatigue ductility exponent, < 0 */
  double m;                /* Weibull shape, >= 1 */
  double amplitude_factor; /* amplitude = factor * von Mises (0.5 = half range) */
} lcf_material;

/* Weibull reliability summary of one run. Infinite lives/scales arrive as
 * IEEE infinity. */
typedef struct lcf_report {
  double h;        /* cumulative hazard H(t_star) */
  double eta;      /* Weibull scale (cycles) */
  double pof;      /* failure probability at t_star */
  double survival; /* 1 - pof */
  double t_det;    /* deterministic life (cycles) */
  double m;        /* Weibull shape used */
  double t_star;   /* warranty horizon (cycles) */
} lcf_report;

/* Opaque run configuration. */
typedef struct lcf_config lcf_config;

/* Library version as "major.minor.patch". */
LCF_API const char* lcf_version(void);

/* Message of this thread's most recent failure; empty string when the last
 * call succeeded. The pointer stays valid until the next API call on the
 * same thread. */
LCF_API const char* lcf_last_error(void);

/* -------------------------------------------------------------- configs -- */

/* Parses a JSON configuration file / in-memory document into a new handle.
 * On success *out owns the configuration; release it with lcf_config_free. */
LCF_API lcf_status lcf_config_load(const char* path, lcf_config** out);
LCF_API lcf_status lcf_config_parse(const char* json_text, lcf_config** out);
LCF_API void lcf_config_free(lcf_config* cfg);

/* Override the corresponding configuration fields. */
LCF_API lcf_status lcf_config_set_seed(lcf_config* cfg, uint64_t seed);
LCF_API lcf_status lcf_config_set_threads(lcf_config* cfg, int threads);
LCF_API lcf_status lcf_config_set_output_dir(lcf_config* cfg, const char* dir);

/* ----------------------------------------------------------------- runs -- */

/* Strain-life curve (+ optional probe-point chain) into the output dir. */
LCF_API lcf_status lcf_run_life(lcf_config* cfg);

/* Full pipeline: mesh, solve, surface fatigue fields, Weibull report.
 * `out` may be NULL when only the on-disk artifacts matter. */
LCF_API lcf_status lcf_run_assess(lcf_config* cfg, lcf_report* out);

/* Assess + sampled crack histories and first-failure statistics. */
LCF_API lcf_status lcf_run_sample(lcf_config* cfg);

/* Shape optimization; `out` (nullable) receives the final design's report. */
LCF_API lcf_status lcf_run_optimize(lcf_config* cfg, lcf_report* out);

/* ------------------------------------------------------- material chain -- */

LCF_API lcf_status lcf_youngs_modulus(const lcf_material* mat, double* out);

/* Von Mises equivalent of a 3x3 stress tensor, row-major. */
LCF_API lcf_status lcf_von_mises(const double stress[9], double* out);

LCF_API lcf_status lcf_ramberg_osgood(const lcf_material* mat, double stress_amplitude, double* out);
LCF_API lcf_status lcf_neuber_shakedown(const lcf_material* mat, double sigma_v, double* out);
LCF_API lcf_status lcf_cmb_strain(const lcf_material* mat, double n_cycles, double* out);
LCF_API lcf_status lcf_cmb_inverse(const lcf_material* mat, double eps_a, double* out);

/* Deterministic initiation life from a von Mises amplitude input; infinite
 * (HUGE_VAL) when the stress vanishes. */
LCF_API lcf_status lcf_phi(const lcf_material* mat, double sigma_v, double* out);

/* Deterministic initiation life from a displacement gradient, row-major. */
LCF_API lcf_status lcf_n_det(const lcf_material* mat, const double grad_u[9], double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LCFOPT_H */
