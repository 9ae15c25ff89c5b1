/* C interface to the trunkenness library.
 *
 * Objects are opaque handles created by tk_*_create-style functions and
 * released with the matching tk_*_free. Every fallible call returns a
 * tk_status; on failure tk_last_error() describes the problem (the message
 * is thread-local and valid until the next call on the same thread).
 * Output pointers are left untouched on failure.
 */
#ifndef TRUNKENNESS_H
#define TRUNKENNESS_H

#include <stddef.h>
#include <stdint.h>

#if defined(TK_BUILDING_LIBRARY)
#define TK_API __attribute__((visibility("default")))
#else
#define TK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tk_status {
  TK_OK = 0,
  TK_ERR_INVALID_ARGUMENT = 1,
  TK_ERR_LEVEL_OUT_OF_RANGE = 2,
  TK_ERR_TUBE_NOT_EMBEDDED = 3,
  TK_ERR_NOT_COPRIME = 4,
  TK_ERR_DEGENERATE_INTERSECTION = 5,
  TK_ERR_STEP_TOO_LARGE = 6,
  TK_ERR_KNOTS_TOO_CLOSE = 7,
  TK_ERR_NON_INTEGER_LINKING = 8,
  TK_ERR_IO = 9,
  TK_ERR_CONFIG = 10,
  TK_ERR_CRITERIA_FAILED = 11, /* paper-suite ran but some criterion failed */
  TK_ERR_INTERNAL = 12
} tk_status;

typedef struct tk_field tk_field;
typedef struct tk_chart tk_chart;
typedef struct tk_knot tk_knot;

typedef enum tk_tube_profile { TK_PROFILE_PARABOLIC = 0, TK_PROFILE_BUMP = 1 } tk_tube_profile;

/* Error class name of a status, e.g. "NotCoprime". */
TK_API const char* tk_status_name(tk_status status);
TK_API const char* tk_last_error(void);
TK_API const char* tk_version(void);

/* Size of the shared worker pool (>= 1). */
TK_API tk_status tk_set_jobs(unsigned jobs);

/* ---- fields ---- */
TK_API tk_status tk_field_seifert(double alpha, double beta, tk_field** out);
TK_API tk_status tk_field_zero(tk_field** out);
TK_API tk_status tk_field_scaled(double factor, const tk_field* inner, tk_field** out);
/* rotation: 16 row-major entries of an SO(4) matrix */
TK_API tk_status tk_field_rotated(const double rotation[16], const tk_field* inner, tk_field** out);
/* core given in chart coordinates (S^3 knots are projected) */
TK_API tk_status tk_field_tube(const tk_knot* core, double radius, double flux,
                               tk_tube_profile profile, tk_field** out);
TK_API void tk_field_free(tk_field* field);
TK_API tk_status tk_field_eval(const tk_field* field, const double point[4], double out[4]);

/* ---- height charts ---- */
TK_API tk_status tk_chart_create(const double rotation[16], double lambda, tk_chart** out);
TK_API tk_status tk_chart_standard(tk_chart** out);
TK_API tk_status tk_chart_swapped(tk_chart** out);
TK_API void tk_chart_free(tk_chart* chart);
TK_API tk_status tk_chart_height(const tk_chart* chart, const double point[4], double* out);
/* 16 row-major rotation entries and the dilation */
TK_API tk_status tk_chart_params(const tk_chart* chart, double rotation[16], double* lambda);

/* ---- knots ---- */
TK_API tk_status tk_knot_torus(int p, int q, double ratio, size_t vertices, tk_knot** out);
/* coords: count * dim values, dim 3 (chart) or 4 (S^3) */
TK_API tk_status tk_knot_from_points(const double* coords, size_t count, int dim, tk_knot** out);
TK_API tk_status tk_knot_read_file(const char* path, tk_knot** out);
TK_API tk_status tk_knot_orbit(const tk_field* field, const double start[4], double duration,
                               double step, tk_knot** out);
TK_API void tk_knot_free(tk_knot* knot);
TK_API size_t tk_knot_size(const tk_knot* knot);

/* ---- flux ---- */
TK_API tk_status tk_flux_quadrature(const tk_field* field, const tk_chart* chart, double level,
                                    int grid_u, int grid_v, double* out);
TK_API tk_status tk_flux_monte_carlo(const tk_field* field, const tk_chart* chart, double level,
                                     double epsilon, size_t samples, uint64_t seed,
                                     double* estimate, double* std_error);
TK_API tk_status tk_flux_profile_max(const tk_field* field, const tk_chart* chart, int n_levels,
                                     int grid_u, int grid_v, double* max_value,
                                     double* argmax_level);

/* ---- searches ---- */
typedef struct tk_search_params {
  int n_levels;
  int grid_u, grid_v;
  int budget;
  int starts;
  int plateau_checks;
  uint64_t seed;
} tk_search_params;

TK_API void tk_search_params_default(tk_search_params* params);

/* best_chart may be NULL; otherwise receives a new chart handle. */
TK_API tk_status tk_trunkenness_upper(const tk_field* field, const tk_search_params* params,
                                      double* upper_bound, tk_chart** best_chart);
TK_API tk_status tk_knot_trunk_fixed(const tk_knot* const* link, size_t count,
                                     const tk_chart* chart, int* out);
TK_API tk_status tk_knot_trunk_upper(const tk_knot* const* link, size_t count,
                                     const tk_search_params* params, int* trunk,
                                     tk_chart** best_chart);

/* ---- linking and helicity ---- */
TK_API tk_status tk_linking_number(const tk_knot* a, const tk_knot* b, long* value,
                                   double* raw);
TK_API tk_status tk_helicity(const tk_field* field, int pairs, double duration, double step,
                             uint64_t seed, double* estimate, double* spread);

/* ---- experiments ---- */
/* Validates a configuration; *echo (may be NULL) receives the effective
 * configuration, to be released with tk_string_free. */
TK_API tk_status tk_config_check(const char* text, char** echo);
/* Runs a configuration. task and seed override the document when task is
 * non-NULL / has_seed is nonzero. *summary receives the summary text. */
TK_API tk_status tk_run_experiment(const char* config_text, const char* out_dir,
                                   const char* task, int has_seed, uint64_t seed,
                                   char** summary);
/* Runs selected paper-suite criteria (ids NULL or count 0: all), calling
 * on_line with each formatted result row as it completes. */
TK_API tk_status tk_paper_suite(const int* ids, size_t count, uint64_t seed,
                                void (*on_line)(const char* line, int passed, void* user),
                                void* user, int* failures);
TK_API void tk_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
