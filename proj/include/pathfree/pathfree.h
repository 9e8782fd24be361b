/* C interface to the pathfree mediation library.
 *
 * Objects are opaque handles created by pf_*_create / pf_* functions and
 * released with the matching pf_*_free. Every fallible call returns a
 * pf_status; on failure pf_last_error() describes the problem for the
 * calling thread until the next failing call on that thread. Strings handed
 * out by the library are released with pf_string_free.
 */
#ifndef PATHFREE_PATHFREE_H
#define PATHFREE_PATHFREE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PATHFREE_BUILDING_LIBRARY)
#    define PF_API __declspec(dllexport)
#  else
#    define PF_API __declspec(dllimport)
#  endif
#else
#  define PF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pf_status {
  PF_OK = 0,
  PF_ERR_INVALID_ARGUMENT = 1,
  PF_ERR_NON_BINARY_COLUMN = 2,
  PF_ERR_LENGTH_MISMATCH = 3,
  PF_ERR_NON_FINITE_VALUE = 4,
  PF_ERR_DIMENSION_MISMATCH = 5,
  PF_ERR_RANK_DEFICIENT = 6,
  PF_ERR_EMPTY_CELL = 7,
  PF_ERR_TREATED_CELL_MISSING = 8,
  PF_ERR_EMPTY_STRATUM_CELL = 9,
  PF_ERR_MISSING_COLUMN = 10,
  PF_ERR_PARSE = 11,
  PF_ERR_IO = 12,
  PF_ERR_ALL_REPS_FAILED = 13,
  PF_ERR_INTERNAL = 99
} pf_status;

typedef enum pf_effect {
  PF_EFFECT_TOTAL = 0,
  PF_EFFECT_DIRECT = 1,
  PF_EFFECT_INDIRECT = 2,
  PF_EFFECT_INTERACTION = 3
} pf_effect;

typedef enum pf_format { PF_FORMAT_JSON = 0, PF_FORMAT_TEXT = 1 } pf_format;

typedef enum pf_true_method { PF_TRUE_ANALYTIC = 0, PF_TRUE_MONTECARLO = 1 } pf_true_method;

typedef struct pf_dataset pf_dataset;
typedef struct pf_estimates pf_estimates;
typedef struct pf_report pf_report;
typedef struct pf_true_effects pf_true_effects;

PF_API const char* pf_version(void);
PF_API const char* pf_last_error(void);
PF_API const char* pf_status_name(pf_status status);
PF_API void pf_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

/* x is row-major n x kx (may be NULL when kx == 0); names holds kx labels. */
PF_API pf_status pf_dataset_create(const double* y, const double* d, const double* m, const double* x,
                                   size_t n, size_t kx, const char* const* names, pf_dataset** out);

/* Column expressions: "name", "ln(name)" or "threshold(name, c)" for y, d
 * and m; x_list is a comma-separated list of covariate names (may be NULL or
 * empty). rows_dropped, when non-NULL, receives the count of rows skipped for
 * empty or NA fields. */
PF_API pf_status pf_dataset_load_csv(const char* path, const char* y, const char* d, const char* m,
                                     const char* x_list, pf_dataset** out, size_t* rows_dropped);

PF_API void pf_dataset_free(pf_dataset* ds);
PF_API size_t pf_dataset_size(const pf_dataset* ds);
PF_API size_t pf_dataset_num_covariates(const pf_dataset* ds);
/* Number of observations in cell (d, m); 0 for invalid arguments. */
PF_API size_t pf_dataset_cell_count(const pf_dataset* ds, int d, int m);

/* ---- estimators -------------------------------------------------------- */

PF_API pf_status pf_estimate_constant(const pf_dataset* ds, pf_estimates** out);

/* basis: basis-spec text, or NULL for the linear default over all
 * covariates. drop_collinear != 0 drops dependent columns instead of failing. */
PF_API pf_status pf_estimate_varying(const pf_dataset* ds, const char* basis, int drop_collinear,
                                     pf_estimates** out);

/* Roster label: "c", "v1", "v2", "v3" or "v:<path>". */
PF_API pf_status pf_estimate_label(const pf_dataset* ds, const char* label, int drop_collinear,
                                   pf_estimates** out);

PF_API void pf_estimates_free(pf_estimates* est);
PF_API pf_status pf_estimates_get(const pf_estimates* est, pf_effect effect, double* point, double* se,
                                  double* t);
PF_API double pf_estimates_complier_share(const pf_estimates* est);
PF_API size_t pf_estimates_n(const pf_estimates* est);
PF_API pf_status pf_estimates_render(const pf_estimates* est, pf_format format, char** out);

/* ---- true effects ------------------------------------------------------ */

PF_API pf_status pf_true_effects_compute(int design, pf_true_method method, uint64_t draws, uint64_t seed,
                                         unsigned threads, pf_true_effects** out);
PF_API void pf_true_effects_free(pf_true_effects* te);
/* mc_se may be NULL; it receives 0 for analytic results. */
PF_API pf_status pf_true_effects_get(const pf_true_effects* te, pf_effect effect, double* value, double* mc_se);
PF_API pf_status pf_true_effects_render(const pf_true_effects* te, pf_format format, char** out);

/* ---- simulation study -------------------------------------------------- */

typedef struct pf_study_config {
  int design;              /* 1..4 */
  size_t n;                /* sample size per repetition */
  size_t reps;             /* >= 2 */
  const char* estimators;  /* comma-separated roster labels */
  uint64_t seed;
  unsigned threads;        /* 0 is treated as 1 */
  uint64_t true_draws;     /* Monte-Carlo oracle draws; 0 selects the default */
  int drop_collinear;
} pf_study_config;

PF_API void pf_study_config_init(pf_study_config* config);
PF_API pf_status pf_simulate(const pf_study_config* config, pf_report** out);
PF_API void pf_report_free(pf_report* report);
PF_API pf_status pf_report_render(const pf_report* report, pf_format format, char** out);

/* Normalized metrics for one roster label and effect; any output may be NULL. */
PF_API pf_status pf_report_metrics(const pf_report* report, const char* label, pf_effect effect,
                                   double* abs_bias, double* sd, double* rmse, double* asy_sd);

/* ---- output ------------------------------------------------------------ */

PF_API pf_status pf_write_file(const char* path, const char* content);

#ifdef __cplusplus
}
#endif

#endif /* PATHFREE_PATHFREE_H */
