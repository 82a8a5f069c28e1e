/*
 * stargaze C API: repository star-history collection, growth-trend
 * clustering, popularity regression and ranking evaluation.
 *
 * All functions return sg_status; SG_OK means success. On failure,
 * sg_last_error() returns a thread-local description of the most recent
 * error in the calling thread. Handles are opaque and must be released
 * with their matching *_close function.
 */

#ifndef STARGAZE_H
#define STARGAZE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SG_API __declspec(dllexport)
#else
#define SG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sg_status {
  SG_OK = 0,
  SG_ERR_INVALID_ARGUMENT,
  SG_ERR_NOT_FOUND,
  SG_ERR_RATE_LIMITED,
  SG_ERR_TRANSPORT,
  SG_ERR_IO,
  SG_ERR_FORMAT,
  SG_ERR_EMPTY_RANGE,
  SG_ERR_TOO_SHORT,
  SG_ERR_ZERO_NORM,
  SG_ERR_SHIFT_OUT_OF_RANGE,
  SG_ERR_DEGENERATE_DATA,
  SG_ERR_EIGEN_FAILURE,
  SG_ERR_INSUFFICIENT_DATA,
  SG_ERR_NUMERICAL_FAILURE,
  SG_ERR_ARITY_MISMATCH,
  SG_ERR_ZERO_ACTUAL,
  SG_ERR_EMPTY_INPUT,
  SG_ERR_TOO_FEW_ITEMS,
  SG_ERR_WINDOW_TOO_SMALL,
  SG_ERR_SET_MISMATCH,
  SG_ERR_DEGENERATE_VARIANCE,
  SG_ERR_K_TOO_LARGE,
  SG_ERR_MISMATCH,
  SG_ERR_UNDEFINED_CV,
  SG_ERR_INTERNAL
} sg_status;

SG_API const char* sg_status_name(sg_status status);
SG_API const char* sg_last_error(void);
SG_API const char* sg_version_string(void);

typedef struct sg_dataset sg_dataset;
typedef struct sg_cluster_model sg_cluster_model;
typedef struct sg_regression_model sg_regression_model;

/* ---- ingestion -------------------------------------------------------- */

/* Fetches full star histories and writes one raw-event file per repository
 * into out_dir (name owner__repo.events). Pass names/count for an explicit
 * list, or count == 0 with top_n > 0 to fetch the top-n most starred
 * repositories. The API base URL and bearer token come from STARGAZE_API_URL
 * and STARGAZE_TOKEN. parallelism <= 0 means the default (4). */
SG_API sg_status sg_fetch(const char* const* names, size_t count, int top_n,
                          const char* out_dir, int parallelism);

/* ---- dataset ----------------------------------------------------------- */

/* Builds weekly series from raw-event files, applies the cleaning rules
 * (capped histories, missing language, series shorter than the window) and
 * writes the dataset plus an exclusion report (exclusions_csv may be NULL). */
SG_API sg_status sg_build_dataset(const char* const* event_files, size_t count,
                                  const char* cutoff_iso8601, int window,
                                  const char* out_dataset_path,
                                  const char* out_exclusions_csv);

SG_API sg_status sg_dataset_open(const char* path, sg_dataset** out);
SG_API void sg_dataset_close(sg_dataset* dataset);
SG_API sg_status sg_dataset_size(const sg_dataset* dataset, size_t* out);
SG_API sg_status sg_dataset_window(const sg_dataset* dataset, int* out);

/* ---- growth-trend clustering ------------------------------------------- */

/* Clusters the windowed series into k growth trends and saves the model.
 * q_max < 0 selects the default shift radius (window / 4). */
SG_API sg_status sg_cluster(const sg_dataset* dataset, int k, uint64_t seed,
                            int q_max, int max_iter, int restarts, int jobs,
                            const char* out_model_path);

SG_API sg_status sg_cluster_open(const char* path, sg_cluster_model** out);
SG_API void sg_cluster_close(sg_cluster_model* model);
SG_API sg_status sg_cluster_k(const sg_cluster_model* model, int* out);

/* beta_CV curve over k_min..k_max written as CSV; *selected_k receives the
 * smallest stable k (stability rule: the next stability_window values stay
 * within stability_tol relative deviation), *stable whether the rule held. */
SG_API sg_status sg_betacv(const sg_dataset* dataset, int k_min, int k_max,
                           uint64_t seed, int q_max, int max_iter, int restarts,
                           int jobs, double stability_tol, int stability_window,
                           const char* out_csv, int* selected_k, int* stable);

/* ---- regression -------------------------------------------------------- */

/* Fits the week-t value on the first t_r weekly values. With a cluster model
 * and cluster_index >= 0, trains only on that cluster's members. */
SG_API sg_status sg_fit(const sg_dataset* dataset,
                        const sg_cluster_model* scope_model, int cluster_index,
                        int t_r, int t, const char* out_model_path);

SG_API sg_status sg_model_open(const char* path, sg_regression_model** out);
SG_API void sg_model_close(sg_regression_model* model);
SG_API sg_status sg_model_info(const sg_regression_model* model, int* t_r,
                               int* t, int* scope, int* collinear);

/* Applies a model to one t_r-week prefix. */
SG_API sg_status sg_predict_value(const sg_regression_model* model,
                                  const double* prefix, size_t length,
                                  double* out);

/* Applies a model to every series in the dataset and writes
 * repo,predicted,actual,rse rows. */
SG_API sg_status sg_predict(const sg_regression_model* model,
                            const sg_dataset* dataset, const char* out_csv);

/* ---- evaluation --------------------------------------------------------- */

/* Cross-validated error sweep. With scope_model == NULL this evaluates one
 * generic model per t_r; otherwise one model per cluster (folds drawn within
 * clusters; cluster indices in `excluded` are skipped). */
SG_API sg_status sg_eval_sweep(const sg_dataset* dataset,
                               const sg_cluster_model* scope_model,
                               const int* excluded, size_t excluded_count,
                               const int* tr_values, size_t tr_count, int t,
                               int folds, uint64_t seed, int jobs,
                               const char* out_csv);

/* Error sweeps for several target weeks; per target, t_r = round(f * t) for
 * each fraction f. */
SG_API sg_status sg_eval_multi(const sg_dataset* dataset,
                               const double* fractions, size_t fraction_count,
                               const int* targets, size_t target_count,
                               int folds, uint64_t seed, int jobs,
                               const char* out_csv);

/* Pooled held-out predictions (repo,predicted,actual,rse; plus a cluster
 * column when scope_model is given). These are the scores to rank on. */
SG_API sg_status sg_crossval_predictions(const sg_dataset* dataset,
                                         const sg_cluster_model* scope_model,
                                         const int* excluded,
                                         size_t excluded_count, int t_r, int t,
                                         int folds, uint64_t seed, int jobs,
                                         const char* out_csv);

/* Per-repository accuracy gain of cluster-specific models over the generic
 * one (percentage points of absolute percent error) plus per-cluster
 * quartiles. */
SG_API sg_status sg_improvement(const sg_dataset* dataset,
                                const sg_cluster_model* cluster_model,
                                const int* excluded, size_t excluded_count,
                                int t_r, int t, int folds, uint64_t seed,
                                int jobs, const char* out_rows_csv,
                                const char* out_summary_csv);

/* ---- ranking ------------------------------------------------------------ */

/* Compares predicted rankings against the real one. Inputs are repo,score
 * CSVs ('#' comments and a header row are skipped). Repositories present
 * only in the real ranking are newcomers: kept in the table with "---"
 * markers, excluded from rho. specific_scores_csv and out_rho_csv may be
 * NULL; topk lists the group sizes for per-group correlations. */
SG_API sg_status sg_rank(const char* real_scores_csv,
                         const char* generic_scores_csv,
                         const char* specific_scores_csv, const size_t* topk,
                         size_t topk_count, const char* out_table_csv,
                         const char* out_rho_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STARGAZE_H */
