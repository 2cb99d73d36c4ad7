/*
 * kpcab: kernel PCA with empirical bounds on expected squared projections
 * and residuals.
 *
 * C interface over the C++ core. All objects are opaque handles created by
 * a *_create / *_fit / *_load function and released with the matching
 * *_free. Every fallible call returns a kpcab_status; on failure a
 * description of the last error on the calling thread is available from
 * kpcab_last_error().
 */
#ifndef KPCAB_KPCAB_H
#define KPCAB_KPCAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KPCAB_BUILDING)
#    define KPCAB_API __declspec(dllexport)
#  else
#    define KPCAB_API __declspec(dllimport)
#  endif
#else
#  define KPCAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kpcab_status {
  KPCAB_OK = 0,
  KPCAB_ERR_INPUT = 1,
  KPCAB_ERR_NUMERICAL = 2,
  KPCAB_ERR_INVALID_KERNEL = 3,
  KPCAB_ERR_PARSE = 4,
  KPCAB_ERR_IO = 5,
  KPCAB_ERR_UNSUPPORTED = 6,
  KPCAB_ERR_NULL_ARGUMENT = 7,
  KPCAB_ERR_INTERNAL = 99
} kpcab_status;

typedef struct kpcab_kernel kpcab_kernel;
typedef struct kpcab_dataset kpcab_dataset;
typedef struct kpcab_model kpcab_model;
typedef struct kpcab_config kpcab_config;

KPCAB_API const char* kpcab_version(void);
/* Message of the last failed call on this thread; "" if none. */
KPCAB_API const char* kpcab_last_error(void);
KPCAB_API const char* kpcab_status_name(kpcab_status status);

/* Kernels: "linear", "poly:degree=N,r=V", "rbf:sigma=V". */
KPCAB_API kpcab_status kpcab_kernel_parse(const char* text, kpcab_kernel** out);
KPCAB_API kpcab_status kpcab_kernel_evaluate(const kpcab_kernel* kernel, const double* x,
                                             const double* y, size_t dim, double* out);
KPCAB_API void kpcab_kernel_free(kpcab_kernel* kernel);

/* Datasets. Row-major input: point i occupies data[i*dim .. i*dim+dim). */
KPCAB_API kpcab_status kpcab_dataset_from_rows(const double* data, size_t n, size_t dim,
                                               kpcab_dataset** out);
KPCAB_API kpcab_status kpcab_dataset_load_csv(const char* path, kpcab_dataset** out);
KPCAB_API kpcab_status kpcab_dataset_synthetic(const char* spec, size_t n, uint64_t seed,
                                               kpcab_dataset** out);
KPCAB_API size_t kpcab_dataset_size(const kpcab_dataset* ds);
KPCAB_API size_t kpcab_dataset_dim(const kpcab_dataset* ds);
KPCAB_API kpcab_status kpcab_dataset_point(const kpcab_dataset* ds, size_t i, double* out);
KPCAB_API kpcab_status kpcab_dataset_split(const kpcab_dataset* ds, double ratio, uint64_t seed,
                                           kpcab_dataset** first, kpcab_dataset** second);
KPCAB_API void kpcab_dataset_free(kpcab_dataset* ds);

/* Kernel PCA models. */
KPCAB_API kpcab_status kpcab_model_fit(const kpcab_kernel* kernel, const kpcab_dataset* train,
                                       kpcab_model** out);
KPCAB_API size_t kpcab_model_size(const kpcab_model* model);
KPCAB_API size_t kpcab_model_rank(const kpcab_model* model);
KPCAB_API double kpcab_model_r_squared(const kpcab_model* model);
KPCAB_API kpcab_status kpcab_model_set_r_squared(kpcab_model* model, double r_squared);
/* Eigenvalue i (0-based, descending) of the training Gram matrix. */
KPCAB_API kpcab_status kpcab_model_eigenvalue(const kpcab_model* model, size_t i, double* out);
KPCAB_API kpcab_status kpcab_model_initial_sum(const kpcab_model* model, size_t k, double* out);
KPCAB_API kpcab_status kpcab_model_tail_sum(const kpcab_model* model, size_t k, double* out);
KPCAB_API kpcab_status kpcab_model_projection_sq_norm(const kpcab_model* model, const double* x,
                                                      size_t dim, size_t k, double* out);
KPCAB_API kpcab_status kpcab_model_residual_sq_norm(const kpcab_model* model, const double* x,
                                                    size_t dim, size_t k, double* out);
KPCAB_API kpcab_status kpcab_model_projection_mean(const kpcab_model* model,
                                                   const kpcab_dataset* pts, size_t k, double* out);
KPCAB_API kpcab_status kpcab_model_residual_mean(const kpcab_model* model,
                                                 const kpcab_dataset* pts, size_t k, double* out);
KPCAB_API void kpcab_model_free(kpcab_model* model);

/* Closed-form bound terms. alpha_auto != 0 selects the optimal exponent. */
KPCAB_API kpcab_status kpcab_split_penalty(size_t m, double delta, double r_squared, double* out);
KPCAB_API kpcab_status kpcab_optimal_alpha(size_t m, double delta, double r_squared, double* out);
KPCAB_API kpcab_status kpcab_pac_bayes_penalty(size_t m, double delta, double r_squared,
                                               double alpha, double* out);

/* Bounds evaluated on a fitted model, using the model's R^2. */
typedef struct kpcab_bounds {
  double st_proj_lower;
  double st_resid_upper;
  double pb_proj_upper;
  double pb_resid_lower;
} kpcab_bounds;
KPCAB_API kpcab_status kpcab_model_bounds(const kpcab_model* model, double delta, int alpha_auto,
                                          double alpha, size_t k, kpcab_bounds* out);

/* Experiment configuration. Keys: mode, data, synthetic, kernel, delta,
 * alpha, r2, k_max, split_ratio, trials, oracle_n, n, seed, normalize, out,
 * threads. */
KPCAB_API kpcab_status kpcab_config_create(kpcab_config** out);
KPCAB_API kpcab_status kpcab_config_set(kpcab_config* cfg, const char* key, const char* value);
/* JSON dump into buf (always NUL-terminated); *needed receives the full length. */
KPCAB_API kpcab_status kpcab_config_to_json(const kpcab_config* cfg, char* buf, size_t buf_len,
                                            size_t* needed);
KPCAB_API void kpcab_config_free(kpcab_config* cfg);

/* Runs the configured mode and writes the CSV report and its .meta sidecar. */
KPCAB_API kpcab_status kpcab_run(const kpcab_config* cfg);

#ifdef __cplusplus
}
#endif

#endif /* KPCAB_KPCAB_H */
