#include "kpcab/kpcab.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "bounds.hpp"
#include "data.hpp"
#include "error.hpp"
#include "kernels.hpp"
#include "kpca.hpp"
#include "runner.hpp"

struct kpcab_kernel {
  kpcab::KernelSpec spec;
};
struct kpcab_dataset {
  kpcab::Dataset data;
};
struct kpcab_model {
  kpcab::KpcaModel model;
};
struct kpcab_config {
  kpcab::ExperimentConfig config;
};

namespace {

thread_local std::string last_error;

kpcab_status status_of(kpcab::ErrorKind kind) {
  switch (kind) {
    case kpcab::ErrorKind::input: return KPCAB_ERR_INPUT;
    case kpcab::ErrorKind::numerical: return KPCAB_ERR_NUMERICAL;
    case kpcab::ErrorKind::invalid_kernel: return KPCAB_ERR_INVALID_KERNEL;
    case kpcab::ErrorKind::parse: return KPCAB_ERR_PARSE;
    case kpcab::ErrorKind::io: return KPCAB_ERR_IO;
    case kpcab::ErrorKind::unsupported: return KPCAB_ERR_UNSUPPORTED;
  }
  return KPCAB_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
kpcab_status guarded(F&& body) noexcept {
  try {
    body();
    last_error.clear();
    return KPCAB_OK;
  } catch (const kpcab::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return KPCAB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KPCAB_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return KPCAB_ERR_INTERNAL;
  }
}

template <class... P>
bool any_null(P... p) {
  return ((p == nullptr) || ...);
}

kpcab_status null_argument() {
  last_error = "required pointer argument is null";
  return KPCAB_ERR_NULL_ARGUMENT;
}

Eigen::Map<const Eigen::VectorXd> as_point(const double* x, size_t dim) {
  return {x, static_cast<Eigen::Index>(dim)};
}

}  // namespace

extern "C" {

const char* kpcab_version(void) { return "1.0.0"; }

const char* kpcab_last_error(void) { return last_error.c_str(); }

const char* kpcab_status_name(kpcab_status status) {
  switch (status) {
    case KPCAB_OK: return "ok";
    case KPCAB_ERR_INPUT: return "input error";
    case KPCAB_ERR_NUMERICAL: return "numerical error";
    case KPCAB_ERR_INVALID_KERNEL: return "invalid kernel";
    case KPCAB_ERR_PARSE: return "parse error";
    case KPCAB_ERR_IO: return "I/O error";
    case KPCAB_ERR_UNSUPPORTED: return "unsupported";
    case KPCAB_ERR_NULL_ARGUMENT: return "null argument";
    case KPCAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

kpcab_status kpcab_kernel_parse(const char* text, kpcab_kernel** out) {
  if (any_null(text, out)) return null_argument();
  return guarded([&] { *out = new kpcab_kernel{kpcab::KernelSpec::parse(text)}; });
}

kpcab_status kpcab_kernel_evaluate(const kpcab_kernel* kernel, const double* x, const double* y,
                                   size_t dim, double* out) {
  if (any_null(kernel, x, y, out)) return null_argument();
  return guarded([&] { *out = kpcab::evaluate(kernel->spec, as_point(x, dim), as_point(y, dim)); });
}

void kpcab_kernel_free(kpcab_kernel* kernel) { delete kernel; }

kpcab_status kpcab_dataset_from_rows(const double* data, size_t n, size_t dim, kpcab_dataset** out) {
  if (any_null(data, out)) return null_argument();
  return guarded([&] {
    if (n == 0 || dim == 0) throw kpcab::InputError("dataset needs n >= 1 and dim >= 1");
    // Row-major n x dim is column-major dim x n: one point per column.
    Eigen::Map<const Eigen::MatrixXd> pts(data, static_cast<Eigen::Index>(dim),
                                          static_cast<Eigen::Index>(n));
    if (!pts.allFinite()) throw kpcab::InputError("dataset has non-finite coordinates");
    *out = new kpcab_dataset{kpcab::Dataset{pts, kpcab::DataSource::csv, std::nullopt}};
  });
}

kpcab_status kpcab_dataset_load_csv(const char* path, kpcab_dataset** out) {
  if (any_null(path, out)) return null_argument();
  return guarded([&] { *out = new kpcab_dataset{kpcab::load_csv(path)}; });
}

kpcab_status kpcab_dataset_synthetic(const char* spec, size_t n, uint64_t seed, kpcab_dataset** out) {
  if (any_null(spec, out)) return null_argument();
  return guarded([&] {
    const auto s = kpcab::SyntheticSpec::parse(spec, seed);
    *out = new kpcab_dataset{kpcab::sample(s, static_cast<Eigen::Index>(n))};
  });
}

size_t kpcab_dataset_size(const kpcab_dataset* ds) {
  return ds ? static_cast<size_t>(ds->data.size()) : 0;
}

size_t kpcab_dataset_dim(const kpcab_dataset* ds) {
  return ds ? static_cast<size_t>(ds->data.dim()) : 0;
}

kpcab_status kpcab_dataset_point(const kpcab_dataset* ds, size_t i, double* out) {
  if (any_null(ds, out)) return null_argument();
  return guarded([&] {
    if (i >= static_cast<size_t>(ds->data.size())) throw kpcab::InputError("point index out of range");
    const auto col = ds->data.points.col(static_cast<Eigen::Index>(i));
    std::memcpy(out, col.data(), sizeof(double) * static_cast<size_t>(col.size()));
  });
}

kpcab_status kpcab_dataset_split(const kpcab_dataset* ds, double ratio, uint64_t seed,
                                 kpcab_dataset** first, kpcab_dataset** second) {
  if (any_null(ds, first, second)) return null_argument();
  return guarded([&] {
    auto [a, b] = kpcab::split(ds->data, ratio, seed);
    auto* fa = new kpcab_dataset{std::move(a)};
    try {
      *second = new kpcab_dataset{std::move(b)};
    } catch (...) {
      delete fa;
      throw;
    }
    *first = fa;
  });
}

void kpcab_dataset_free(kpcab_dataset* ds) { delete ds; }

kpcab_status kpcab_model_fit(const kpcab_kernel* kernel, const kpcab_dataset* train,
                             kpcab_model** out) {
  if (any_null(kernel, train, out)) return null_argument();
  return guarded([&] { *out = new kpcab_model{kpcab::fit(kernel->spec, train->data.points)}; });
}

size_t kpcab_model_size(const kpcab_model* model) {
  return model ? static_cast<size_t>(model->model.size()) : 0;
}

size_t kpcab_model_rank(const kpcab_model* model) {
  return model ? static_cast<size_t>(model->model.rank()) : 0;
}

double kpcab_model_r_squared(const kpcab_model* model) {
  return model ? model->model.r_squared() : 0.0;
}

kpcab_status kpcab_model_set_r_squared(kpcab_model* model, double r_squared) {
  if (any_null(model)) return null_argument();
  return guarded([&] { model->model = model->model.with_r_squared(r_squared); });
}

kpcab_status kpcab_model_eigenvalue(const kpcab_model* model, size_t i, double* out) {
  if (any_null(model, out)) return null_argument();
  return guarded([&] {
    const auto& v = model->model.spectrum().values();
    if (i >= static_cast<size_t>(v.size())) throw kpcab::InputError("eigenvalue index out of range");
    *out = v[static_cast<Eigen::Index>(i)];
  });
}

kpcab_status kpcab_model_initial_sum(const kpcab_model* model, size_t k, double* out) {
  if (any_null(model, out)) return null_argument();
  return guarded([&] { *out = model->model.spectrum().initial_sum(static_cast<Eigen::Index>(k)); });
}

kpcab_status kpcab_model_tail_sum(const kpcab_model* model, size_t k, double* out) {
  if (any_null(model, out)) return null_argument();
  return guarded([&] { *out = model->model.spectrum().tail_sum(static_cast<Eigen::Index>(k)); });
}

kpcab_status kpcab_model_projection_sq_norm(const kpcab_model* model, const double* x, size_t dim,
                                            size_t k, double* out) {
  if (any_null(model, x, out)) return null_argument();
  return guarded([&] {
    *out = kpcab::projection_sq_norm(model->model, as_point(x, dim), static_cast<Eigen::Index>(k));
  });
}

kpcab_status kpcab_model_residual_sq_norm(const kpcab_model* model, const double* x, size_t dim,
                                          size_t k, double* out) {
  if (any_null(model, x, out)) return null_argument();
  return guarded([&] {
    *out = kpcab::residual_sq_norm(model->model, as_point(x, dim), static_cast<Eigen::Index>(k));
  });
}

kpcab_status kpcab_model_projection_mean(const kpcab_model* model, const kpcab_dataset* pts,
                                         size_t k, double* out) {
  if (any_null(model, pts, out)) return null_argument();
  return guarded([&] {
    *out = kpcab::empirical_projection_mean(model->model, pts->data.points,
                                            static_cast<Eigen::Index>(k));
  });
}

kpcab_status kpcab_model_residual_mean(const kpcab_model* model, const kpcab_dataset* pts, size_t k,
                                       double* out) {
  if (any_null(model, pts, out)) return null_argument();
  return guarded([&] {
    *out = kpcab::empirical_residual_mean(model->model, pts->data.points,
                                          static_cast<Eigen::Index>(k));
  });
}

void kpcab_model_free(kpcab_model* model) { delete model; }

kpcab_status kpcab_split_penalty(size_t m, double delta, double r_squared, double* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] {
    kpcab::BoundConfig cfg{delta, std::nullopt, r_squared, static_cast<Eigen::Index>(m)};
    *out = kpcab::split_penalty(cfg);
  });
}

kpcab_status kpcab_optimal_alpha(size_t m, double delta, double r_squared, double* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = kpcab::optimal_alpha(static_cast<Eigen::Index>(m), delta, r_squared); });
}

kpcab_status kpcab_pac_bayes_penalty(size_t m, double delta, double r_squared, double alpha,
                                     double* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] {
    kpcab::BoundConfig cfg{delta, alpha, r_squared, static_cast<Eigen::Index>(m)};
    cfg.validate();
    *out = kpcab::pac_bayes_penalty(cfg.m, delta, r_squared, alpha);
  });
}

kpcab_status kpcab_model_bounds(const kpcab_model* model, double delta, int alpha_auto, double alpha,
                                size_t k, kpcab_bounds* out) {
  if (any_null(model, out)) return null_argument();
  return guarded([&] {
    const auto& m = model->model;
    kpcab::BoundConfig cfg{delta, std::nullopt, m.r_squared(), m.size()};
    if (!alpha_auto) cfg.alpha = alpha;
    const auto kk = static_cast<Eigen::Index>(k);
    out->st_proj_lower = kpcab::st2005_projection_lower(m.spectrum(), m.gram(), cfg, kk);
    out->st_resid_upper = kpcab::st2005_residual_upper(m.spectrum(), m.gram(), cfg, kk);
    out->pb_proj_upper = kpcab::pb_projection_upper(m.spectrum(), cfg, kk);
    out->pb_resid_lower = kpcab::pb_residual_lower(m.spectrum(), cfg, kk);
  });
}

kpcab_status kpcab_config_create(kpcab_config** out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = new kpcab_config{}; });
}

kpcab_status kpcab_config_set(kpcab_config* cfg, const char* key, const char* value) {
  if (any_null(cfg, key, value)) return null_argument();
  return guarded([&] { cfg->config.set(key, value); });
}

kpcab_status kpcab_config_to_json(const kpcab_config* cfg, char* buf, size_t buf_len,
                                  size_t* needed) {
  if (any_null(cfg)) return null_argument();
  return guarded([&] {
    const std::string json = cfg->config.to_json();
    if (needed) *needed = json.size();
    if (buf && buf_len > 0) {
      const size_t n = std::min(buf_len - 1, json.size());
      std::memcpy(buf, json.data(), n);
      buf[n] = '\0';
    }
  });
}

void kpcab_config_free(kpcab_config* cfg) { delete cfg; }

kpcab_status kpcab_run(const kpcab_config* cfg) {
  if (any_null(cfg)) return null_argument();
  return guarded([&] { kpcab::run(cfg->config); });
}

}  // extern "C"
