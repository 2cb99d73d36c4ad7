#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kpca.hpp"

namespace kpcab {

/// Parameters shared by every bound evaluator. `m` is the size of the sample
/// the bound is stated for (the test half for the split bounds).
struct BoundConfig {
  double delta = 0.05;
  std::optional<double> alpha;  ///< nullopt selects the penalty-minimizing exponent
  double r_squared = 1.0;
  Eigen::Index m = 1;

  void validate() const;
};

/// Penalty-minimizing exponent 1/2 + ln(2 ln(1/delta) / R^4) / (2 ln m).
double optimal_alpha(Eigen::Index m, double delta, double r_squared);

/// Explicit alpha unchanged, otherwise optimal_alpha(). Automatic alpha needs
/// m >= 2 and delta < 1.
double resolve_alpha(const BoundConfig& cfg);

/// R^2 sqrt((2/m) ln(1/delta)), shared by both split-sample bounds.
double split_penalty(const BoundConfig& cfg);

/// ln(1/delta) / m^alpha + R^4 / (2 m^(1 - alpha)).
double pac_bayes_penalty(Eigen::Index m, double delta, double r_squared, double alpha);

/// R^2 sqrt((18/m) ln(2m/delta))
double st_residual_confidence(const BoundConfig& cfg);
/// R^2 sqrt((19/m) ln(2(m+1)/delta))
double st_projection_confidence(const BoundConfig& cfg);
/// (1 + sqrt(l)) / sqrt(m) * sqrt((2/m) sum_i kappa(x_i, x_i)^2)
double st_complexity_term(Eigen::Index ell, Eigen::Index m, double diag_sq_sum);

/// Value of a min/max scan over l = 1..k together with the attaining l.
struct ScanResult {
  double value = 0.0;
  Eigen::Index best_ell = 1;
};

/// Upper bound on the expected squared residual from the eigenvalue tail of
/// the fitting sample (min over l <= k plus a confidence term).
ScanResult st2005_residual_scan(const EigenSpectrum& spectrum, const GramMatrix& g,
                                const BoundConfig& cfg, Eigen::Index k);
double st2005_residual_upper(const EigenSpectrum& spectrum, const GramMatrix& g,
                             const BoundConfig& cfg, Eigen::Index k);

/// Lower bound on the expected squared projection, max over l <= k minus a
/// confidence term.
ScanResult st2005_projection_scan(const EigenSpectrum& spectrum, const GramMatrix& g,
                                  const BoundConfig& cfg, Eigen::Index k);
double st2005_projection_lower(const EigenSpectrum& spectrum, const GramMatrix& g,
                               const BoundConfig& cfg, Eigen::Index k);

/// Held-out lower bound on the expected squared projection.
double split_projection_lower(double test_mean, const BoundConfig& cfg);
/// Held-out upper bound on the expected squared residual.
double split_residual_upper(double test_mean, const BoundConfig& cfg);

/// Upper bound on the expected squared projection from the first k empirical
/// eigenvalues.
double pb_projection_upper(const EigenSpectrum& spectrum, const BoundConfig& cfg, Eigen::Index k);
/// Lower bound on the expected squared residual from the eigenvalue tail.
double pb_residual_lower(const EigenSpectrum& spectrum, const BoundConfig& cfg, Eigen::Index k);

/// One row of a bound report. Columns that do not apply are left empty.
struct BoundRow {
  Eigen::Index k = 0;
  double emp_proj_mean = 0.0;   ///< training-sample mean = initial_sum(k) / m
  double emp_resid_mean = 0.0;  ///< training-sample mean = tail_sum(k) / m
  double st_proj_lower = 0.0;
  double st_resid_upper = 0.0;
  std::optional<double> split_proj_lower;
  std::optional<double> split_resid_upper;
  double pb_proj_upper = 0.0;
  double pb_resid_lower = 0.0;
  bool tie_split = false;
  std::optional<double> test_proj_mean;
  std::optional<double> test_resid_mean;
  std::optional<double> pb_proj_upper_half;  ///< alpha = 1/2
  std::optional<double> pb_resid_lower_half;
  std::optional<double> oracle_proj;
  std::optional<double> oracle_proj_se;
  std::optional<double> oracle_resid;
  std::optional<double> oracle_resid_se;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  BoundConfig config;  ///< m is the training size
  std::string kernel;
  Eigen::Index train_size = 0;
  Eigen::Index test_size = 0;
  Eigen::Index st_sample_size = 0;
  double resolved_alpha = 0.0;
  std::uint64_t seed = 0;
  double normalization = 1.0;
  /// trace / m of the training sample, upper clip for plotted values.
  double clip_ceiling = 0.0;
};

/// Source of the eigenvalues and diagonal feeding the baseline bounds. When
/// unset the fitted model's own sample is used.
struct BaselineSource {
  const EigenSpectrum* spectrum = nullptr;
  const GramMatrix* gram = nullptr;
};

/// Assembles rows k = 1..k_max. `cfg.m` is ignored; each bound uses the size
/// of the sample it is stated for.
BoundReport build_report(const KpcaModel& model, const Points* test, const BoundConfig& cfg,
                         Eigen::Index k_max, BaselineSource baseline = {});

}  // namespace kpcab
