#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bounds.hpp"
#include "data.hpp"
#include "kpca.hpp"

namespace kpcab {

enum class Mode { experiment1, experiment2, coverage, single };
enum class Normalization { raw, trace };

Mode parse_mode(std::string_view text);
std::string_view mode_name(Mode mode) noexcept;

inline constexpr const char* kDefaultSynthetic = "gaussian_mixture:dim=5,components=3,scale=1,spread=2";
inline constexpr const char* kDefaultKernel = "rbf:sigma=3";

struct ExperimentConfig {
  Mode mode = Mode::single;
  std::optional<std::string> data_path;
  std::optional<std::string> synthetic;  ///< used when data_path is unset
  std::string kernel = kDefaultKernel;
  double delta = 0.05;
  std::optional<double> alpha;      ///< nullopt = automatic
  std::optional<double> r_squared;  ///< nullopt = automatic
  Eigen::Index k_max = 100;
  double split_ratio = 0.5;
  Eigen::Index trials = 200;
  Eigen::Index oracle_n = 20000;  ///< 0 disables the Monte Carlo oracle
  Eigen::Index n = 696;           ///< synthetic dataset size
  std::uint64_t seed = 0;
  Normalization normalization = Normalization::raw;
  std::string out;
  unsigned threads = 0;  ///< 0 = hardware concurrency

  /// Sets a field from its textual form, e.g. ("delta", "0.05").
  void set(std::string_view key, std::string_view value);
  void validate() const;
  /// Canonical JSON dump for the .meta sidecar.
  [[nodiscard]] std::string to_json() const;

  [[nodiscard]] bool is_synthetic() const noexcept { return !data_path.has_value(); }
  [[nodiscard]] SyntheticSpec synthetic_spec() const;
};

struct OracleEstimate {
  double projection = 0.0;
  double projection_se = 0.0;
  double residual = 0.0;
  double residual_se = 0.0;
  double diag_mean = 0.0;
};

/// Monte Carlo estimates of E|P psi(x)|^2 and E|P_perp psi(x)|^2 for
/// k = 1..k_max from n fresh draws of `spec` (its own seed is replaced by one
/// derived from `seed`).
std::vector<OracleEstimate> mc_oracle_profile(const KpcaModel& model, const SyntheticSpec& spec,
                                              Eigen::Index k_max, Eigen::Index n, std::uint64_t seed);
OracleEstimate mc_oracle(const KpcaModel& model, const SyntheticSpec& spec, Eigen::Index k,
                         Eigen::Index n, std::uint64_t seed);

BoundReport run_experiment1(const ExperimentConfig& cfg);
BoundReport run_experiment2(const ExperimentConfig& cfg);
BoundReport run_single(const ExperimentConfig& cfg);

/// Bounds checked by the coverage harness, in report column order.
enum class BoundKind { st_proj_lower, st_resid_upper, split_proj_lower, split_resid_upper,
                       pb_proj_upper, pb_resid_lower };
inline constexpr std::array<BoundKind, 6> kAllBounds = {
    BoundKind::st_proj_lower,  BoundKind::st_resid_upper, BoundKind::split_proj_lower,
    BoundKind::split_resid_upper, BoundKind::pb_proj_upper, BoundKind::pb_resid_lower};
std::string_view bound_name(BoundKind kind) noexcept;
bool is_lower_bound(BoundKind kind) noexcept;

struct CoverageRow {
  BoundKind bound = BoundKind::split_proj_lower;
  Eigen::Index k = 0;
  Eigen::Index violation_count = 0;
  Eigen::Index trials = 0;
  double violation_rate = 0.0;
  double mean_bound = 0.0;
  double mean_truth = 0.0;
  double mean_truth_se = 0.0;
};

struct CoverageResult {
  std::vector<CoverageRow> rows;  ///< bound-major, then k ascending
  Eigen::Index trials = 0;
  Eigen::Index train_size = 0;
  Eigen::Index test_size = 0;
  double resolved_alpha = 0.0;
  double r_squared_max = 0.0;

  /// Largest per-k violation rate of one bound.
  [[nodiscard]] double worst_rate(BoundKind kind) const;
};

/// Repeats resample / fit / bound / oracle `trials` times and counts, per bound
/// and per k, how often the bound is on the wrong side of the oracle truth by
/// more than two standard errors.
CoverageResult run_coverage(const ExperimentConfig& cfg);

/// CSV column names shared by every BoundReport file.
const std::vector<std::string>& report_columns();

void write_report(const BoundReport& report, const ExperimentConfig& cfg, const std::string& path);
void write_coverage(const CoverageResult& result, const ExperimentConfig& cfg,
                    const std::string& path);

/// Sidecar path: same basename, `.meta` suffix.
std::string meta_path(const std::string& csv_path);

/// Parsed CSV report: header plus cells, empty cells as nullopt.
struct ReportTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};
ReportTable read_report(const std::string& path);

/// Runs the configured mode and writes its files to cfg.out.
void run(const ExperimentConfig& cfg);

}  // namespace kpcab
