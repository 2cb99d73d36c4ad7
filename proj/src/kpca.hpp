#pragma once

#include <Eigen/Dense>
#include <optional>

#include "kernels.hpp"
#include "spectrum.hpp"

namespace kpcab {

/// Kernel PCA fitted on a training sample. Projections onto the span of the
/// top-k empirical eigen-directions are evaluated with the kernel trick only.
class KpcaModel {
 public:
  [[nodiscard]] const Points& train() const noexcept { return train_; }
  [[nodiscard]] const KernelSpec& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const GramMatrix& gram() const noexcept { return gram_; }
  [[nodiscard]] const EigenSpectrum& spectrum() const noexcept { return spectrum_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return train_.cols(); }
  [[nodiscard]] Eigen::Index dim() const noexcept { return train_.rows(); }
  /// Number of eigenvalues above 1e-10 * lambda_1.
  [[nodiscard]] Eigen::Index rank() const noexcept { return rank_; }
  /// Upper bound R^2 on kappa(x, x); defaults to the largest training diagonal.
  [[nodiscard]] double r_squared() const noexcept { return r_squared_; }

  /// Copy with R^2 replaced. The value must be positive.
  [[nodiscard]] KpcaModel with_r_squared(double r_squared) const;

  /// Coefficient map: column i is v_i / sqrt(lambda_i) for i < rank, so the
  /// i-th coordinate of psi(x) in the eigenbasis is column_i . k(train, x).
  [[nodiscard]] const Eigen::MatrixXd& coordinate_map() const noexcept { return coordinates_; }

  friend KpcaModel fit(const KernelSpec& kernel, const Points& sample);

 private:
  KpcaModel(Points train, KernelSpec kernel, GramMatrix gram, EigenSpectrum spectrum);

  Points train_;
  KernelSpec kernel_;
  GramMatrix gram_;
  EigenSpectrum spectrum_;
  Eigen::Index rank_ = 0;
  double r_squared_ = 0.0;
  Eigen::MatrixXd coordinates_;
};

/// Directions with lambda_i <= kRankRelativeTolerance * lambda_1 carry no
/// empirical mass and are left out of every projection.
inline constexpr double kRankRelativeTolerance = 1e-10;

/// Residuals more negative than this fraction of kappa(x, x) are reported as
/// a numerical error instead of being clamped.
inline constexpr double kResidualClampTolerance = 1e-10;

/// Fits the model; deterministic in the sample order.
KpcaModel fit(const KernelSpec& kernel, const Points& sample);

/// |P_{V_k} psi(x)|^2 for 1 <= k <= m. k above the rank is truncated to it.
double projection_sq_norm(const KpcaModel& model, PointRef x, Eigen::Index k);

/// kappa(x, x) - |P_{V_k} psi(x)|^2, clamped at zero within tolerance.
double residual_sq_norm(const KpcaModel& model, PointRef x, Eigen::Index k);

/// diag - projection, clamped to zero when the shortfall is within
/// rounding; NumericalError beyond that.
double residual_from(double diag, double projection);

/// Cumulative squared projections for k = 1..k_max in one pass:
/// out[k - 1] = projection_sq_norm(model, x, k).
Eigen::VectorXd projection_profile(const KpcaModel& model, PointRef x, Eigen::Index k_max);

double empirical_projection_mean(const KpcaModel& model, const Points& pts, Eigen::Index k);
double empirical_residual_mean(const KpcaModel& model, const Points& pts, Eigen::Index k);

/// Per-k first and second moments of projection and residual over a batch.
struct ProfileMoments {
  Eigen::Index count = 0;
  Eigen::VectorXd proj_sum, proj_sq_sum;
  Eigen::VectorXd resid_sum, resid_sq_sum;
  double diag_sum = 0.0;
  double diag_max = 0.0;

  void merge(const ProfileMoments& other);
};

/// Streams the batch in blocks; per-k sums are accumulated in point order.
ProfileMoments profile_moments(const KpcaModel& model, const Points& pts, Eigen::Index k_max);

}  // namespace kpcab
