#include "kpca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace kpcab {

KpcaModel::KpcaModel(Points train, KernelSpec kernel, GramMatrix gram, EigenSpectrum spectrum)
    : train_(std::move(train)),
      kernel_(kernel),
      gram_(std::move(gram)),
      spectrum_(std::move(spectrum)) {
  const auto& values = spectrum_.values();
  const double threshold = kRankRelativeTolerance * values[0];
  while (rank_ < values.size() && values[rank_] > threshold) ++rank_;
  r_squared_ = gram_.diag().maxCoeff();
  coordinates_.resize(values.size(), rank_);
  for (Eigen::Index i = 0; i < rank_; ++i)
    coordinates_.col(i) = spectrum_.vectors().col(i) / std::sqrt(values[i]);
}

KpcaModel KpcaModel::with_r_squared(double r_squared) const {
  if (!(r_squared > 0.0) || !std::isfinite(r_squared))
    throw InputError("R^2 must be finite and positive");
  KpcaModel copy = *this;
  copy.r_squared_ = r_squared;
  return copy;
}

KpcaModel fit(const KernelSpec& kernel, const Points& sample) {
  GramMatrix g = gram(kernel, sample);
  EigenSpectrum s = eigendecompose(g);
  return KpcaModel(sample, kernel, std::move(g), std::move(s));
}

namespace {

void check_k(const KpcaModel& model, Eigen::Index k) {
  if (k < 1 || k > model.size())
    throw InputError("k = " + std::to_string(k) + " out of range [1, " +
                     std::to_string(model.size()) + "]");
}

void check_point(const KpcaModel& model, PointRef x) {
  if (x.size() != model.dim()) throw InputError("point dimension differs from training data");
  if (!x.allFinite()) throw InputError("point has non-finite coordinates");
}

Eigen::VectorXd kernel_column(const KpcaModel& model, PointRef x) {
  const Eigen::Index m = model.size();
  Eigen::VectorXd kx(m);
  for (Eigen::Index j = 0; j < m; ++j)
    kx[j] = evaluate_unchecked(model.kernel(), model.train().col(j).data(), x.data(), x.size());
  return kx;
}

}  // namespace

double residual_from(double diag, double projection) {
  const double r = diag - projection;
  if (r >= 0.0) return r;
  if (r < -kResidualClampTolerance * std::abs(diag))
    throw NumericalError("squared residual " + std::to_string(r) +
                         " is negative beyond rounding tolerance");
  return 0.0;
}

Eigen::VectorXd projection_profile(const KpcaModel& model, PointRef x, Eigen::Index k_max) {
  check_k(model, k_max);
  check_point(model, x);
  const Eigen::VectorXd kx = kernel_column(model, x);
  Eigen::VectorXd out(k_max);
  double acc = 0.0;
  const Eigen::Index used = std::min(k_max, model.rank());
  for (Eigen::Index i = 0; i < used; ++i) {
    const double c = model.coordinate_map().col(i).dot(kx);
    acc += c * c;
    out[i] = acc;
  }
  for (Eigen::Index i = used; i < k_max; ++i) out[i] = acc;
  return out;
}

double projection_sq_norm(const KpcaModel& model, PointRef x, Eigen::Index k) {
  return projection_profile(model, x, k)[k - 1];
}

double residual_sq_norm(const KpcaModel& model, PointRef x, Eigen::Index k) {
  const double proj = projection_sq_norm(model, x, k);
  return residual_from(evaluate(model.kernel(), x, x), proj);
}

double empirical_projection_mean(const KpcaModel& model, const Points& pts, Eigen::Index k) {
  if (pts.cols() == 0) throw InputError("empirical mean over an empty point list");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < pts.cols(); ++j) sum += projection_sq_norm(model, pts.col(j), k);
  return sum / static_cast<double>(pts.cols());
}

double empirical_residual_mean(const KpcaModel& model, const Points& pts, Eigen::Index k) {
  if (pts.cols() == 0) throw InputError("empirical mean over an empty point list");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < pts.cols(); ++j) sum += residual_sq_norm(model, pts.col(j), k);
  return sum / static_cast<double>(pts.cols());
}

void ProfileMoments::merge(const ProfileMoments& other) {
  if (count == 0) {
    *this = other;
    return;
  }
  count += other.count;
  proj_sum += other.proj_sum;
  proj_sq_sum += other.proj_sq_sum;
  resid_sum += other.resid_sum;
  resid_sq_sum += other.resid_sq_sum;
  diag_sum += other.diag_sum;
  diag_max = std::max(diag_max, other.diag_max);
}

ProfileMoments profile_moments(const KpcaModel& model, const Points& pts, Eigen::Index k_max) {
  check_k(model, k_max);
  if (pts.rows() != model.dim()) throw InputError("point dimension differs from training data");
  if (!pts.allFinite()) throw InputError("points have non-finite coordinates");

  ProfileMoments out;
  out.count = pts.cols();
  out.proj_sum = Eigen::VectorXd::Zero(k_max);
  out.proj_sq_sum = Eigen::VectorXd::Zero(k_max);
  out.resid_sum = Eigen::VectorXd::Zero(k_max);
  out.resid_sq_sum = Eigen::VectorXd::Zero(k_max);

  const Eigen::Index used = std::min(k_max, model.rank());
  const Eigen::MatrixXd map_t = model.coordinate_map().leftCols(used).transpose();
  constexpr Eigen::Index kBlock = 2048;
  for (Eigen::Index start = 0; start < pts.cols(); start += kBlock) {
    const Eigen::Index len = std::min(kBlock, pts.cols() - start);
    const Points block = pts.middleCols(start, len);
    const Eigen::MatrixXd kx = cross_gram(model.kernel(), model.train(), block);
    const Eigen::MatrixXd coords = map_t * kx;
    for (Eigen::Index j = 0; j < len; ++j) {
      const double diag = evaluate_unchecked(model.kernel(), block.col(j).data(),
                                             block.col(j).data(), block.rows());
      out.diag_sum += diag;
      out.diag_max = std::max(out.diag_max, diag);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < k_max; ++i) {
        if (i < used) acc += coords(i, j) * coords(i, j);
        const double resid = residual_from(diag, acc);
        out.proj_sum[i] += acc;
        out.proj_sq_sum[i] += acc * acc;
        out.resid_sum[i] += resid;
        out.resid_sq_sum[i] += resid * resid;
      }
    }
  }
  return out;
}

}  // namespace kpcab
