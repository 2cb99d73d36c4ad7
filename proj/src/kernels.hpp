#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>

namespace kpcab {

/// A sample of points stored one point per column (d x n).
using Points = Eigen::MatrixXd;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;

enum class KernelFamily { linear, polynomial, gaussian };

/// Positive semi-definite kernel with validated parameters. Immutable once
/// built through one of the factories.
class KernelSpec {
 public:
  static KernelSpec linear();
  /// (x.y + offset)^degree
  static KernelSpec polynomial(int degree, double offset);
  /// exp(-|x - y|^2 / (2 bandwidth^2))
  static KernelSpec gaussian(double bandwidth);

  /// Parses `linear`, `poly:degree=N,r=V` or `rbf:sigma=V`.
  static KernelSpec parse(std::string_view text);

  [[nodiscard]] KernelFamily family() const noexcept { return family_; }
  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] double offset() const noexcept { return offset_; }
  [[nodiscard]] double bandwidth() const noexcept { return bandwidth_; }

  /// Canonical textual form, accepted back by parse().
  [[nodiscard]] std::string to_string() const;

 private:
  KernelSpec(KernelFamily f, int degree, double offset, double bandwidth)
      : family_(f), degree_(degree), offset_(offset), bandwidth_(bandwidth) {}

  KernelFamily family_;
  int degree_;
  double offset_;
  double bandwidth_;
};

/// kappa(x, y). Throws InputError on dimension mismatch or non-finite input.
double evaluate(const KernelSpec& kernel, PointRef x, PointRef y);

/// Same as evaluate() without argument validation; for inner loops over
/// already validated samples.
double evaluate_unchecked(const KernelSpec& kernel, const double* x, const double* y,
                          Eigen::Index dim) noexcept;

/// Symmetric kernel Gram matrix with cached diagonal statistics.
class GramMatrix {
 public:
  /// Wraps an existing matrix. Refuses anything that is not square and exactly
  /// symmetric.
  static GramMatrix from_matrix(Eigen::MatrixXd entries);

  [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  [[nodiscard]] const Eigen::VectorXd& diag() const noexcept { return diag_; }
  /// sum_i kappa(x_i, x_i)^2
  [[nodiscard]] double diag_sq_sum() const noexcept { return diag_sq_sum_; }
  [[nodiscard]] double trace() const noexcept { return trace_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return entries_.rows(); }

 private:
  explicit GramMatrix(Eigen::MatrixXd entries);
  friend GramMatrix gram(const KernelSpec& kernel, const Points& sample);

  Eigen::MatrixXd entries_;
  Eigen::VectorXd diag_;
  double diag_sq_sum_ = 0.0;
  double trace_ = 0.0;
};

/// Tolerance below zero accepted for quadratic forms and eigenvalues of a
/// Gram matrix, relative to its trace.
inline constexpr double kPsdRelativeTolerance = 1e-8;

/// Gram matrix of `sample` (one point per column). Upper triangle is computed
/// and mirrored.
GramMatrix gram(const KernelSpec& kernel, const Points& sample);

/// Cross-kernel matrix: result(i, j) = kappa(a_i, b_j).
Eigen::MatrixXd cross_gram(const KernelSpec& kernel, const Points& a, const Points& b);

/// Draws `trials` Gaussian coefficient vectors c and checks
/// c'Kc >= -eps * |c|^2 * trace(K) / m for each.
bool psd_spot_check(const GramMatrix& g, int trials, std::uint64_t seed);

}  // namespace kpcab
