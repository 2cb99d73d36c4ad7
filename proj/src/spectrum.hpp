#pragma once

#include <Eigen/Dense>

#include "kernels.hpp"

namespace kpcab {

/// Descending eigenvalues with matching orthonormal eigenvectors
/// (column i of vectors() pairs with values()[i]).
class EigenSpectrum {
 public:
  EigenSpectrum(Eigen::VectorXd values, Eigen::MatrixXd vectors, int sweeps);

  [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return values_; }
  [[nodiscard]] const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return values_.size(); }
  /// Jacobi sweeps spent; diagnostic only.
  [[nodiscard]] int sweeps() const noexcept { return sweeps_; }
  [[nodiscard]] double trace() const noexcept { return values_.sum(); }

  /// Sum of the k largest eigenvalues, 0 <= k <= m.
  [[nodiscard]] double initial_sum(Eigen::Index k) const;
  /// Sum of eigenvalues k+1..m, 0 <= k <= m.
  [[nodiscard]] double tail_sum(Eigen::Index k) const;

  /// True when cutting at k separates two eigenvalues closer than
  /// 1e-10 * lambda_1, so the top-k basis is not uniquely determined.
  [[nodiscard]] bool tie_split(Eigen::Index k) const;

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
  int sweeps_;
};

struct JacobiOptions {
  int max_sweeps = 100;
  /// Stop once the off-diagonal Frobenius norm falls below this fraction of
  /// the matrix Frobenius norm.
  double relative_tolerance = 1e-12;
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Values are returned sorted descending and are not clamped.
/// Throws NumericalError if the sweep budget runs out.
EigenSpectrum jacobi_eigensolver(const Eigen::MatrixXd& symmetric, const JacobiOptions& options = {});

/// Eigendecomposition of a Gram matrix. Eigenvalues in [-eps*trace, 0) are
/// clamped to zero; anything more negative raises InvalidKernelError.
EigenSpectrum eigendecompose(const GramMatrix& g, const JacobiOptions& options = {});

}  // namespace kpcab
