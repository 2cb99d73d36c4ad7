#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"

namespace kpcab {

EigenSpectrum::EigenSpectrum(Eigen::VectorXd values, Eigen::MatrixXd vectors, int sweeps)
    : values_(std::move(values)), vectors_(std::move(vectors)), sweeps_(sweeps) {}

double EigenSpectrum::initial_sum(Eigen::Index k) const {
  if (k < 0 || k > size()) throw InputError("initial_sum: k out of range [0, m]");
  double s = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) s += values_[i];
  return s;
}

double EigenSpectrum::tail_sum(Eigen::Index k) const {
  if (k < 0 || k > size()) throw InputError("tail_sum: k out of range [0, m]");
  double s = 0.0;
  for (Eigen::Index i = k; i < size(); ++i) s += values_[i];
  return s;
}

bool EigenSpectrum::tie_split(Eigen::Index k) const {
  if (k <= 0 || k >= size()) return false;
  return values_[k - 1] - values_[k] <= 1e-10 * values_[0];
}

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

// Applies the rotation zeroing a(p, q). Columns p and q are updated in place
// and mirrored into rows p and q so the working matrix stays exactly
// symmetric.
void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150)
    t = 0.5 / theta;
  else
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  const Eigen::Index n = a.rows();
  double* col_p = a.col(p).data();
  double* col_q = a.col(q).data();
  for (Eigen::Index r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    const double arp = col_p[r];
    const double arq = col_q[r];
    col_p[r] = arp - s * (arq + tau * arp);
    col_q[r] = arq + s * (arp - tau * arq);
    a(p, r) = col_p[r];
    a(q, r) = col_q[r];
  }
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  double* vp = v.col(p).data();
  double* vq = v.col(q).data();
  for (Eigen::Index r = 0; r < n; ++r) {
    const double x = vp[r];
    const double y = vq[r];
    vp[r] = x - s * (y + tau * x);
    vq[r] = y + s * (x - tau * y);
  }
}

}  // namespace

EigenSpectrum jacobi_eigensolver(const Eigen::MatrixXd& symmetric, const JacobiOptions& options) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0)
    throw InputError("eigensolver needs a nonempty square matrix");
  if (!symmetric.allFinite()) throw InputError("eigensolver input has non-finite entries");

  const Eigen::Index n = symmetric.rows();
  // Exact symmetry is assumed by the rotation update.
  Eigen::MatrixXd a = 0.5 * (symmetric + symmetric.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = options.relative_tolerance * symmetric.norm();

  int sweep = 0;
  for (;; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    if (sweep >= options.max_sweeps)
      throw NumericalError("Jacobi eigensolver did not converge within " +
                           std::to_string(options.max_sweeps) + " sweeps");
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Entries negligible against both diagonal values are dropped once the
        // iteration has settled.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values[i] = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return EigenSpectrum(std::move(values), std::move(vectors), sweep);
}

EigenSpectrum eigendecompose(const GramMatrix& g, const JacobiOptions& options) {
  EigenSpectrum raw = jacobi_eigensolver(g.entries(), options);
  Eigen::VectorXd values = raw.values();
  const double floor = -kPsdRelativeTolerance * std::abs(g.trace());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] >= 0.0) continue;
    if (values[i] < floor)
      throw InvalidKernelError("Gram matrix has eigenvalue " + std::to_string(values[i]) +
                               " below the PSD tolerance; kernel is not positive semi-definite");
    values[i] = 0.0;
  }
  return EigenSpectrum(std::move(values), raw.vectors(), raw.sweeps());
}

}  // namespace kpcab
