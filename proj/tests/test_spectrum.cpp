#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "error.hpp"
#include "spectrum.hpp"
#include "test_helpers.hpp"

using namespace kpcab;
using kpcab::testing::random_orthonormal;
using kpcab::testing::random_points;

namespace {

void check_invariants(const Eigen::MatrixXd& k, const EigenSpectrum& s) {
  const Eigen::Index m = k.rows();
  for (Eigen::Index i = 0; i + 1 < m; ++i) CHECK(s.values()[i] >= s.values()[i + 1]);
  const Eigen::MatrixXd gram = s.vectors().transpose() * s.vectors();
  CHECK((gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-9);
  const Eigen::MatrixXd rebuilt = s.vectors() * s.values().asDiagonal() * s.vectors().transpose();
  CHECK((k - rebuilt).cwiseAbs().maxCoeff() <= 1e-8 * k.cwiseAbs().maxCoeff());
  CHECK(std::abs(s.values().sum() - k.trace()) <= 1e-10 * std::abs(k.trace()));
}

}  // namespace

TEST_CASE("eigendecompose: hand-checked spectra") {
  SUBCASE("identity") {
    const auto s = eigendecompose(GramMatrix::from_matrix(Eigen::MatrixXd::Identity(3, 3)));
    CHECK(s.values() == Eigen::Vector3d(1, 1, 1));
    CHECK((s.vectors().transpose() * s.vectors() - Eigen::Matrix3d::Identity()).norm() < 1e-15);
  }
  SUBCASE("[[2,1],[1,2]] from the characteristic polynomial") {
    Eigen::Matrix2d k;
    k << 2, 1, 1, 2;
    const auto s = eigendecompose(GramMatrix::from_matrix(k));
    CHECK(s.values()[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(s.values()[1] == doctest::Approx(1.0).epsilon(1e-14));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(s.vectors().col(0).dot(Eigen::Vector2d(r, r))) - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(s.vectors().col(1).dot(Eigen::Vector2d(r, -r))) - 1.0) < 1e-14);
  }
  SUBCASE("rank one u u' with |u|^2 = 5") {
    const Eigen::Vector4d u(1, 2, 0, 0);
    const auto s = eigendecompose(GramMatrix::from_matrix(u * u.transpose()));
    CHECK(s.values()[0] == doctest::Approx(5.0).epsilon(1e-14));
    for (int i = 1; i < 4; ++i) CHECK(std::abs(s.values()[i]) <= 1e-14);
  }
}

TEST_CASE("initial and tail sums") {
  Eigen::Matrix3d k = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const auto s = eigendecompose(GramMatrix::from_matrix(k));
  CHECK(s.initial_sum(0) == 0.0);
  CHECK(s.initial_sum(1) == 3.0);
  CHECK(s.initial_sum(3) == 6.0);
  CHECK(s.tail_sum(1) == 3.0);
  CHECK(s.tail_sum(3) == 0.0);
  CHECK(s.tail_sum(0) == 6.0);
  CHECK_THROWS_AS((void)s.initial_sum(4), InputError);
  CHECK_THROWS_AS((void)s.tail_sum(-1), InputError);

  const auto id5 = eigendecompose(GramMatrix::from_matrix(Eigen::MatrixXd::Identity(5, 5)));
  CHECK(id5.initial_sum(2) == 2.0);
}

TEST_CASE("partition identity and monotone sums on random Gram matrices") {
  const GramMatrix g = gram(KernelSpec::gaussian(1.0), random_points(3, 50, 3));
  const auto s = eigendecompose(g);
  check_invariants(g.entries(), s);
  for (Eigen::Index k = 0; k <= s.size(); ++k) {
    CHECK(std::abs(s.initial_sum(k) + s.tail_sum(k) - s.trace()) <= 1e-12 * s.trace());
    if (k > 0) {
      CHECK(s.initial_sum(k) >= s.initial_sum(k - 1));
      CHECK(s.tail_sum(k) <= s.tail_sum(k - 1));
    }
  }
}

TEST_CASE("Jacobi recovers a planted spectrum Q diag(L) Q'") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Eigen::Index n = 5 + 7 * static_cast<Eigen::Index>(seed);
    const Eigen::MatrixXd q = random_orthonormal(n, 100 + seed);
    Eigen::VectorXd lambda(n);
    for (Eigen::Index i = 0; i < n; ++i) lambda[i] = std::pow(0.8, static_cast<double>(i)) * 10.0;
    const Eigen::MatrixXd a = q * lambda.asDiagonal() * q.transpose();
    const auto s = jacobi_eigensolver(a);
    for (Eigen::Index i = 0; i < n; ++i)
      CHECK(std::abs(s.values()[i] - lambda[i]) <= 1e-9 * lambda[i]);
    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    check_invariants(sym, s);
  }
}

TEST_CASE("Jacobi agrees with an independent LAPACK-style solver") {
  const Eigen::MatrixXd pts = random_points(4, 80, 9);
  const GramMatrix g = gram(KernelSpec::polynomial(2, 1.0), pts);
  const auto s = eigendecompose(g);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(g.entries(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd expected = ref.eigenvalues().reverse();
  const double scale = expected[0];
  for (Eigen::Index i = 0; i < expected.size(); ++i)
    CHECK(std::abs(s.values()[i] - std::max(0.0, expected[i])) <= 1e-10 * scale);
  check_invariants(g.entries(), s);
}

TEST_CASE("sample covariance and Gram matrix share their nonzero spectrum") {
  std::uint64_t seed = 40;
  for (Eigen::Index d : {1, 3, 7, 10}) {
    for (Eigen::Index m : {15, 60, 150}) {
      const Eigen::MatrixXd x = random_points(d, m, ++seed);
      const auto s = eigendecompose(gram(KernelSpec::polynomial(1, 0.0), x));
      // Explicit d x d covariance (1/m) sum x_i x_i'.
      const Eigen::MatrixXd c = x * x.transpose() / static_cast<double>(m);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
      const Eigen::VectorXd cov = es.eigenvalues().reverse();
      for (Eigen::Index i = 0; i < d; ++i)
        CHECK(std::abs(s.values()[i] / static_cast<double>(m) - cov[i]) <= 1e-8 * cov[i]);
      for (Eigen::Index i = d; i < m; ++i)
        CHECK(std::abs(s.values()[i]) <= 1e-10 * s.values()[0]);
    }
  }
}

TEST_CASE("eigendecompose: error paths") {
  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(eigendecompose(GramMatrix::from_matrix(indefinite)), InvalidKernelError);

  Eigen::Matrix3d dense;
  dense << 4, 1, 1, 1, 3, 1, 1, 1, 2;
  JacobiOptions no_budget;
  no_budget.max_sweeps = 0;
  CHECK_THROWS_AS(jacobi_eigensolver(dense, no_budget), NumericalError);

  // Tiny negative rounding is clamped to zero.
  Eigen::Matrix2d nearly;
  nearly << 1.0, 1.0, 1.0, 1.0 - 1e-12;
  const auto s = eigendecompose(GramMatrix::from_matrix(nearly));
  CHECK(s.values()[1] == 0.0);
}

TEST_CASE("tie-split flag") {
  const auto s = eigendecompose(GramMatrix::from_matrix(Eigen::Vector4d(3, 2, 2, 1).asDiagonal()));
  CHECK_FALSE(s.tie_split(1));
  CHECK(s.tie_split(2));
  CHECK_FALSE(s.tie_split(3));
  CHECK_FALSE(s.tie_split(4));
}
