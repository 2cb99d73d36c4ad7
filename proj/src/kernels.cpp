#include "kernels.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "error.hpp"
#include "random.hpp"
#include "text.hpp"

namespace kpcab {

KernelSpec KernelSpec::linear() { return {KernelFamily::linear, 1, 0.0, 0.0}; }

KernelSpec KernelSpec::polynomial(int degree, double offset) {
  if (degree < 1) throw InputError("polynomial kernel degree must be >= 1");
  if (!(offset >= 0.0) || !std::isfinite(offset))
    throw InputError("polynomial kernel offset must be finite and >= 0");
  return {KernelFamily::polynomial, degree, offset, 0.0};
}

KernelSpec KernelSpec::gaussian(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw InputError("gaussian kernel bandwidth must be finite and > 0");
  return {KernelFamily::gaussian, 1, 0.0, bandwidth};
}

KernelSpec KernelSpec::parse(std::string_view text) {
  const auto [name, params] = split_family(text);
  if (name == "linear") {
    if (!params.empty()) throw ParseError("linear kernel takes no parameters");
    return linear();
  }
  if (name == "poly" || name == "polynomial") {
    int degree = 2;
    double r = 0.0;
    for (const auto& [key, value] : params) {
      if (key == "degree" || key == "n")
        degree = static_cast<int>(parse_integer(value, "degree"));
      else if (key == "r" || key == "offset")
        r = parse_real(value, "r");
      else
        throw ParseError("unknown polynomial kernel parameter '" + key + "'");
    }
    return polynomial(degree, r);
  }
  if (name == "rbf" || name == "gaussian") {
    double sigma = 1.0;
    for (const auto& [key, value] : params) {
      if (key == "sigma")
        sigma = parse_real(value, "sigma");
      else
        throw ParseError("unknown rbf kernel parameter '" + key + "'");
    }
    return gaussian(sigma);
  }
  throw ParseError("unknown kernel family '" + std::string(name) + "'");
}

std::string KernelSpec::to_string() const {
  switch (family_) {
    case KernelFamily::linear:
      return "linear";
    case KernelFamily::polynomial:
      return "poly:degree=" + std::to_string(degree_) + ",r=" + format_real(offset_);
    case KernelFamily::gaussian:
      return "rbf:sigma=" + format_real(bandwidth_);
  }
  return {};
}

double evaluate_unchecked(const KernelSpec& kernel, const double* x, const double* y,
                          Eigen::Index dim) noexcept {
  switch (kernel.family()) {
    case KernelFamily::linear: {
      double dot = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) dot += x[i] * y[i];
      return dot;
    }
    case KernelFamily::polynomial: {
      double dot = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) dot += x[i] * y[i];
      const double base = dot + kernel.offset();
      double value = base;
      for (int p = 1; p < kernel.degree(); ++p) value *= base;
      return value;
    }
    case KernelFamily::gaussian: {
      double dist2 = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double diff = x[i] - y[i];
        dist2 += diff * diff;
      }
      return std::exp(-dist2 / (2.0 * kernel.bandwidth() * kernel.bandwidth()));
    }
  }
  return 0.0;
}

double evaluate(const KernelSpec& kernel, PointRef x, PointRef y) {
  if (x.size() != y.size()) throw InputError("kernel arguments differ in dimension");
  if (x.size() < 1) throw InputError("kernel arguments must have dimension >= 1");
  if (!x.allFinite() || !y.allFinite()) throw InputError("kernel argument has non-finite coordinate");
  return evaluate_unchecked(kernel, x.data(), y.data(), x.size());
}

GramMatrix::GramMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  diag_ = entries_.diagonal();
  for (Eigen::Index i = 0; i < diag_.size(); ++i) {
    diag_sq_sum_ += diag_[i] * diag_[i];
    trace_ += diag_[i];
  }
}

GramMatrix GramMatrix::from_matrix(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw InputError("Gram matrix must be square and nonempty");
  if (!entries.allFinite()) throw InputError("Gram matrix has non-finite entries");
  for (Eigen::Index j = 0; j < entries.cols(); ++j)
    for (Eigen::Index i = j + 1; i < entries.rows(); ++i)
      if (entries(i, j) != entries(j, i))
        throw InputError("Gram matrix is not exactly symmetric at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
  return GramMatrix(std::move(entries));
}

namespace {

void check_sample(const Points& sample, const char* what) {
  if (sample.cols() == 0) throw InputError(std::string(what) + " is empty");
  if (sample.rows() < 1) throw InputError(std::string(what) + " has dimension 0");
  if (!sample.allFinite()) throw InputError(std::string(what) + " has non-finite coordinates");
}

}  // namespace

GramMatrix gram(const KernelSpec& kernel, const Points& sample) {
  check_sample(sample, "sample");
  const Eigen::Index m = sample.cols();
  const Eigen::Index d = sample.rows();
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = evaluate_unchecked(kernel, sample.col(i).data(), sample.col(j).data(), d);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return GramMatrix(std::move(k));
}

Eigen::MatrixXd cross_gram(const KernelSpec& kernel, const Points& a, const Points& b) {
  check_sample(a, "first sample");
  check_sample(b, "second sample");
  if (a.rows() != b.rows()) throw InputError("samples differ in dimension");
  Eigen::MatrixXd out(a.cols(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      out(i, j) = evaluate_unchecked(kernel, a.col(i).data(), b.col(j).data(), a.rows());
  return out;
}

bool psd_spot_check(const GramMatrix& g, int trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("psd_spot_check needs at least one trial");
  const Eigen::Index m = g.size();
  RandomStream rng(seed, StreamPurpose::coefficients);
  Eigen::VectorXd c(m);
  const double scale = kPsdRelativeTolerance * std::abs(g.trace()) / static_cast<double>(m);
  for (int t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i < m; ++i) c[i] = rng.normal();
    const double form = c.dot(g.entries() * c);
    if (form < -scale * c.squaredNorm()) return false;
  }
  return true;
}

}  // namespace kpcab
