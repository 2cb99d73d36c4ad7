#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kernels.hpp"

namespace kpcab {

enum class DataSource { csv, synthetic };

struct Dataset {
  Points points;  ///< one point per column
  DataSource source = DataSource::csv;
  std::optional<std::uint64_t> seed;

  [[nodiscard]] Eigen::Index size() const noexcept { return points.cols(); }
  [[nodiscard]] Eigen::Index dim() const noexcept { return points.rows(); }
};

enum class SyntheticFamily { gaussian_mixture, uniform_cube, ring };

/// A known sampling distribution. Mixture components are isotropic Gaussians.
struct SyntheticSpec {
  SyntheticFamily family = SyntheticFamily::gaussian_mixture;
  Eigen::Index dim = 2;
  std::vector<Eigen::VectorXd> means;
  std::vector<double> weights;
  std::vector<double> scales;
  double half_width = 1.0;  ///< cube [-h, h]^d; h = 0 is a point mass at the origin
  double inner_radius = 1.0;
  double outer_radius = 2.0;
  std::uint64_t seed = 0;

  void validate() const;

  /// Parses `gaussian_mixture:dim=D,components=C,scale=S,spread=T`,
  /// `uniform_cube:dim=D,half_width=H` or `ring:dim=D,inner=A,outer=B`.
  /// Mixture means are drawn once from N(0, spread^2 I) on a dedicated stream
  /// of `seed`; weights are equal.
  static SyntheticSpec parse(std::string_view text, std::uint64_t seed);

  [[nodiscard]] std::string to_string() const;
};

/// Comma-separated decimal rows, one point per row. A first row containing
/// any non-numeric cell is taken as a header.
Dataset load_csv(const std::string& path);
Dataset parse_csv(std::string_view text);

/// n iid draws, bit-identical for identical (spec, n).
Dataset sample(const SyntheticSpec& spec, Eigen::Index n);

/// Seeded uniform shuffle, then the first floor(n * ratio) points (at least
/// one) go to the first half.
std::pair<Dataset, Dataset> split(const Dataset& ds, double ratio, std::uint64_t seed);

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed, std::uint64_t stream);

/// Selects the given columns in order.
Points select(const Points& pts, const std::vector<Eigen::Index>& idx, std::size_t begin,
              std::size_t end);

}  // namespace kpcab
