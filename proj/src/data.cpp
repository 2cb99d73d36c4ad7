#include "data.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "error.hpp"
#include "random.hpp"
#include "text.hpp"

namespace kpcab {

void SyntheticSpec::validate() const {
  if (dim < 1) throw InputError("synthetic dimension must be >= 1");
  switch (family) {
    case SyntheticFamily::gaussian_mixture: {
      if (means.empty()) throw InputError("mixture needs at least one component");
      if (weights.size() != means.size() || scales.size() != means.size())
        throw InputError("mixture means, weights and scales differ in length");
      double total = 0.0;
      for (std::size_t c = 0; c < means.size(); ++c) {
        if (means[c].size() != dim) throw InputError("mixture mean has wrong dimension");
        if (!means[c].allFinite()) throw InputError("mixture mean is not finite");
        if (!(weights[c] > 0.0)) throw InputError("mixture weights must be positive");
        if (!(scales[c] > 0.0) || !std::isfinite(scales[c]))
          throw InputError("mixture scales must be positive");
        total += weights[c];
      }
      if (std::abs(total - 1.0) > 1e-12) throw InputError("mixture weights must sum to 1");
      break;
    }
    case SyntheticFamily::uniform_cube:
      if (!(half_width >= 0.0) || !std::isfinite(half_width))
        throw InputError("cube half-width must be finite and >= 0");
      break;
    case SyntheticFamily::ring:
      if (!(inner_radius >= 0.0) || !(outer_radius >= inner_radius) || !std::isfinite(outer_radius))
        throw InputError("ring radii must satisfy 0 <= inner <= outer < inf");
      break;
  }
}

SyntheticSpec SyntheticSpec::parse(std::string_view text, std::uint64_t seed) {
  const auto [name, params] = split_family(text);
  SyntheticSpec spec;
  spec.seed = seed;
  if (name == "gaussian_mixture" || name == "mixture") {
    spec.family = SyntheticFamily::gaussian_mixture;
    std::int64_t components = 1;
    double scale = 1.0;
    double spread = 1.0;
    for (const auto& [key, value] : params) {
      if (key == "dim") spec.dim = parse_integer(value, key);
      else if (key == "components") components = parse_integer(value, key);
      else if (key == "scale") scale = parse_real(value, key);
      else if (key == "spread") spread = parse_real(value, key);
      else throw ParseError("unknown mixture parameter '" + key + "'");
    }
    if (components < 1) throw InputError("mixture needs at least one component");
    if (spec.dim < 1) throw InputError("synthetic dimension must be >= 1");
    if (!(spread >= 0.0)) throw InputError("mixture spread must be >= 0");
    RandomStream rng(seed, StreamPurpose::mixture_means);
    for (std::int64_t c = 0; c < components; ++c) {
      Eigen::VectorXd mean(spec.dim);
      for (Eigen::Index i = 0; i < spec.dim; ++i) mean[i] = spread * rng.normal();
      spec.means.push_back(std::move(mean));
      spec.weights.push_back(1.0 / static_cast<double>(components));
      spec.scales.push_back(scale);
    }
  } else if (name == "uniform_cube" || name == "cube") {
    spec.family = SyntheticFamily::uniform_cube;
    for (const auto& [key, value] : params) {
      if (key == "dim") spec.dim = parse_integer(value, key);
      else if (key == "half_width") spec.half_width = parse_real(value, key);
      else throw ParseError("unknown cube parameter '" + key + "'");
    }
  } else if (name == "ring") {
    spec.family = SyntheticFamily::ring;
    for (const auto& [key, value] : params) {
      if (key == "dim") spec.dim = parse_integer(value, key);
      else if (key == "inner") spec.inner_radius = parse_real(value, key);
      else if (key == "outer") spec.outer_radius = parse_real(value, key);
      else throw ParseError("unknown ring parameter '" + key + "'");
    }
  } else {
    throw ParseError("unknown synthetic family '" + name + "'");
  }
  spec.validate();
  return spec;
}

std::string SyntheticSpec::to_string() const {
  std::ostringstream out;
  switch (family) {
    case SyntheticFamily::gaussian_mixture:
      out << "gaussian_mixture:dim=" << dim << ",components=" << means.size();
      for (std::size_t c = 0; c < means.size(); ++c) {
        out << ",w" << c << '=' << format_real(weights[c]) << ",s" << c << '='
            << format_real(scales[c]) << ",mu" << c << "=(";
        for (Eigen::Index i = 0; i < dim; ++i) out << (i ? " " : "") << format_real(means[c][i]);
        out << ')';
      }
      break;
    case SyntheticFamily::uniform_cube:
      out << "uniform_cube:dim=" << dim << ",half_width=" << format_real(half_width);
      break;
    case SyntheticFamily::ring:
      out << "ring:dim=" << dim << ",inner=" << format_real(inner_radius)
          << ",outer=" << format_real(outer_radius);
      break;
  }
  return out.str();
}

Dataset parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  bool first_content = true;
  std::size_t width = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    if (trim(line).empty()) continue;

    std::vector<std::string_view> cells;
    for (std::string_view rest = line;;) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    std::vector<double> values;
    values.reserve(cells.size());
    bool numeric = true;
    for (const auto cell : cells) {
      const auto v = try_parse_real(cell);
      if (!v || !std::isfinite(*v)) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    const bool header_row = first_content && !numeric;
    first_content = false;
    if (header_row) {
      width = cells.size();
      continue;
    }
    if (!numeric)
      throw ParseError("row " + std::to_string(line_no) + ": non-numeric or non-finite cell");
    if (width == 0) width = values.size();
    if (values.size() != width)
      throw ParseError("row " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " columns, found " + std::to_string(values.size()));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw InputError("CSV input contains no data rows");

  Dataset ds;
  ds.source = DataSource::csv;
  ds.points.resize(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < width; ++i)
      ds.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
  return ds;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

Dataset sample(const SyntheticSpec& spec, Eigen::Index n) {
  if (n < 1) throw InputError("sample size must be >= 1");
  spec.validate();
  RandomStream rng(spec.seed, StreamPurpose::sampling);
  Dataset ds;
  ds.source = DataSource::synthetic;
  ds.seed = spec.seed;
  ds.points.resize(spec.dim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto x = ds.points.col(j);
    switch (spec.family) {
      case SyntheticFamily::gaussian_mixture: {
        const double u = rng.uniform();
        std::size_t c = 0;
        double cumulative = spec.weights[0];
        while (c + 1 < spec.weights.size() && u >= cumulative) cumulative += spec.weights[++c];
        for (Eigen::Index i = 0; i < spec.dim; ++i)
          x[i] = spec.means[c][i] + spec.scales[c] * rng.normal();
        break;
      }
      case SyntheticFamily::uniform_cube:
        for (Eigen::Index i = 0; i < spec.dim; ++i)
          x[i] = spec.half_width * (2.0 * rng.uniform() - 1.0);
        break;
      case SyntheticFamily::ring: {
        // Uniform direction, radius uniform in [inner, outer].
        double norm2 = 0.0;
        do {
          norm2 = 0.0;
          for (Eigen::Index i = 0; i < spec.dim; ++i) {
            x[i] = rng.normal();
            norm2 += x[i] * x[i];
          }
        } while (norm2 == 0.0);
        const double radius =
            spec.inner_radius + (spec.outer_radius - spec.inner_radius) * rng.uniform();
        x *= radius / std::sqrt(norm2);
        break;
      }
    }
  }
  return ds;
}

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed,
                                           std::uint64_t stream) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  RandomStream rng(seed, StreamPurpose::splitting, stream);
  for (std::size_t i = idx.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

Points select(const Points& pts, const std::vector<Eigen::Index>& idx, std::size_t begin,
              std::size_t end) {
  Points out(pts.rows(), static_cast<Eigen::Index>(end - begin));
  for (std::size_t j = begin; j < end; ++j)
    out.col(static_cast<Eigen::Index>(j - begin)) = pts.col(idx[j]);
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InputError("split ratio must lie in (0, 1)");
  const Eigen::Index n = ds.size();
  Eigen::Index first = static_cast<Eigen::Index>(std::floor(static_cast<double>(n) * ratio));
  first = std::max<Eigen::Index>(first, 1);
  if (first >= n)
    throw InputError("split ratio " + format_real(ratio) + " leaves an empty half for " +
                     std::to_string(n) + " points");
  const auto idx = shuffled_indices(n, seed, 0);
  Dataset a{select(ds.points, idx, 0, static_cast<std::size_t>(first)), ds.source, ds.seed};
  Dataset b{select(ds.points, idx, static_cast<std::size_t>(first), static_cast<std::size_t>(n)),
            ds.source, ds.seed};
  return {std::move(a), std::move(b)};
}

}  // namespace kpcab
