#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <type_traits>

#include "error.hpp"
#include "random.hpp"
#include "text.hpp"
#include "json.hpp"

namespace kpcab {

Mode parse_mode(std::string_view text) {
  if (text == "experiment1") return Mode::experiment1;
  if (text == "experiment2") return Mode::experiment2;
  if (text == "coverage") return Mode::coverage;
  if (text == "single") return Mode::single;
  throw ParseError("unknown mode '" + std::string(text) + "'");
}

std::string_view mode_name(Mode mode) noexcept {
  switch (mode) {
    case Mode::experiment1: return "experiment1";
    case Mode::experiment2: return "experiment2";
    case Mode::coverage: return "coverage";
    case Mode::single: return "single";
  }
  return "";
}

namespace {

Eigen::Index parse_count(std::string_view value, std::string_view key) {
  const auto v = parse_integer(value, key);
  if (v < 0) throw InputError(std::string(key) + " must be >= 0");
  return static_cast<Eigen::Index>(v);
}

std::optional<double> parse_auto_real(std::string_view value, std::string_view key) {
  if (trim(value) == "auto") return std::nullopt;
  return parse_real(value, key);
}

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  if (key == "mode") mode = parse_mode(trim(value));
  else if (key == "data") { data_path = std::string(value); synthetic.reset(); }
  else if (key == "synthetic") { synthetic = std::string(value); data_path.reset(); }
  else if (key == "kernel") kernel = std::string(value);
  else if (key == "delta") delta = parse_real(value, key);
  else if (key == "alpha") alpha = parse_auto_real(value, key);
  else if (key == "r2") r_squared = parse_auto_real(value, key);
  else if (key == "k_max" || key == "k-max") k_max = parse_count(value, key);
  else if (key == "split_ratio" || key == "split-ratio") split_ratio = parse_real(value, key);
  else if (key == "trials") trials = parse_count(value, key);
  else if (key == "oracle_n" || key == "oracle-n") oracle_n = parse_count(value, key);
  else if (key == "n") n = parse_count(value, key);
  else if (key == "seed") {
    const std::string_view t = trim(value);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
      throw ParseError("invalid seed '" + std::string(value) + "'");
    seed = v;
  } else if (key == "normalize") {
    if (trim(value) == "raw") normalization = Normalization::raw;
    else if (trim(value) == "trace") normalization = Normalization::trace;
    else throw ParseError("normalize must be raw or trace");
  } else if (key == "out") out = std::string(value);
  else if (key == "threads") threads = static_cast<unsigned>(parse_count(value, key));
  else throw InputError("unknown configuration key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw InputError("delta must lie in (0, 1]");
  if (alpha && !std::isfinite(*alpha)) throw InputError("alpha must be finite");
  if (r_squared && (!(*r_squared > 0.0) || !std::isfinite(*r_squared)))
    throw InputError("r2 must be finite and positive");
  if (k_max < 1) throw InputError("k_max must be >= 1");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw InputError("split ratio must lie in (0, 1)");
  if (mode == Mode::coverage && trials < 1) throw InputError("coverage needs trials >= 1");
  if (oracle_n != 0 && oracle_n < 1000) throw InputError("oracle_n must be 0 (off) or >= 1000");
  if (mode == Mode::coverage && oracle_n == 0) throw InputError("coverage needs the oracle");
  if (mode == Mode::coverage && !is_synthetic())
    throw UnsupportedError("coverage needs a synthetic source; the distribution of a CSV file is unknown");
  if (is_synthetic() && n < 2) throw InputError("n must be >= 2");
  (void)KernelSpec::parse(kernel);
  if (is_synthetic()) (void)synthetic_spec();
}

SyntheticSpec ExperimentConfig::synthetic_spec() const {
  return SyntheticSpec::parse(synthetic.value_or(kDefaultSynthetic), seed);
}

std::string ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["mode"] = std::string(mode_name(mode));
  if (data_path) j["data"] = *data_path;
  else j["synthetic"] = synthetic_spec().to_string();
  j["kernel"] = KernelSpec::parse(kernel).to_string();
  j["delta"] = delta;
  j["alpha"] = alpha ? nlohmann::ordered_json(*alpha) : nlohmann::ordered_json("auto");
  j["r2"] = r_squared ? nlohmann::ordered_json(*r_squared) : nlohmann::ordered_json("auto");
  j["k_max"] = k_max;
  j["split_ratio"] = split_ratio;
  j["trials"] = trials;
  j["oracle_n"] = oracle_n;
  j["n"] = n;
  j["seed"] = seed;
  j["normalize"] = normalization == Normalization::raw ? "raw" : "trace";
  return j.dump(2);
}

// Monte Carlo oracle -------------------------------------------------------

std::vector<OracleEstimate> mc_oracle_profile(const KpcaModel& model, const SyntheticSpec& spec,
                                              Eigen::Index k_max, Eigen::Index n,
                                              std::uint64_t seed) {
  if (n < 1000) throw InputError("oracle needs at least 1000 draws");
  if (spec.dim != model.dim()) throw InputError("oracle distribution dimension differs from model");
  SyntheticSpec draw_spec = spec;
  draw_spec.seed = derive_seed(seed, StreamPurpose::oracle);
  const Dataset fresh = sample(draw_spec, n);
  const ProfileMoments mom = profile_moments(model, fresh.points, k_max);

  const double nd = static_cast<double>(n);
  const auto mean_se = [nd](double sum, double sq_sum) {
    const double mean = sum / nd;
    const double var = std::max(0.0, (sq_sum - sum * mean) / (nd - 1.0));
    return std::pair{mean, std::sqrt(var / nd)};
  };
  std::vector<OracleEstimate> out(static_cast<std::size_t>(k_max));
  for (Eigen::Index i = 0; i < k_max; ++i) {
    auto& e = out[static_cast<std::size_t>(i)];
    std::tie(e.projection, e.projection_se) = mean_se(mom.proj_sum[i], mom.proj_sq_sum[i]);
    std::tie(e.residual, e.residual_se) = mean_se(mom.resid_sum[i], mom.resid_sq_sum[i]);
    e.diag_mean = mom.diag_sum / nd;
  }
  return out;
}

OracleEstimate mc_oracle(const KpcaModel& model, const SyntheticSpec& spec, Eigen::Index k,
                         Eigen::Index n, std::uint64_t seed) {
  if (k < 1 || k > model.size()) throw InputError("k out of range [1, m]");
  return mc_oracle_profile(model, spec, k, n, seed).back();
}

// Experiments ------------------------------------------------------------

namespace {

struct Protocol {
  Dataset data;
  std::optional<SyntheticSpec> spec;
  KernelSpec kernel;
};

Protocol load(const ExperimentConfig& cfg) {
  cfg.validate();
  Protocol p{Dataset{}, std::nullopt, KernelSpec::parse(cfg.kernel)};
  if (cfg.data_path) {
    p.data = load_csv(*cfg.data_path);
  } else {
    p.spec = cfg.synthetic_spec();
    p.data = sample(*p.spec, cfg.n);
  }
  return p;
}

double max_diag(const KernelSpec& kernel, const Points& pts) {
  double r2 = 0.0;
  for (Eigen::Index j = 0; j < pts.cols(); ++j)
    r2 = std::max(r2, evaluate_unchecked(kernel, pts.col(j).data(), pts.col(j).data(), pts.rows()));
  return r2;
}

BoundConfig bound_config(const ExperimentConfig& cfg, double seen_r2) {
  BoundConfig b;
  b.delta = cfg.delta;
  b.alpha = cfg.alpha;
  b.r_squared = cfg.r_squared.value_or(seen_r2);
  return b;
}

void attach_oracle(BoundReport& report, const KpcaModel& model, const Protocol& p,
                   const ExperimentConfig& cfg, Eigen::Index k_max) {
  if (!p.spec || cfg.oracle_n == 0) return;
  const auto oracle = mc_oracle_profile(model, *p.spec, k_max, cfg.oracle_n, cfg.seed);
  for (auto& row : report.rows) {
    const auto& e = oracle[static_cast<std::size_t>(row.k - 1)];
    row.oracle_proj = e.projection;
    row.oracle_proj_se = e.projection_se;
    row.oracle_resid = e.residual;
    row.oracle_resid_se = e.residual_se;
  }
}

void attach_half_alpha(BoundReport& report, const KpcaModel& model, const BoundConfig& bcfg) {
  BoundConfig half = bcfg;
  half.alpha = 0.5;
  half.m = model.size();
  for (auto& row : report.rows) {
    row.pb_proj_upper_half = pb_projection_upper(model.spectrum(), half, row.k);
    row.pb_resid_lower_half = pb_residual_lower(model.spectrum(), half, row.k);
  }
}

void scale_row(BoundRow& row, double c) {
  const auto div = [c](auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>)
      v /= c;
    else if (v)
      *v /= c;
  };
  div(row.emp_proj_mean); div(row.emp_resid_mean);
  div(row.st_proj_lower); div(row.st_resid_upper);
  div(row.split_proj_lower); div(row.split_resid_upper);
  div(row.pb_proj_upper); div(row.pb_resid_lower);
  div(row.test_proj_mean); div(row.test_resid_mean);
  div(row.pb_proj_upper_half); div(row.pb_resid_lower_half);
  div(row.oracle_proj); div(row.oracle_proj_se);
  div(row.oracle_resid); div(row.oracle_resid_se);
}

void normalize(BoundReport& report, const KpcaModel& model, const ExperimentConfig& cfg) {
  report.seed = cfg.seed;
  if (cfg.normalization == Normalization::raw) return;
  const double c = model.gram().trace() / static_cast<double>(model.size());
  if (!(c > 0.0)) throw NumericalError("trace normalization undefined: training diagonal is zero");
  report.normalization = c;
  report.clip_ceiling /= c;
  for (auto& row : report.rows) scale_row(row, c);
}

// Two-sample protocol: 2m = 2 floor(N / 4) points are drawn from the data,
// split into a fitting half and a held-out half.
BoundReport run_paired(const ExperimentConfig& cfg, bool half_alpha) {
  const Protocol p = load(cfg);
  const Eigen::Index pair_size = 2 * (p.data.size() / 4);
  if (pair_size < 2) throw InputError("experiment protocol needs at least 4 data points");
  const auto idx = shuffled_indices(p.data.size(), cfg.seed, 1);
  Dataset s{select(p.data.points, idx, 0, static_cast<std::size_t>(pair_size)), p.data.source,
            p.data.seed};
  auto [s1, s2] = split(s, cfg.split_ratio, cfg.seed);
  if (cfg.k_max > s1.size())
    throw InputError("k_max = " + std::to_string(cfg.k_max) + " exceeds the fitting half size " +
                     std::to_string(s1.size()));

  const KernelSpec& kernel = p.kernel;
  const BoundConfig bcfg = bound_config(cfg, max_diag(kernel, s.points));
  const KpcaModel model = fit(kernel, s1.points).with_r_squared(bcfg.r_squared);
  // Baseline bounds use the eigenvalues of the whole 2m-sample.
  const GramMatrix full_gram = gram(kernel, s.points);
  const EigenSpectrum full_spectrum = eigendecompose(full_gram);

  BoundReport report =
      build_report(model, &s2.points, bcfg, cfg.k_max, BaselineSource{&full_spectrum, &full_gram});
  if (half_alpha) attach_half_alpha(report, model, bcfg);
  attach_oracle(report, model, p, cfg, cfg.k_max);
  normalize(report, model, cfg);
  return report;
}

}  // namespace

BoundReport run_experiment1(const ExperimentConfig& cfg) {
  if (cfg.mode != Mode::experiment1) throw InputError("config mode is not experiment1");
  return run_paired(cfg, false);
}

BoundReport run_experiment2(const ExperimentConfig& cfg) {
  if (cfg.mode != Mode::experiment2) throw InputError("config mode is not experiment2");
  return run_paired(cfg, true);
}

BoundReport run_single(const ExperimentConfig& cfg) {
  const Protocol p = load(cfg);
  auto [train, test] = split(p.data, cfg.split_ratio, cfg.seed);
  if (cfg.k_max > train.size())
    throw InputError("k_max = " + std::to_string(cfg.k_max) + " exceeds the training size " +
                     std::to_string(train.size()));
  const BoundConfig bcfg = bound_config(cfg, max_diag(p.kernel, p.data.points));
  const KpcaModel model = fit(p.kernel, train.points).with_r_squared(bcfg.r_squared);
  BoundReport report = build_report(model, &test.points, bcfg, cfg.k_max);
  attach_oracle(report, model, p, cfg, cfg.k_max);
  normalize(report, model, cfg);
  return report;
}

// Coverage ---------------------------------------------------------------

std::string_view bound_name(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::st_proj_lower: return "st_proj_lower";
    case BoundKind::st_resid_upper: return "st_resid_upper";
    case BoundKind::split_proj_lower: return "split_proj_lower";
    case BoundKind::split_resid_upper: return "split_resid_upper";
    case BoundKind::pb_proj_upper: return "pb_proj_upper";
    case BoundKind::pb_resid_lower: return "pb_resid_lower";
  }
  return "";
}

bool is_lower_bound(BoundKind kind) noexcept {
  return kind == BoundKind::st_proj_lower || kind == BoundKind::split_proj_lower ||
         kind == BoundKind::pb_resid_lower;
}

double CoverageResult::worst_rate(BoundKind kind) const {
  double worst = 0.0;
  for (const auto& r : rows)
    if (r.bound == kind) worst = std::max(worst, r.violation_rate);
  return worst;
}

namespace {

bool is_projection_bound(BoundKind kind) {
  return kind == BoundKind::st_proj_lower || kind == BoundKind::split_proj_lower ||
         kind == BoundKind::pb_proj_upper;
}

double bound_value(const BoundRow& row, BoundKind kind) {
  switch (kind) {
    case BoundKind::st_proj_lower: return row.st_proj_lower;
    case BoundKind::st_resid_upper: return row.st_resid_upper;
    case BoundKind::split_proj_lower: return *row.split_proj_lower;
    case BoundKind::split_resid_upper: return *row.split_resid_upper;
    case BoundKind::pb_proj_upper: return row.pb_proj_upper;
    case BoundKind::pb_resid_lower: return row.pb_resid_lower;
  }
  return 0.0;
}

struct TrialOutcome {
  // [bound][k - 1]
  std::array<std::vector<char>, kAllBounds.size()> violated;
  std::array<std::vector<double>, kAllBounds.size()> bound;
  std::vector<OracleEstimate> oracle;
  Eigen::Index train_size = 0;
  Eigen::Index test_size = 0;
  double alpha = 0.0;
  double r_squared = 0.0;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, const SyntheticSpec& spec,
                       const KernelSpec& kernel, Eigen::Index trial) {
  // Every draw of a trial (data, split, oracle) hangs off one trial seed.
  const std::uint64_t trial_seed = derive_seed(cfg.seed, StreamPurpose::trial,
                                               static_cast<std::uint64_t>(trial));
  SyntheticSpec trial_spec = spec;
  trial_spec.seed = trial_seed;
  const Dataset data = sample(trial_spec, cfg.n);
  auto [train, test] = split(data, cfg.split_ratio, trial_seed);
  if (cfg.k_max > train.size())
    throw InputError("k_max exceeds the training size in coverage mode");

  const BoundConfig bcfg = bound_config(cfg, max_diag(kernel, data.points));
  const KpcaModel model = fit(kernel, train.points).with_r_squared(bcfg.r_squared);
  const BoundReport report = build_report(model, &test.points, bcfg, cfg.k_max);

  TrialOutcome out;
  out.oracle = mc_oracle_profile(model, spec, cfg.k_max, cfg.oracle_n, trial_seed);
  out.train_size = train.size();
  out.test_size = test.size();
  out.alpha = report.resolved_alpha;
  out.r_squared = bcfg.r_squared;
  for (std::size_t b = 0; b < kAllBounds.size(); ++b) {
    const BoundKind kind = kAllBounds[b];
    out.violated[b].resize(static_cast<std::size_t>(cfg.k_max));
    out.bound[b].resize(static_cast<std::size_t>(cfg.k_max));
    for (const auto& row : report.rows) {
      const auto i = static_cast<std::size_t>(row.k - 1);
      const auto& truth = out.oracle[i];
      const double t = is_projection_bound(kind) ? truth.projection : truth.residual;
      const double se = is_projection_bound(kind) ? truth.projection_se : truth.residual_se;
      const double v = bound_value(row, kind);
      out.bound[b][i] = v;
      out.violated[b][i] = is_lower_bound(kind) ? (v > t + 2.0 * se) : (v < t - 2.0 * se);
    }
  }
  return out;
}

}  // namespace

CoverageResult run_coverage(const ExperimentConfig& cfg) {
  if (cfg.mode != Mode::coverage) throw InputError("config mode is not coverage");
  cfg.validate();
  const SyntheticSpec spec = cfg.synthetic_spec();
  const KernelSpec kernel = KernelSpec::parse(cfg.kernel);

  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<std::optional<TrialOutcome>> outcomes(trials);
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        outcomes[t] = run_trial(cfg, spec, kernel, static_cast<Eigen::Index>(t));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  // Aggregation in trial order.
  CoverageResult result;
  result.trials = cfg.trials;
  result.train_size = outcomes[0]->train_size;
  result.test_size = outcomes[0]->test_size;
  result.resolved_alpha = outcomes[0]->alpha;
  for (const auto& o : outcomes) result.r_squared_max = std::max(result.r_squared_max, o->r_squared);
  const double nt = static_cast<double>(cfg.trials);
  for (std::size_t b = 0; b < kAllBounds.size(); ++b) {
    const BoundKind kind = kAllBounds[b];
    for (Eigen::Index k = 1; k <= cfg.k_max; ++k) {
      const auto i = static_cast<std::size_t>(k - 1);
      CoverageRow row;
      row.bound = kind;
      row.k = k;
      row.trials = cfg.trials;
      double bound_sum = 0.0, truth_sum = 0.0, se_sum = 0.0;
      for (const auto& o : outcomes) {
        row.violation_count += o->violated[b][i] ? 1 : 0;
        bound_sum += o->bound[b][i];
        const auto& e = o->oracle[i];
        truth_sum += is_projection_bound(kind) ? e.projection : e.residual;
        se_sum += is_projection_bound(kind) ? e.projection_se : e.residual_se;
      }
      row.violation_rate = static_cast<double>(row.violation_count) / nt;
      row.mean_bound = bound_sum / nt;
      row.mean_truth = truth_sum / nt;
      row.mean_truth_se = se_sum / nt;
      result.rows.push_back(row);
    }
  }
  return result;
}

// Serialization ----------------------------------------------------------

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns = {
      "k", "emp_proj_mean", "emp_resid_mean", "st_proj_lower", "st_resid_upper",
      "split_proj_lower", "split_resid_upper", "pb_proj_upper", "pb_resid_lower", "tie_split_flag",
      "test_proj_mean", "test_resid_mean", "pb_proj_upper_half_alpha", "pb_resid_lower_half_alpha",
      "oracle_proj", "oracle_proj_se", "oracle_resid", "oracle_resid_se",
      "st_proj_lower_clipped", "st_resid_upper_clipped", "split_proj_lower_clipped",
      "split_resid_upper_clipped", "pb_proj_upper_clipped", "pb_resid_lower_clipped"};
  return columns;
}

std::string meta_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".meta");
  return p.string();
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

std::optional<double> clip(const std::optional<double>& v, double ceiling) {
  if (!v) return std::nullopt;
  return std::clamp(*v, 0.0, ceiling);
}

void write_meta(const std::string& path, const ExperimentConfig& cfg,
                const nlohmann::ordered_json& extra) {
  nlohmann::ordered_json j;
  j["format"] = "kpcab-report-1";
  j["config"] = nlohmann::ordered_json::parse(cfg.to_json());
  j["resolved"] = extra;
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

}  // namespace

void write_report(const BoundReport& report, const ExperimentConfig& cfg, const std::string& path) {
  auto out = open_output(path);
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  const double ceil = report.clip_ceiling;
  for (const auto& r : report.rows) {
    const std::vector<std::string> cells = {
        std::to_string(r.k), format_real(r.emp_proj_mean), format_real(r.emp_resid_mean),
        format_real(r.st_proj_lower), format_real(r.st_resid_upper), cell(r.split_proj_lower),
        cell(r.split_resid_upper), format_real(r.pb_proj_upper), format_real(r.pb_resid_lower),
        r.tie_split ? "1" : "0", cell(r.test_proj_mean), cell(r.test_resid_mean),
        cell(r.pb_proj_upper_half), cell(r.pb_resid_lower_half), cell(r.oracle_proj),
        cell(r.oracle_proj_se), cell(r.oracle_resid), cell(r.oracle_resid_se),
        cell(clip(r.st_proj_lower, ceil)), cell(clip(r.st_resid_upper, ceil)),
        cell(clip(r.split_proj_lower, ceil)), cell(clip(r.split_resid_upper, ceil)),
        cell(clip(r.pb_proj_upper, ceil)), cell(clip(r.pb_resid_lower, ceil))};
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }
  finish(out, path);

  nlohmann::ordered_json extra;
  extra["alpha"] = report.resolved_alpha;
  extra["r2"] = report.config.r_squared;
  extra["delta"] = report.config.delta;
  extra["kernel"] = report.kernel;
  extra["train_size"] = report.train_size;
  extra["test_size"] = report.test_size;
  extra["baseline_sample_size"] = report.st_sample_size;
  extra["seed"] = report.seed;
  extra["normalization_constant"] = report.normalization;
  extra["clip_ceiling"] = report.clip_ceiling;
  extra["rows"] = report.rows.size();
  write_meta(meta_path(path), cfg, extra);
}

void write_coverage(const CoverageResult& result, const ExperimentConfig& cfg,
                    const std::string& path) {
  auto out = open_output(path);
  out << "bound,k,violation_count,trials,violation_rate,mean_bound,mean_truth,mean_truth_se\n";
  for (const auto& r : result.rows) {
    out << bound_name(r.bound) << ',' << r.k << ',' << r.violation_count << ',' << r.trials << ','
        << format_real(r.violation_rate) << ',' << format_real(r.mean_bound) << ','
        << format_real(r.mean_truth) << ',' << format_real(r.mean_truth_se) << '\n';
  }
  finish(out, path);

  nlohmann::ordered_json extra;
  extra["alpha"] = result.resolved_alpha;
  extra["r2_max"] = result.r_squared_max;
  extra["train_size"] = result.train_size;
  extra["test_size"] = result.test_size;
  extra["trials"] = result.trials;
  nlohmann::ordered_json worst;
  for (const auto kind : kAllBounds) worst[std::string(bound_name(kind))] = result.worst_rate(kind);
  extra["worst_violation_rate"] = worst;
  write_meta(meta_path(path), cfg, extra);
}

ReportTable read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  ReportTable table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (header) {
      table.header = cells;
      header = false;
      continue;
    }
    std::vector<std::optional<double>> row;
    for (const auto& v : cells) row.push_back(v.empty() ? std::nullopt : try_parse_real(v));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void run(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.out.empty()) throw InputError("no output path given");
  switch (cfg.mode) {
    case Mode::experiment1: write_report(run_experiment1(cfg), cfg, cfg.out); break;
    case Mode::experiment2: write_report(run_experiment2(cfg), cfg, cfg.out); break;
    case Mode::single: write_report(run_single(cfg), cfg, cfg.out); break;
    case Mode::coverage: write_coverage(run_coverage(cfg), cfg, cfg.out); break;
  }
}

}  // namespace kpcab
