#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace kpcab {

void BoundConfig::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw InputError("delta must lie in (0, 1]");
  if (!(r_squared > 0.0) || !std::isfinite(r_squared))
    throw InputError("R^2 must be finite and positive");
  if (m < 1) throw InputError("sample size m must be >= 1");
  if (alpha && !std::isfinite(*alpha)) throw InputError("alpha must be finite");
}

double optimal_alpha(Eigen::Index m, double delta, double r_squared) {
  if (m < 2) throw InputError("automatic alpha needs m >= 2");
  if (!(delta > 0.0 && delta < 1.0))
    throw InputError("automatic alpha needs delta < 1 (ln(1/delta) must be positive)");
  if (!(r_squared > 0.0)) throw InputError("R^2 must be positive");
  const double r4 = r_squared * r_squared;
  return 0.5 + std::log(2.0 * std::log(1.0 / delta) / r4) / (2.0 * std::log(static_cast<double>(m)));
}

double resolve_alpha(const BoundConfig& cfg) {
  cfg.validate();
  if (cfg.alpha) return *cfg.alpha;
  return optimal_alpha(cfg.m, cfg.delta, cfg.r_squared);
}

double split_penalty(const BoundConfig& cfg) {
  cfg.validate();
  return cfg.r_squared * std::sqrt(2.0 / static_cast<double>(cfg.m) * std::log(1.0 / cfg.delta));
}

double pac_bayes_penalty(Eigen::Index m, double delta, double r_squared, double alpha) {
  const double md = static_cast<double>(m);
  return std::log(1.0 / delta) / std::pow(md, alpha) +
         r_squared * r_squared / (2.0 * std::pow(md, 1.0 - alpha));
}

double st_residual_confidence(const BoundConfig& cfg) {
  cfg.validate();
  const double m = static_cast<double>(cfg.m);
  return cfg.r_squared * std::sqrt(18.0 / m * std::log(2.0 * m / cfg.delta));
}

double st_projection_confidence(const BoundConfig& cfg) {
  cfg.validate();
  const double m = static_cast<double>(cfg.m);
  return cfg.r_squared * std::sqrt(19.0 / m * std::log(2.0 * (m + 1.0) / cfg.delta));
}

double st_complexity_term(Eigen::Index ell, Eigen::Index m, double diag_sq_sum) {
  const double md = static_cast<double>(m);
  return (1.0 + std::sqrt(static_cast<double>(ell))) / std::sqrt(md) *
         std::sqrt(2.0 / md * diag_sq_sum);
}

namespace {

void check_baseline_inputs(const EigenSpectrum& spectrum, const GramMatrix& g,
                           const BoundConfig& cfg, Eigen::Index k) {
  cfg.validate();
  if (g.size() != spectrum.size()) throw InputError("spectrum and Gram matrix differ in size");
  if (cfg.m != spectrum.size())
    throw InputError("config m differs from the size of the sample behind the spectrum");
  if (k < 1 || k > spectrum.size()) throw InputError("k out of range [1, m]");
}

}  // namespace

ScanResult st2005_residual_scan(const EigenSpectrum& spectrum, const GramMatrix& g,
                                const BoundConfig& cfg, Eigen::Index k) {
  check_baseline_inputs(spectrum, g, cfg, k);
  const double m = static_cast<double>(cfg.m);
  ScanResult best{spectrum.tail_sum(1) / m + st_complexity_term(1, cfg.m, g.diag_sq_sum()), 1};
  for (Eigen::Index ell = 2; ell <= k; ++ell) {
    const double v = spectrum.tail_sum(ell) / m + st_complexity_term(ell, cfg.m, g.diag_sq_sum());
    if (v < best.value) best = {v, ell};
  }
  best.value += st_residual_confidence(cfg);
  return best;
}

double st2005_residual_upper(const EigenSpectrum& spectrum, const GramMatrix& g,
                             const BoundConfig& cfg, Eigen::Index k) {
  return st2005_residual_scan(spectrum, g, cfg, k).value;
}

ScanResult st2005_projection_scan(const EigenSpectrum& spectrum, const GramMatrix& g,
                                  const BoundConfig& cfg, Eigen::Index k) {
  check_baseline_inputs(spectrum, g, cfg, k);
  const double m = static_cast<double>(cfg.m);
  ScanResult best{spectrum.initial_sum(1) / m - st_complexity_term(1, cfg.m, g.diag_sq_sum()), 1};
  for (Eigen::Index ell = 2; ell <= k; ++ell) {
    const double v =
        spectrum.initial_sum(ell) / m - st_complexity_term(ell, cfg.m, g.diag_sq_sum());
    if (v > best.value) best = {v, ell};
  }
  best.value -= st_projection_confidence(cfg);
  return best;
}

double st2005_projection_lower(const EigenSpectrum& spectrum, const GramMatrix& g,
                               const BoundConfig& cfg, Eigen::Index k) {
  return st2005_projection_scan(spectrum, g, cfg, k).value;
}

double split_projection_lower(double test_mean, const BoundConfig& cfg) {
  if (!(test_mean >= 0.0)) throw InputError("test mean must be >= 0");
  return test_mean - split_penalty(cfg);
}

double split_residual_upper(double test_mean, const BoundConfig& cfg) {
  if (!(test_mean >= 0.0)) throw InputError("test mean must be >= 0");
  return test_mean + split_penalty(cfg);
}

namespace {

double pb_penalty_for(const EigenSpectrum& spectrum, const BoundConfig& cfg, Eigen::Index k) {
  cfg.validate();
  if (cfg.m != spectrum.size())
    throw InputError("config m differs from the size of the sample behind the spectrum");
  if (k < 1 || k > spectrum.size()) throw InputError("k out of range [1, m]");
  return pac_bayes_penalty(cfg.m, cfg.delta, cfg.r_squared, resolve_alpha(cfg));
}

}  // namespace

double pb_projection_upper(const EigenSpectrum& spectrum, const BoundConfig& cfg, Eigen::Index k) {
  const double penalty = pb_penalty_for(spectrum, cfg, k);
  return spectrum.initial_sum(k) / static_cast<double>(cfg.m) + penalty;
}

double pb_residual_lower(const EigenSpectrum& spectrum, const BoundConfig& cfg, Eigen::Index k) {
  const double penalty = pb_penalty_for(spectrum, cfg, k);
  return spectrum.tail_sum(k) / static_cast<double>(cfg.m) - penalty;
}

BoundReport build_report(const KpcaModel& model, const Points* test, const BoundConfig& cfg,
                         Eigen::Index k_max, BaselineSource baseline) {
  const Eigen::Index m = model.size();
  if (k_max < 1 || k_max > m)
    throw InputError("k_max = " + std::to_string(k_max) + " out of range [1, " + std::to_string(m) +
                     "]");
  if (test && test->cols() == 0) throw InputError("test sample is empty");
  if ((baseline.spectrum == nullptr) != (baseline.gram == nullptr))
    throw InputError("baseline source needs both spectrum and Gram matrix");

  const EigenSpectrum& st_spectrum = baseline.spectrum ? *baseline.spectrum : model.spectrum();
  const GramMatrix& st_gram = baseline.gram ? *baseline.gram : model.gram();

  BoundConfig train_cfg = cfg;
  train_cfg.m = m;
  BoundConfig st_cfg = cfg;
  st_cfg.m = st_spectrum.size();
  BoundConfig test_cfg = cfg;
  test_cfg.m = test ? test->cols() : 1;

  BoundReport report;
  report.config = train_cfg;
  report.kernel = model.kernel().to_string();
  report.train_size = m;
  report.test_size = test ? test->cols() : 0;
  report.st_sample_size = st_spectrum.size();
  report.resolved_alpha = resolve_alpha(train_cfg);
  report.clip_ceiling = model.spectrum().trace() / static_cast<double>(m);

  // Test-sample means for every k in one pass per point.
  Eigen::VectorXd test_proj, test_resid;
  if (test) {
    test_proj = Eigen::VectorXd::Zero(k_max);
    test_resid = Eigen::VectorXd::Zero(k_max);
    for (Eigen::Index j = 0; j < test->cols(); ++j) {
      const Eigen::VectorXd profile = projection_profile(model, test->col(j), k_max);
      const double diag = evaluate(model.kernel(), test->col(j), test->col(j));
      for (Eigen::Index i = 0; i < k_max; ++i) {
        test_proj[i] += profile[i];
        test_resid[i] += residual_from(diag, profile[i]);
      }
    }
    test_proj /= static_cast<double>(test->cols());
    test_resid /= static_cast<double>(test->cols());
  }

  report.rows.reserve(static_cast<std::size_t>(k_max));
  const double md = static_cast<double>(m);
  for (Eigen::Index k = 1; k <= k_max; ++k) {
    BoundRow row;
    row.k = k;
    row.emp_proj_mean = model.spectrum().initial_sum(k) / md;
    row.emp_resid_mean = model.spectrum().tail_sum(k) / md;
    const Eigen::Index st_k = std::min(k, st_spectrum.size());
    row.st_proj_lower = st2005_projection_lower(st_spectrum, st_gram, st_cfg, st_k);
    row.st_resid_upper = st2005_residual_upper(st_spectrum, st_gram, st_cfg, st_k);
    if (test) {
      row.test_proj_mean = test_proj[k - 1];
      row.test_resid_mean = test_resid[k - 1];
      row.split_proj_lower = split_projection_lower(test_proj[k - 1], test_cfg);
      row.split_resid_upper = split_residual_upper(test_resid[k - 1], test_cfg);
    }
    row.pb_proj_upper = pb_projection_upper(model.spectrum(), train_cfg, k);
    row.pb_resid_lower = pb_residual_lower(model.spectrum(), train_cfg, k);
    row.tie_split = model.spectrum().tie_split(k);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace kpcab
