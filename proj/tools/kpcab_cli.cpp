// Command-line front end. Everything goes through the C API.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kpcab/kpcab.h"

namespace {

struct ConfigDeleter {
  void operator()(kpcab_config* c) const { kpcab_config_free(c); }
};
using ConfigPtr = std::unique_ptr<kpcab_config, ConfigDeleter>;

struct Flags {
  std::string data, synthetic, kernel, delta, alpha, r2, k_max, split_ratio, trials, oracle_n, n,
      seed, normalize, out, threads;
};

void add_common(CLI::App* cmd, Flags& f) {
  auto* data = cmd->add_option("--data", f.data, "CSV file, one point per row");
  auto* synth = cmd->add_option("--synthetic", f.synthetic,
                                "FAMILY:params, e.g. gaussian_mixture:dim=5,components=3");
  data->excludes(synth);
  cmd->add_option("--kernel", f.kernel, "rbf:sigma=V | poly:degree=N,r=V | linear");
  cmd->add_option("--delta", f.delta, "confidence parameter in (0, 1]");
  cmd->add_option("--alpha", f.alpha, "auto | V");
  cmd->add_option("--r2", f.r2, "auto | V");
  cmd->add_option("--k-max", f.k_max, "largest subspace dimension reported");
  cmd->add_option("--split-ratio", f.split_ratio, "fraction of points used for fitting");
  cmd->add_option("--trials", f.trials, "coverage repetitions");
  cmd->add_option("--oracle-n", f.oracle_n, "Monte Carlo oracle draws (0 disables)");
  cmd->add_option("--n", f.n, "synthetic dataset size");
  cmd->add_option("--seed", f.seed, "root seed");
  cmd->add_option("--normalize", f.normalize, "raw | trace");
  cmd->add_option("--threads", f.threads, "coverage worker threads (0 = all cores)");
  cmd->add_option("--out", f.out, "output CSV path")->required();
}

int fail(const char* what, kpcab_status s) {
  std::fprintf(stderr, "kpcab: %s: %s: %s\n", what, kpcab_status_name(s), kpcab_last_error());
  return static_cast<int>(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel PCA with empirical bounds on expected squared projections and residuals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kpcab_version());

  Flags flags;
  const std::vector<std::pair<const char*, const char*>> modes = {
      {"experiment1", "held-out projection bound vs. the eigenvalue baseline"},
      {"experiment2", "PAC-Bayes projection bound at alpha = 1/2 and optimal alpha"},
      {"coverage", "empirical violation rates over repeated synthetic trials"},
      {"single", "one fit / evaluate pass with every bound"}};
  for (const auto& [name, help] : modes) add_common(app.add_subcommand(name, help), flags);

  CLI11_PARSE(app, argc, argv);

  kpcab_config* raw = nullptr;
  if (auto s = kpcab_config_create(&raw); s != KPCAB_OK) return fail("config", s);
  ConfigPtr cfg(raw);

  const std::string mode = app.get_subcommands().front()->get_name();
  const std::vector<std::pair<const char*, const std::string*>> settings = {
      {"mode", &mode},          {"data", &flags.data},         {"synthetic", &flags.synthetic},
      {"kernel", &flags.kernel}, {"delta", &flags.delta},      {"alpha", &flags.alpha},
      {"r2", &flags.r2},        {"k_max", &flags.k_max},      {"split_ratio", &flags.split_ratio},
      {"trials", &flags.trials}, {"oracle_n", &flags.oracle_n}, {"n", &flags.n},
      {"seed", &flags.seed},    {"normalize", &flags.normalize}, {"threads", &flags.threads},
      {"out", &flags.out}};
  for (const auto& [key, value] : settings) {
    if (value->empty()) continue;
    if (auto s = kpcab_config_set(cfg.get(), key, value->c_str()); s != KPCAB_OK)
      return fail(key, s);
  }
  if (auto s = kpcab_run(cfg.get()); s != KPCAB_OK) return fail(mode.c_str(), s);
  return 0;
}
