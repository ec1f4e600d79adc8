// Experiment driver: parameter sweeps, enhancement-ratio study, sample-path
// tracking demo, and the invariant suite. Configuration comes from a single
// JSON document; flags override it. All outputs are CSV (plus standalone
// matplotlib scripts referencing them) and are byte-reproducible given
// (config, seed).
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ouq/csv.hpp"
#include "ouq/experiments.hpp"
#include "ouq/sim.hpp"
#include "ouq/validate.hpp"

namespace {

using nlohmann::json;
using namespace ouq;

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg;
  if (path.empty()) {
    return cfg;
  }
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  json doc = json::parse(in);

  const auto get = [&](const char* key, auto& field) {
    if (doc.contains(key)) {
      field = doc.at(key).get<std::decay_t<decltype(field)>>();
      doc.erase(key);
    }
  };
  get("theta", cfg.theta);
  get("sigma", cfg.sigma);
  get("epsilon", cfg.epsilon);
  get("Tb", cfg.Tb);
  get("beta", cfg.beta);
  get("ell_min", cfg.ell_min);
  get("ell_max", cfg.ell_max);
  get("n_min_gap", cfg.n_min_gap);
  get("n_span", cfg.n_span);
  get("beta_min", cfg.beta_min);
  get("beta_max", cfg.beta_max);
  get("beta_step", cfg.beta_step);
  get("ratio_ell", cfg.ratio_ell);
  get("ratio_n", cfg.ratio_n);
  get("epochs", cfg.epochs);
  get("seeds", cfg.seeds);
  get("seed", cfg.seed);
  get("track_ell", cfg.track_ell);
  get("track_n", cfg.track_n);
  get("horizon", cfg.horizon);
  get("train_paths", cfg.train_paths);
  get("train_horizon", cfg.train_horizon);
  get("tail_tol", cfg.tail_tol);
  get("j_max", cfg.j_max);
  get("bisect_tol", cfg.bisect_tol);
  get("jobs", cfg.jobs);
  get("output_dir", cfg.output_dir);
  if (!doc.empty()) {
    throw std::runtime_error("unknown config key: " + doc.begin().key());
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (!(cfg.theta > 0.0) || !(cfg.sigma > 0.0)) {
    throw std::invalid_argument("theta and sigma must be positive");
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) {
    throw std::invalid_argument("epsilon must be in (0, 1/2)");
  }
  if (!(cfg.Tb > 0.0) || !(cfg.beta >= 0.0)) {
    throw std::invalid_argument("Tb must be positive and beta nonnegative");
  }
  if (cfg.ell_min < 1 || cfg.ell_max < cfg.ell_min || cfg.n_min_gap < 0 ||
      cfg.n_span < cfg.n_min_gap) {
    throw std::invalid_argument("empty (ell, n) grid");
  }
  if (!(cfg.beta_step > 0.0) || cfg.beta_max < cfg.beta_min || cfg.beta_min < 0.0) {
    throw std::invalid_argument("bad beta sweep range");
  }
  if (cfg.epochs < 1 || cfg.seeds < 1 || cfg.jobs < 1) {
    throw std::invalid_argument("epochs, seeds and jobs must be at least 1");
  }
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

void write_plot_script(const ExperimentConfig& cfg, const std::string& name,
                       const std::string& body) {
  std::ofstream out = open_output(cfg, name);
  out << "#!/usr/bin/env python3\n"
         "# Standalone plot script; reads the CSVs next to it.\n"
         "import csv\n"
         "import os\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "here = os.path.dirname(os.path.abspath(__file__))\n"
         "\n"
         "def load(name):\n"
         "    with open(os.path.join(here, name)) as f:\n"
         "        rows = list(csv.DictReader(f))\n"
         "    return {k: [float(r[k]) for r in rows] for k in rows[0]}\n"
         "\n"
      << body;
}

int cmd_sweep_ln(const ExperimentConfig& cfg) {
  const SweepLnResult r = sweep_ln(cfg);
  std::ofstream out = open_output(cfg, "sweep_ln.csv");
  out << "ell,n_best_iir,mmse_iir,n_best_fr,mmse_fr\n";
  for (const SweepLnRow& row : r.rows) {
    out << row.ell << ',' << row.n_best_iir << ',' << csv::num(row.mmse_iir) << ','
        << row.n_best_fr << ',' << csv::num(row.mmse_fr) << '\n';
  }
  std::cout << "best iir (ell,n) = (" << r.ell_best_iir << ',' << r.n_best_iir
            << ") mmse " << csv::num(r.mmse_best_iir) << '\n'
            << "best fr  (ell,n) = (" << r.ell_best_fr << ',' << r.n_best_fr << ") mmse "
            << csv::num(r.mmse_best_fr) << '\n';
  write_plot_script(cfg, "plot_sweep_ln.py",
                    "d = load('sweep_ln.csv')\n"
                    "plt.plot(d['ell'], d['mmse_iir'], 'o-', label='IIR')\n"
                    "plt.plot(d['ell'], d['mmse_fr'], 's-', label='FR')\n"
                    "plt.xlabel('quantization bits')\n"
                    "plt.ylabel('long-term average MMSE')\n"
                    "plt.legend()\n"
                    "plt.savefig(os.path.join(here, 'sweep_ln.png'), dpi=150)\n");
  return 0;
}

int cmd_sweep_beta(const ExperimentConfig& cfg) {
  const SweepBetaResult r = sweep_beta(cfg);
  std::ofstream out = open_output(cfg, "sweep_beta.csv");
  out << "beta,mmse_iir,mmse_fr,ell_iir,n_iir,ell_fr,n_fr\n";
  for (const SweepBetaRow& row : r.rows) {
    out << csv::num(row.beta) << ',' << csv::num(row.mmse_iir) << ',' << csv::num(row.mmse_fr)
        << ',' << row.ell_iir << ',' << row.n_iir << ',' << row.ell_fr << ',' << row.n_fr
        << '\n';
  }
  if (r.beta_switch) {
    std::cout << "beta_switch = " << csv::num(*r.beta_switch) << '\n';
  } else {
    std::cout << "beta_switch = none (FR never overtakes IIR in the swept range)\n";
  }
  write_plot_script(cfg, "plot_sweep_beta.py",
                    "d = load('sweep_beta.csv')\n"
                    "plt.plot(d['beta'], d['mmse_iir'], label='IIR')\n"
                    "plt.plot(d['beta'], d['mmse_fr'], label='FR')\n"
                    "sw = [b for b, i, f in zip(d['beta'], d['mmse_iir'], d['mmse_fr'])\n"
                    "      if b > 0 and f <= i][:1]\n"
                    "if sw:\n"
                    "    plt.axvline(sw[0], color='k', ls='--', label='switch')\n"
                    "plt.xlabel('processing time beta')\n"
                    "plt.ylabel('long-term average MMSE')\n"
                    "plt.legend()\n"
                    "plt.savefig(os.path.join(here, 'sweep_beta.png'), dpi=150)\n");
  return 0;
}

int cmd_enhance_ratio(const ExperimentConfig& cfg) {
  const std::vector<EnhancementRow> rows = enhancement_ratio(cfg);
  std::ofstream out = open_output(cfg, "enhancement.csv");
  out << "beta,ratio_iir,ratio_fr\n";
  double peak_iir = 0.0, peak_fr = 0.0;
  for (const EnhancementRow& row : rows) {
    out << csv::num(row.beta) << ',' << csv::num(row.ratio_iir) << ',' << csv::num(row.ratio_fr)
        << '\n';
    peak_iir = std::max(peak_iir, row.ratio_iir);
    peak_fr = std::max(peak_fr, row.ratio_fr);
  }
  std::cout << "peak enhancement ratio: iir " << csv::num(peak_iir) << ", fr "
            << csv::num(peak_fr) << '\n';
  write_plot_script(cfg, "plot_enhancement.py",
                    "d = load('enhancement.csv')\n"
                    "plt.plot(d['beta'], d['ratio_iir'], label='IIR')\n"
                    "plt.plot(d['beta'], d['ratio_fr'], label='FR')\n"
                    "plt.xlabel('processing time beta')\n"
                    "plt.ylabel('enhancement ratio')\n"
                    "plt.legend()\n"
                    "plt.savefig(os.path.join(here, 'enhancement.png'), dpi=150)\n");
  return 0;
}

int cmd_track(const ExperimentConfig& cfg) {
  const OUParams params = cfg.ou();
  const CodeConfig code(cfg.track_ell, cfg.track_n, cfg.Tb, cfg.beta);
  const SuccessProbs sp = mds_success_probs(code, cfg.epsilon, cfg.j_max);
  const Codebook cb = train_tracking_codebook(cfg);
  {
    std::ofstream out = open_output(cfg, "codebook.csv");
    write_csv(cb, out);
  }

  TrackingConfig tc;
  tc.horizon = cfg.horizon;
  const struct {
    Scheme scheme;
    const char* name;
  } schemes[] = {{Scheme::kIIR, "iir"}, {Scheme::kFR, "fr"}};

  std::ofstream summary = open_output(cfg, "track_summary.csv");
  summary << "scheme,seeds,mean_mse,stddev_mse\n";
  for (const auto& s : schemes) {
    tc.scheme = s.scheme;
    std::vector<double> mses;
    for (int k = 0; k < cfg.seeds; ++k) {
      const TrackingResult r =
          simulate_tracking(tc, cb, sp, code, params, cfg.seed + static_cast<std::uint64_t>(k));
      mses.push_back(r.empirical_mse);
      if (k == 0) {
        std::ofstream out = open_output(cfg, std::string("track_") + s.name + ".csv");
        write_csv(r, out);
        std::cout << s.name << " empirical mse (seed " << cfg.seed << ") = "
                  << csv::num(r.empirical_mse) << '\n';
      }
    }
    double mean = 0.0;
    for (double m : mses) mean += m;
    mean /= static_cast<double>(mses.size());
    double var = 0.0;
    for (double m : mses) var += (m - mean) * (m - mean);
    const double sd = mses.size() > 1 ? std::sqrt(var / static_cast<double>(mses.size() - 1))
                                      : 0.0;
    summary << s.name << ',' << cfg.seeds << ',' << csv::num(mean) << ',' << csv::num(sd)
            << '\n';
    if (cfg.seeds > 1) {
      std::cout << s.name << " mean mse over " << cfg.seeds << " seeds = " << csv::num(mean)
                << " +/- " << csv::num(sd) << '\n';
    }
  }
  write_plot_script(cfg, "plot_track.py",
                    "for name in ('iir', 'fr'):\n"
                    "    d = load('track_' + name + '.csv')\n"
                    "    plt.figure()\n"
                    "    plt.plot(d['t'], d['x_true'], lw=0.8, label='true')\n"
                    "    plt.plot(d['t'], d['x_hat'], lw=0.8, label='estimate')\n"
                    "    plt.xlabel('time')\n"
                    "    plt.ylabel('process value')\n"
                    "    plt.legend()\n"
                    "    plt.title(name.upper())\n"
                    "    plt.savefig(os.path.join(here, 'track_' + name + '.png'), dpi=150)\n");
  return 0;
}

int cmd_validate(const ExperimentConfig& cfg) {
  const std::vector<CheckResult> checks = run_validation(cfg);
  bool all_ok = true;
  for (const CheckResult& c : checks) {
    all_ok = all_ok && c.passed;
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": measured "
              << csv::num(c.measured) << " vs tolerance " << csv::num(c.tolerance);
    if (!c.note.empty()) {
      std::cout << " (" << c.note << ')';
    }
    std::cout << '\n';
  }
  std::cout << (all_ok ? "all checks passed\n" : "validation FAILED\n");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timely MMSE estimation of an OU process over a noisy channel: "
               "sweeps, enhancement study, tracking demo, and invariant suite"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "base RNG seed (overrides config)");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--jobs", jobs, "worker threads (overrides config)");

  CLI::App* sub_sweep_ln = app.add_subcommand(
      "sweep-ln", "per-ell optimal n and MMSE for both schemes (sweep_ln.csv)");
  CLI::App* sub_sweep_beta = app.add_subcommand(
      "sweep-beta", "MMSE of both schemes versus beta with crossover (sweep_beta.csv)");
  CLI::App* sub_enhance = app.add_subcommand(
      "enhance-ratio", "enhanced-vs-original MMSE gain versus beta (enhancement.csv)");
  CLI::App* sub_track = app.add_subcommand(
      "track", "train a codebook and track one sample path per scheme (track_*.csv)");
  CLI::App* sub_validate = app.add_subcommand("validate", "run the invariant suite");
  // the shared flags may appear after the subcommand name
  for (CLI::App* sub : {sub_sweep_ln, sub_sweep_beta, sub_enhance, sub_track, sub_validate}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.output_dir = *out_dir;
    if (jobs) cfg.jobs = *jobs;
    validate_config(cfg);

    if (sub_sweep_ln->parsed()) return cmd_sweep_ln(cfg);
    if (sub_sweep_beta->parsed()) return cmd_sweep_beta(cfg);
    if (sub_enhance->parsed()) return cmd_enhance_ratio(cfg);
    if (sub_track->parsed()) return cmd_track(cfg);
    if (sub_validate->parsed()) return cmd_validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
