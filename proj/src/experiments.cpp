#include "ouq/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "ouq/penalty.hpp"

namespace ouq {

namespace {

/// Run fn(i) for i in [0, count) on up to `jobs` threads. Each index writes
/// only its own output slot, so assembly is order-deterministic.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

/// Per-(ell, n) ACK probabilities are beta-independent, so sweeps share them.
class SuccessProbCache {
 public:
  SuccessProbCache(double Tb, double epsilon, std::size_t j_max)
      : Tb_(Tb), epsilon_(epsilon), j_max_(j_max) {}

  const SuccessProbs& get(int ell, int n) {
    const auto key = std::make_pair(ell, n);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      // beta does not enter p_j; any value builds the same CodeConfig code.
      CodeConfig cfg(ell, n, Tb_, 0.0);
      it = cache_.emplace(key, mds_success_probs(cfg, epsilon_, j_max_)).first;
    }
    return it->second;
  }

 private:
  double Tb_;
  double epsilon_;
  std::size_t j_max_;
  std::map<std::pair<int, int>, SuccessProbs> cache_;
};

struct BestPair {
  int ell = 0;
  int n = 0;
  double mmse = std::numeric_limits<double>::infinity();

  void consider(int ell_, int n_, double mmse_) {
    if (mmse_ < mmse) {
      ell = ell_;
      n = n_;
      mmse = mmse_;
    }
  }
};

}  // namespace

double iir_mmse_analytic(const OUParams& params, const CodeConfig& cfg, const SuccessProbs& sp,
                         bool enhanced, double tail_tol, double bisect_tol) {
  const DelayDistribution dist = delay_pmf_iir(sp, cfg, enhanced, tail_tol);
  const AgePenalty g = AgePenalty::mmse_ou(params, cfg.ell);
  return solve_iir(g, dist, bisect_tol).lambda_star;
}

SweepLnResult sweep_ln(const ExperimentConfig& cfg) {
  if (cfg.ell_min < 1 || cfg.ell_max < cfg.ell_min) {
    throw std::invalid_argument("sweep_ln: bad ell range");
  }
  const OUParams params = cfg.ou();
  const auto ell_count = static_cast<std::size_t>(cfg.ell_max - cfg.ell_min + 1);

  SweepLnResult result;
  result.rows.resize(ell_count);
  parallel_for(ell_count, cfg.jobs, [&](std::size_t i) {
    const int ell = cfg.ell_min + static_cast<int>(i);
    SweepLnRow row{ell, 0, std::numeric_limits<double>::infinity(),
                   0, std::numeric_limits<double>::infinity(), ""};
    for (int n = ell + cfg.n_min_gap; n <= ell + cfg.n_span; ++n) {
      const CodeConfig code(ell, n, cfg.Tb, cfg.beta);
      const SuccessProbs sp = mds_success_probs(code, cfg.epsilon, cfg.j_max);
      const double mmse_iir =
          iir_mmse_analytic(params, code, sp, /*enhanced=*/true, cfg.tail_tol, cfg.bisect_tol);
      const double mmse_fr = fr_mmse(params, code, sp.at(0), fr_optimal_delta(code));
      if (mmse_iir < row.mmse_iir) {
        row.n_best_iir = n;
        row.mmse_iir = mmse_iir;
      }
      if (mmse_fr < row.mmse_fr) {
        row.n_best_fr = n;
        row.mmse_fr = mmse_fr;
      }
    }
    result.rows[i] = row;
  });

  BestPair best_iir, best_fr;
  for (const SweepLnRow& row : result.rows) {
    best_iir.consider(row.ell, row.n_best_iir, row.mmse_iir);
    best_fr.consider(row.ell, row.n_best_fr, row.mmse_fr);
  }
  result.ell_best_iir = best_iir.ell;
  result.n_best_iir = best_iir.n;
  result.mmse_best_iir = best_iir.mmse;
  result.ell_best_fr = best_fr.ell;
  result.n_best_fr = best_fr.n;
  result.mmse_best_fr = best_fr.mmse;
  return result;
}

SweepBetaResult sweep_beta(const ExperimentConfig& cfg) {
  const OUParams params = cfg.ou();
  const auto steps =
      static_cast<std::size_t>(std::floor((cfg.beta_max - cfg.beta_min) / cfg.beta_step + 1e-9)) +
      1;
  SuccessProbCache probs(cfg.Tb, cfg.epsilon, cfg.j_max);
  // Warm the cache serially; workers then only read it.
  for (int ell = cfg.ell_min; ell <= cfg.ell_max; ++ell) {
    for (int n = ell + cfg.n_min_gap; n <= ell + cfg.n_span; ++n) {
      probs.get(ell, n);
    }
  }

  SweepBetaResult result;
  result.rows.resize(steps);
  parallel_for(steps, cfg.jobs, [&](std::size_t i) {
    const double beta = cfg.beta_min + static_cast<double>(i) * cfg.beta_step;
    BestPair best_iir, best_fr;
    for (int ell = cfg.ell_min; ell <= cfg.ell_max; ++ell) {
      for (int n = ell + cfg.n_min_gap; n <= ell + cfg.n_span; ++n) {
        const CodeConfig code(ell, n, cfg.Tb, beta);
        const SuccessProbs& sp = probs.get(ell, n);
        best_iir.consider(ell, n,
                          iir_mmse_analytic(params, code, sp, /*enhanced=*/true, cfg.tail_tol,
                                            cfg.bisect_tol));
        best_fr.consider(ell, n, fr_mmse(params, code, sp.at(0), fr_optimal_delta(code)));
      }
    }
    result.rows[i] = {beta,      best_iir.mmse, best_fr.mmse, best_iir.ell,
                      best_iir.n, best_fr.ell,   best_fr.n};
  });

  for (const SweepBetaRow& row : result.rows) {
    if (row.beta > 0.0 && row.mmse_fr <= row.mmse_iir) {
      result.beta_switch = row.beta;
      break;
    }
  }
  return result;
}

std::vector<EnhancementRow> enhancement_ratio(const ExperimentConfig& cfg) {
  const OUParams params = cfg.ou();
  const auto steps =
      static_cast<std::size_t>(std::floor((cfg.beta_max - cfg.beta_min) / cfg.beta_step + 1e-9)) +
      1;
  SuccessProbCache probs(cfg.Tb, cfg.epsilon, cfg.j_max);
  const SuccessProbs& sp = probs.get(cfg.ratio_ell, cfg.ratio_n);

  std::vector<EnhancementRow> rows(steps);
  parallel_for(steps, cfg.jobs, [&](std::size_t i) {
    const double beta = cfg.beta_min + static_cast<double>(i) * cfg.beta_step;
    const CodeConfig code(cfg.ratio_ell, cfg.ratio_n, cfg.Tb, beta);
    const double iir_enh =
        iir_mmse_analytic(params, code, sp, /*enhanced=*/true, cfg.tail_tol, cfg.bisect_tol);
    const double iir_org =
        iir_mmse_analytic(params, code, sp, /*enhanced=*/false, cfg.tail_tol, cfg.bisect_tol);
    const double p0 = sp.at(0);
    const double fr_enh = fr_mmse(params, code, p0, fr_optimal_delta(code));
    const double fr_org = fr_mmse(params, code, p0, beta);
    rows[i] = {beta, 1.0 - iir_enh / iir_org, 1.0 - fr_enh / fr_org};
  });
  return rows;
}

Codebook train_tracking_codebook(const ExperimentConfig& cfg) {
  if (cfg.train_paths < 1) {
    throw std::invalid_argument("train_tracking_codebook: need at least one path");
  }
  const OUParams params = cfg.ou();
  std::vector<SamplePath> paths(static_cast<std::size_t>(cfg.train_paths));
  parallel_for(paths.size(), cfg.jobs, [&](std::size_t i) {
    // Independent sub-seed per path; the training set is seed-reproducible.
    paths[i] = ou_path(params, cfg.train_horizon, cfg.Tb,
                       Rng::splitmix64(cfg.seed ^ (0x100000001b3ULL * (i + 1))));
  });
  return lloyd_train(paths, cfg.track_ell);
}

}  // namespace ouq
