#include "ouq/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ouq/penalty.hpp"
#include "ouq/quantizer.hpp"

namespace ouq {

CheckResult check_mass_conservation(const DelayDistribution& dist) {
  const double total = std::accumulate(dist.pmf.begin(), dist.pmf.end(), dist.truncated_mass);
  const double dev = std::abs(total - 1.0);
  return {"pmf mass conservation", dev <= 1e-12, dev, 1e-12, ""};
}

CheckResult check_g_roundtrip(const AgePenalty& g, const DelayDistribution& dist) {
  double worst = 0.0;
  Rng rng(7);
  const double nbar = dist.support.front();
  for (int i = 0; i < 1000; ++i) {
    const double ybar = nbar + 3.0 * rng.uniform();
    const double lo = G_of(g, ybar, 0.0, dist);
    const double hi = g.is_mmse() ? g.steady_variance() : G_of(g, ybar, 50.0, dist);
    const double lambda = lo + (hi - lo) * (0.01 + 0.98 * rng.uniform());
    const double w = G_inverse(g, ybar, lambda, dist);
    if (w > 0.0) {
      worst = std::max(worst, std::abs(G_of(g, ybar, w, dist) - lambda));
    }
  }
  return {"G o G^-1 round trip", worst <= 1e-10, worst, 1e-10, ""};
}

CheckResult check_threshold_structure(const IIRPolicy& policy) {
  const double nbar = policy.dist.support.front();
  // Find the zero-wait onset on a fine age grid, then verify the two sides.
  const double span = policy.dist.support.back() - nbar + 10.0;
  double onset = nbar + span;
  constexpr int kPoints = 4000;
  std::vector<double> ages(kPoints), waits(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    ages[i] = nbar + span * static_cast<double>(i) / (kPoints - 1);
    waits[i] = policy.wait(ages[i]);
    if (waits[i] == 0.0) {
      onset = std::min(onset, ages[i]);
    }
  }
  double worst = 0.0;
  double exit_point = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < kPoints; ++i) {
    if (ages[i] >= onset) {
      worst = std::max(worst, waits[i]);  // must stay zero past the threshold
    } else if (waits[i] > 0.0) {
      const double point = ages[i] + waits[i];
      if (std::isnan(exit_point)) {
        exit_point = point;
      }
      worst = std::max(worst, std::abs(point - exit_point));  // constant exit age
    }
  }
  return {"threshold structure", worst <= 1e-9, worst, 1e-9, ""};
}

CheckResult check_enhanced_dominance(const OUParams& params, const CodeConfig& cfg,
                                     const SuccessProbs& sp) {
  const DelayDistribution orig = delay_pmf_iir(sp, cfg, false);
  const DelayDistribution enh = delay_pmf_iir(sp, cfg, true);
  const AgePenalty g = AgePenalty::mmse_ou(params, cfg.ell);

  // CDF dominance of the enhanced delay.
  double worst = 0.0;
  auto cdf_at = [](const DelayDistribution& d, double y) {
    double c = 0.0;
    for (std::size_t i = 0; i < d.support.size() && d.support[i] <= y + 1e-12; ++i) {
      c += d.pmf[i];
    }
    return c;
  };
  for (double y : orig.support) {
    worst = std::max(worst, cdf_at(orig, y) - cdf_at(enh, y));
  }

  // Induced ordering of G and of the solved averages.
  for (double ybar : orig.support) {
    for (double x : {0.0, 0.5, 2.0}) {
      worst = std::max(worst, G_of(g, ybar, x, enh) - G_of(g, ybar, x, orig));
    }
  }
  const double l_enh = solve_iir(g, enh).lambda_star;
  const double l_org = solve_iir(g, orig).lambda_star;
  worst = std::max(worst, l_enh - l_org);
  return {"enhanced-vs-original dominance", worst <= 1e-9, worst, 1e-9, ""};
}

CheckResult check_lloyd_monotone(const std::vector<double>& samples, int ell) {
  std::vector<double> trace;
  lloyd_train_samples(samples, ell, 500, 1e-10, &trace);
  double worst = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    worst = std::max(worst, trace[i] - trace[i - 1]);
  }
  return {"Lloyd MSE monotone per iteration", worst <= 1e-9, worst, 1e-9, ""};
}

CheckResult diagnose_pj_monotonicity(const SuccessProbs& sp) {
  const long idx = sp.first_non_monotone_index();
  std::string note =
      idx < 0 ? "p_j nondecreasing over the computed range"
              : "p_j decreases at j=" + std::to_string(idx) + " (model property, not repaired)";
  return {"p_j monotonicity (diagnostic)", true, static_cast<double>(idx), 0.0, note};
}

std::vector<CheckResult> run_validation(const ExperimentConfig& cfg) {
  std::vector<CheckResult> results;
  const OUParams params = cfg.ou();
  const CodeConfig code(cfg.track_ell, cfg.track_n, cfg.Tb, cfg.beta);
  const SuccessProbs sp = mds_success_probs(code, cfg.epsilon, cfg.j_max);
  const DelayDistribution enh = delay_pmf_iir(sp, code, true, cfg.tail_tol);
  const DelayDistribution orig = delay_pmf_iir(sp, code, false, cfg.tail_tol);
  const AgePenalty g = AgePenalty::mmse_ou(params, code.ell);

  results.push_back(check_mass_conservation(enh));
  {
    CheckResult r = check_mass_conservation(orig);
    r.name += " (original)";
    results.push_back(r);
  }
  results.push_back(check_g_roundtrip(g, enh));
  results.push_back(check_threshold_structure(solve_iir(g, enh, cfg.bisect_tol)));
  results.push_back(check_enhanced_dominance(params, code, sp));
  {
    const SamplePath path = ou_path(params, 200.0, cfg.Tb, cfg.seed);
    results.push_back(check_lloyd_monotone(path.values, std::min(cfg.track_ell, 4)));
  }
  results.push_back(diagnose_pj_monotonicity(sp));
  return results;
}

}  // namespace ouq
