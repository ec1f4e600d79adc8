#include "ouq/policy.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ouq/csv.hpp"

namespace ouq {

namespace {

/// Support weights with the residual tail folded onto the last point, so
/// expectations over the starting AoI account for all mass.
double weight(const DelayDistribution& dist, std::size_t i) {
  double w = dist.pmf[i];
  if (i + 1 == dist.pmf.size()) {
    w += dist.truncated_mass;
  }
  return w;
}

}  // namespace

double IIRPolicy::wait(double ybar) const {
  if (g.is_mmse()) {
    return std::max(0.0, threshold_age - ybar);
  }
  return G_inverse(g, ybar, lambda_star, dist);
}

FRPolicy::FRPolicy(const CodeConfig& cfg, double delta_)
    : delta(delta_), period(fr_period(cfg, delta_)) {
  if (!(delta >= 0.0 && delta <= cfg.beta)) {
    throw std::invalid_argument("FRPolicy: delta must lie in [0, beta]");
  }
}

FRPolicy FRPolicy::optimal(const CodeConfig& cfg) {
  return FRPolicy(cfg, fr_optimal_delta(cfg));
}

double p_iir(double lambda, const AgePenalty& g, const DelayDistribution& dist) {
  const double expected_delay = dist.mean();
  double value = 0.0;
  if (g.is_mmse()) {
    const double s = g.steady_variance();
    const double c = g.quantization_factor();
    const double th = g.theta();
    const double moment = dist.exp_moment(2.0 * th);
    // The waiting rule is a pure threshold on the starting AoI: where the
    // wait is positive, ybar + w equals this constant.
    const double threshold =
        lambda < s ? std::log(s * c * moment / (s - lambda)) / (2.0 * th)
                   : std::numeric_limits<double>::infinity();
    const auto H = [&](double a) { return s * (a + c * std::exp(-2.0 * th * a) / (2.0 * th)); };
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
      const double ybar = dist.support[i];
      const double w = std::max(0.0, threshold - ybar);
      // E_Y[ H(ybar + w + Y) ] in closed form.
      const double end = s * (ybar + w + expected_delay +
                              c * std::exp(-2.0 * th * (ybar + w)) * moment / (2.0 * th));
      value += weight(dist, i) * (end - H(ybar) - lambda * w);
    }
    return value - lambda * expected_delay;
  }
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const double ybar = dist.support[i];
    const double w = G_inverse(g, ybar, lambda, dist);
    double area = 0.0;
    for (std::size_t k = 0; k < dist.support.size(); ++k) {
      area += weight(dist, k) * g.integral(ybar, ybar + w + dist.support[k]);
    }
    value += weight(dist, i) * (area - lambda * w);
  }
  return value - lambda * expected_delay;
}

IIRPolicy solve_iir(const AgePenalty& g, const DelayDistribution& dist, double tol) {
  // An unreachable lambda (no finite wait attains it) certifies the root
  // lies below, so it evaluates as -inf for bracketing purposes.
  const auto p_of = [&](double lambda) {
    try {
      return p_iir(lambda, g, dist);
    } catch (const std::runtime_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  double lo, hi;
  if (g.is_mmse()) {
    const double s = g.steady_variance();
    lo = s * (1.0 - g.quantization_factor());  // penalty floor 2^{-2 ell} s
    hi = s * (1.0 - 1e-13);
  } else {
    lo = g.evaluate(0.0);
    hi = std::max(1.0, 2.0 * lo);
    int expansions = 0;
    while (p_of(hi) >= 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++expansions > 200) {
        throw std::runtime_error("solve_iir: failed to bracket the Dinkelbach root");
      }
    }
  }
  if (p_of(lo) < 0.0) {
    throw std::runtime_error("solve_iir: root below the analytic lower bound");
  }

  int iter = 0;
  while (hi - lo > tol * std::max(1.0, std::abs(hi)) && ++iter <= 200) {
    const double mid = 0.5 * (lo + hi);
    (p_of(mid) > 0.0 ? lo : hi) = mid;
  }
  const double lambda_star = 0.5 * (lo + hi);

  IIRPolicy policy;
  policy.lambda_star = lambda_star;
  policy.g = g;
  policy.dist = dist;
  if (g.is_mmse()) {
    const double s = g.steady_variance();
    const double moment = dist.exp_moment(2.0 * g.theta());
    policy.threshold_age = std::log(s * g.quantization_factor() * moment / (s - lambda_star)) /
                           (2.0 * g.theta());
  } else {
    policy.threshold_age = std::numeric_limits<double>::quiet_NaN();
  }
  return policy;
}

double iir_waiting_closed_form(double ybar, double lambda, const OUParams& params, int ell,
                               const DelayDistribution& dist) {
  const double s = params.steady_state_variance();
  if (!(lambda < s)) {
    throw std::invalid_argument("iir_waiting_closed_form: lambda must be below sigma^2/2theta");
  }
  const double c = 1.0 - std::exp2(-2.0 * ell);
  const double moment = dist.exp_moment(2.0 * params.theta);
  const double threshold = std::log(s * c * moment / (s - lambda)) / (2.0 * params.theta);
  return std::max(0.0, threshold - ybar);
}

double fr_optimal_delta(const CodeConfig& cfg) {
  return std::max(0.0, cfg.beta - static_cast<double>(cfg.n) * cfg.Tb);
}

double fr_period(const CodeConfig& cfg, double delta) {
  return std::max(static_cast<double>(cfg.n) * cfg.Tb + delta, cfg.beta);
}

double fr_mmse(const OUParams& params, const CodeConfig& cfg, double p0, double delta) {
  if (!(p0 > 0.0 && p0 <= 1.0)) {
    throw std::invalid_argument("fr_mmse: p0 must be in (0, 1]");
  }
  if (!(delta >= 0.0 && delta <= cfg.beta)) {
    throw std::invalid_argument("fr_mmse: delta must lie in [0, beta]");
  }
  const double s = params.steady_state_variance();
  const double c = 1.0 - std::exp2(-2.0 * cfg.ell);
  const double th = params.theta;
  const double K = fr_period(cfg, delta);
  const double decay = std::exp(-2.0 * th * K);
  return s * (1.0 - c * std::exp(-2.0 * th * cfg.nbar()) * p0 * (1.0 - decay) /
                        (2.0 * th * K * (1.0 - (1.0 - p0) * decay)));
}

double fr_first_wait_objective(const AgePenalty& g, const CodeConfig& cfg, double p0, double w1) {
  if (!(p0 > 0.0 && p0 <= 1.0)) {
    throw std::invalid_argument("fr_first_wait_objective: p0 must be in (0, 1]");
  }
  if (!(w1 >= 0.0)) {
    throw std::invalid_argument("fr_first_wait_objective: w1 must be nonnegative");
  }
  const double nbar = cfg.nbar();
  const double length = w1 + nbar / p0;
  if (g.is_mmse()) {
    const double s = g.steady_variance();
    const double c = g.quantization_factor();
    const double th = g.theta();
    const double a = 2.0 * th * nbar;
    const double geo = p0 * std::exp(-a) / (1.0 - (1.0 - p0) * std::exp(-a));
    const double area =
        s * (length + (c / (2.0 * th)) * (std::exp(-2.0 * th * (nbar + w1)) * geo -
                                          std::exp(-2.0 * th * nbar)));
    return area / length;
  }
  double area = 0.0;
  double mass = p0;
  for (int m = 1;; ++m) {
    area += mass * g.integral(nbar, nbar + w1 + static_cast<double>(m) * nbar);
    mass *= (1.0 - p0);
    if (mass * static_cast<double>(m + 1) < 1e-14 * p0) {
      break;
    }
  }
  return area / length;
}

double fr_zero_wait_check(const AgePenalty& g, const CodeConfig& cfg, double p0,
                          const std::vector<double>& grid) {
  if (grid.empty()) {
    throw std::invalid_argument("fr_zero_wait_check: empty grid");
  }
  bool has_zero = false;
  double best_w = grid.front();
  double best_v = std::numeric_limits<double>::infinity();
  for (double w : grid) {
    if (w == 0.0) {
      has_zero = true;
    }
    const double v = fr_first_wait_objective(g, cfg, p0, w);
    if (v < best_v) {
      best_v = v;
      best_w = w;
    }
  }
  if (!has_zero) {
    throw std::invalid_argument("fr_zero_wait_check: grid must contain 0");
  }
  return best_w;
}

void write_csv(const IIRPolicy& policy, std::ostream& out) {
  out << "ybar,wait\n";
  for (double ybar : policy.dist.support) {
    out << csv::num(ybar) << ',' << csv::num(policy.wait(ybar)) << '\n';
  }
}

}  // namespace ouq
