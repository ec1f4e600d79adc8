#include "ouq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ouq/csv.hpp"

namespace ouq {

namespace {

/// Batch-means standard error of a ratio estimator.
class RatioAccumulator {
 public:
  explicit RatioAccumulator(std::size_t total) {
    batches_ = total >= 10000 ? 100 : (total >= 100 ? 10 : 1);
    per_batch_ = total / batches_;
  }

  void add(double area, double time) {
    area_ += area;
    time_ += time;
    batch_area_ += area;
    batch_time_ += time;
    if (++in_batch_ == per_batch_) {
      ratios_.push_back(batch_area_ / batch_time_);
      batch_area_ = batch_time_ = 0.0;
      in_batch_ = 0;
    }
  }

  double area() const { return area_; }
  double time() const { return time_; }

  double stderr_avg() const {
    if (ratios_.size() < 2) {
      return 0.0;
    }
    double mean = 0.0;
    for (double r : ratios_) {
      mean += r;
    }
    mean /= static_cast<double>(ratios_.size());
    double var = 0.0;
    for (double r : ratios_) {
      var += (r - mean) * (r - mean);
    }
    var /= static_cast<double>(ratios_.size() - 1);
    return std::sqrt(var / static_cast<double>(ratios_.size()));
  }

 private:
  std::size_t batches_, per_batch_, in_batch_ = 0;
  double area_ = 0.0, time_ = 0.0;
  double batch_area_ = 0.0, batch_time_ = 0.0;
  std::vector<double> ratios_;
};

}  // namespace

EpochStats simulate_iir(const IIRPolicy& policy, const DelayDistribution& dist,
                        const AgePenalty& g, std::size_t epochs, Rng& rng) {
  if (epochs < 1) {
    throw std::invalid_argument("simulate_iir: need at least one epoch");
  }
  RatioAccumulator acc(epochs);
  double delay_sum = 0.0;
  double ybar = dist.sample(rng);  // AoI carried in from a warm-up epoch
  for (std::size_t i = 0; i < epochs; ++i) {
    const double w = policy.wait(ybar);
    const double y = dist.sample(rng);
    acc.add(g.integral(ybar, ybar + w + y), w + y);
    delay_sum += y;
    ybar = y;
  }
  EpochStats stats;
  stats.total_penalty_area = acc.area();
  stats.total_time = acc.time();
  stats.epochs = epochs;
  stats.mean_delay = delay_sum / static_cast<double>(epochs);
  stats.stderr_avg = acc.stderr_avg();
  return stats;
}

EpochStats simulate_fr(const FRPolicy& policy, double p0, const CodeConfig& cfg,
                       const AgePenalty& g, std::size_t epochs, Rng& rng) {
  if (epochs < 1) {
    throw std::invalid_argument("simulate_fr: need at least one epoch");
  }
  const double nbar = cfg.nbar();
  RatioAccumulator acc(epochs);
  double delay_sum = 0.0;
  for (std::size_t i = 0; i < epochs; ++i) {
    const auto m = static_cast<double>(sample_attempts_fr(p0, rng));
    const double len = policy.period * m;
    acc.add(g.integral(nbar, nbar + len), len);
    delay_sum += nbar;
  }
  EpochStats stats;
  stats.total_penalty_area = acc.area();
  stats.total_time = acc.time();
  stats.epochs = epochs;
  stats.mean_delay = delay_sum / static_cast<double>(epochs);
  stats.stderr_avg = acc.stderr_avg();
  return stats;
}

TrackingResult simulate_tracking(const TrackingConfig& tc, const Codebook& cb,
                                 const SuccessProbs& sp, const CodeConfig& cfg,
                                 const OUParams& params, std::uint64_t seed) {
  if (!(tc.horizon > cfg.nbar())) {
    throw std::invalid_argument("simulate_tracking: horizon shorter than one epoch");
  }
  if (cb.levels.size() != (std::size_t{1} << cfg.ell)) {
    throw std::invalid_argument("simulate_tracking: codebook size does not match ell");
  }

  TrackingResult result;
  result.truth_path = ou_path(params, tc.horizon, cfg.Tb, seed);
  Rng channel_rng = Rng(seed).split(1);

  const auto truth_at = [&](double t) {
    // Event times are snapped to the grid for path evaluation only.
    const auto n = result.truth_path.values.size();
    auto idx = static_cast<std::size_t>(std::llround(t / cfg.Tb));
    idx = std::min(idx, n - 1);
    return result.truth_path.values[idx];
  };

  // Decode events: (decode time, sample time, reconstruction level).
  struct Decode {
    double time;
    double sample_time;
    double level;
  };
  std::vector<Decode> decodes;

  if (tc.scheme == Scheme::kIIR) {
    const AgePenalty g = AgePenalty::mmse_ou(params, cfg.ell);
    const DelayDistribution dist = delay_pmf_iir(sp, cfg, tc.enhanced);
    const IIRPolicy policy = solve_iir(g, dist);
    double sample_time = 0.0;
    for (;;) {
      const double y = simulate_timeline_iir(sp, cfg, tc.enhanced, channel_rng);
      const double decode_time = sample_time + y;
      if (decode_time >= tc.horizon) {
        break;
      }
      decodes.push_back({decode_time, sample_time, quantize(cb, truth_at(sample_time)).second});
      sample_time = decode_time + policy.wait(y);
      if (sample_time >= tc.horizon) {
        break;
      }
    }
  } else {
    const double p0 = sp.at(0);
    const double delta = tc.enhanced ? fr_optimal_delta(cfg) : cfg.beta;
    const double period = fr_period(cfg, delta);
    // Decode attempt k completes at nbar + k * period on the sample taken
    // nbar earlier; each succeeds independently with probability p0.
    for (double decode_time = cfg.nbar(); decode_time < tc.horizon; decode_time += period) {
      if (channel_rng.bernoulli(p0)) {
        const double sample_time = decode_time - cfg.nbar();
        decodes.push_back({decode_time, sample_time, quantize(cb, truth_at(sample_time)).second});
      }
    }
  }

  result.estimate_path.t0 = 0.0;
  result.estimate_path.dt = cfg.Tb;
  result.estimate_path.values.resize(result.truth_path.values.size());

  double err = 0.0;
  std::size_t next_decode = 0;
  double level = 0.0;        // stationary-mean estimate before the first decode
  double sample_time = 0.0;  // decay anchor
  bool have_decode = false;
  for (std::size_t i = 0; i < result.truth_path.values.size(); ++i) {
    const double t = result.truth_path.time_at(i);
    while (next_decode < decodes.size() && decodes[next_decode].time <= t) {
      level = decodes[next_decode].level;
      sample_time = decodes[next_decode].sample_time;
      have_decode = true;
      ++next_decode;
    }
    const double xhat = have_decode ? level * std::exp(-params.theta * (t - sample_time)) : 0.0;
    result.estimate_path.values[i] = xhat;
    const double d = result.truth_path.values[i] - xhat;
    err += d * d;
  }
  result.empirical_mse = err / static_cast<double>(result.truth_path.values.size());
  result.decode_times.reserve(decodes.size());
  for (const Decode& d : decodes) {
    result.decode_times.push_back(d.time);
  }
  return result;
}

void write_csv(const TrackingResult& result, std::ostream& out) {
  out << "t,x_true,x_hat\n";
  for (std::size_t i = 0; i < result.truth_path.values.size(); ++i) {
    out << csv::num(result.truth_path.time_at(i)) << ',' << csv::num(result.truth_path.values[i])
        << ',' << csv::num(result.estimate_path.values[i]) << '\n';
  }
}

void write_csv(const EpochStats& stats, const std::string& scheme, std::ostream& out) {
  out << "scheme,epochs,avg_penalty,stderr,mean_delay\n";
  out << scheme << ',' << stats.epochs << ',' << csv::num(stats.average()) << ','
      << csv::num(stats.stderr_avg) << ',' << csv::num(stats.mean_delay) << '\n';
}

}  // namespace ouq
