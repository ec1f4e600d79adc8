#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ouq/channel.hpp"
#include "ouq/ou.hpp"
#include "ouq/penalty.hpp"
#include "ouq/policy.hpp"
#include "ouq/quantizer.hpp"

namespace ouq {

/// Renewal-reward accumulators from an epoch simulation.
struct EpochStats {
  double total_penalty_area = 0.0;
  double total_time = 0.0;
  std::size_t epochs = 0;
  double mean_delay = 0.0;
  /// Batch-means standard error of the ratio estimate (guards against the
  /// epoch-to-epoch coupling through the starting AoI).
  double stderr_avg = 0.0;

  double average() const { return total_penalty_area / total_time; }
};

/// Renewal simulation of the IIR scheme under a waiting policy: the starting
/// AoI of each epoch is the delay that ended the previous one.
EpochStats simulate_iir(const IIRPolicy& policy, const DelayDistribution& dist,
                        const AgePenalty& g, std::size_t epochs, Rng& rng);

/// Epoch simulation of the FR scheme: M ~ Geometric(p0) attempts of length
/// `policy.period`, starting AoI nbar.
EpochStats simulate_fr(const FRPolicy& policy, double p0, const CodeConfig& cfg,
                       const AgePenalty& g, std::size_t epochs, Rng& rng);

enum class Scheme { kIIR, kFR };

struct TrackingConfig {
  Scheme scheme = Scheme::kIIR;
  bool enhanced = true;
  double horizon = 500.0;
};

/// Sample-path tracking run: truth path, hold-and-decay estimate, and the
/// time-averaged squared tracking error.
struct TrackingResult {
  SamplePath truth_path;
  SamplePath estimate_path;
  double empirical_mse = 0.0;
  std::vector<double> decode_times;
};

/// Full pipeline on one OU sample path at step T_b: sample per the optimal
/// policy, quantize with cb, draw channel outcomes, and hold-and-decay the
/// estimate between decodes.
TrackingResult simulate_tracking(const TrackingConfig& tc, const Codebook& cb,
                                 const SuccessProbs& sp, const CodeConfig& cfg,
                                 const OUParams& params, std::uint64_t seed);

/// CSV `t,x_true,x_hat`.
void write_csv(const TrackingResult& result, std::ostream& out);
/// CSV row `scheme,epochs,avg_penalty,stderr,mean_delay` (with header).
void write_csv(const EpochStats& stats, const std::string& scheme, std::ostream& out);

}  // namespace ouq
