#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ouq/rng.hpp"

namespace ouq {

/// Ornstein-Uhlenbeck process parameters: mean-reversion rate theta (> 0)
/// and diffusion scale sigma (> 0).
struct OUParams {
  double theta;
  double sigma;

  OUParams(double theta_, double sigma_);

  /// Stationary variance sigma^2 / (2 theta).
  double steady_state_variance() const { return sigma * sigma / (2.0 * theta); }
};

/// Uniformly sampled realization of the process.
struct SamplePath {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;

  double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

/// One exact transition of the OU process over dt, given a standard normal
/// draw z. Conditional mean x e^{-theta dt}, conditional variance
/// sigma^2/(2 theta) (1 - e^{-2 theta dt}); no discretization bias.
double ou_step(double x, double dt, const OUParams& params, double z);

/// Stationary path: X_0 ~ N(0, sigma^2/2theta), then repeated exact steps.
/// ceil(horizon/dt)+1 states, deterministic given seed.
SamplePath ou_path(const OUParams& params, double horizon, double dt, std::uint64_t seed);

/// CSV with header `t,x`, full precision.
void write_csv(const SamplePath& path, std::ostream& out);

}  // namespace ouq
