#include "ouq/ou.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ouq/csv.hpp"

namespace ouq {

OUParams::OUParams(double theta_, double sigma_) : theta(theta_), sigma(sigma_) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("OUParams: theta must be positive and finite");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("OUParams: sigma must be positive and finite");
  }
}

double ou_step(double x, double dt, const OUParams& params, double z) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("ou_step: non-finite state");
  }
  if (!(dt >= 0.0)) {
    throw std::invalid_argument("ou_step: dt must be nonnegative");
  }
  if (dt == 0.0) {
    return x;
  }
  const double decay = std::exp(-params.theta * dt);
  const double var = params.steady_state_variance() * (1.0 - decay * decay);
  return x * decay + std::sqrt(var) * z;
}

SamplePath ou_path(const OUParams& params, double horizon, double dt, std::uint64_t seed) {
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("ou_path: horizon must be positive");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("ou_path: dt must be positive");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt));
  Rng rng(seed);

  SamplePath path;
  path.t0 = 0.0;
  path.dt = dt;
  path.values.reserve(steps + 1);

  double x = std::sqrt(params.steady_state_variance()) * rng.normal();
  path.values.push_back(x);
  for (std::size_t i = 0; i < steps; ++i) {
    x = ou_step(x, dt, params, rng.normal());
    path.values.push_back(x);
  }
  return path;
}

void write_csv(const SamplePath& path, std::ostream& out) {
  out << "t,x\n";
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    out << csv::num(path.time_at(i)) << ',' << csv::num(path.values[i]) << '\n';
  }
}

}  // namespace ouq
