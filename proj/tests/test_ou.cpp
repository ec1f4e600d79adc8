#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ouq/ou.hpp"

using namespace ouq;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(OUParams(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(OUParams(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(OUParams(0.5, 0.0), std::invalid_argument);
  OUParams p(0.5, 1.0);
  CHECK_THROWS_AS(ou_step(1.0, -0.1, p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ou_step(std::nan(""), 0.1, p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ou_path(p, 0.0, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(ou_path(p, 1.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("steady state variance") {
  CHECK(OUParams(0.5, 1.0).steady_state_variance() == doctest::Approx(1.0));
  CHECK(OUParams(0.01, 1.0).steady_state_variance() == doctest::Approx(50.0));
  CHECK(OUParams(0.25, 1.0).steady_state_variance() == doctest::Approx(2.0));
}

TEST_CASE("zero step is the identity") {
  OUParams p(0.5, 1.0);
  CHECK(ou_step(5.0, 0.0, p, 3.0) == 5.0);
}

TEST_CASE("conditional mean and variance of one step") {
  // x=1, theta=0.5, sigma=1, dt=1: mean e^{-1/2}, variance 1 - e^{-1}.
  OUParams p(0.5, 1.0);
  Rng rng(7);
  const std::size_t n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = ou_step(1.0, 1.0, p, rng.normal());
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  const double mean_se = std::sqrt(var / n);
  const double var_se = var * std::sqrt(2.0 / n);  // Gaussian chi-square spread
  CHECK(std::abs(mean - std::exp(-0.5)) < 3.0 * mean_se);
  CHECK(std::abs(var - (1.0 - std::exp(-1.0))) < 3.0 * var_se);
}

TEST_CASE("step variance never exceeds the stationary variance") {
  OUParams p(0.3, 1.3);
  const double s = p.steady_state_variance();
  for (double dt : {0.01, 0.1, 1.0, 10.0, 1e6}) {
    const double decay = std::exp(-p.theta * dt);
    CHECK(s * (1.0 - decay * decay) <= s);
  }
}

TEST_CASE("two-step composition matches one big step in moments") {
  OUParams p(0.7, 1.1);
  const double s = p.steady_state_variance();
  const double a = 0.4, b = 1.3;
  const double d1 = std::exp(-p.theta * a), d2 = std::exp(-p.theta * b);
  // mean coefficient composes multiplicatively
  CHECK(d1 * d2 == doctest::Approx(std::exp(-p.theta * (a + b))).epsilon(1e-14));
  // variance composes as v2 + d2^2 v1
  const double v1 = s * (1.0 - d1 * d1), v2 = s * (1.0 - d2 * d2);
  CHECK(v2 + d2 * d2 * v1 ==
        doctest::Approx(s * (1.0 - std::exp(-2.0 * p.theta * (a + b)))).epsilon(1e-14));
}

TEST_CASE("path shape and determinism") {
  OUParams p(0.5, 1.0);
  SamplePath a = ou_path(p, 10.0, 0.05, 42);
  SamplePath b = ou_path(p, 10.0, 0.05, 42);
  SamplePath c = ou_path(p, 10.0, 0.05, 43);
  CHECK(a.values.size() == 201);  // ceil(10/0.05) + 1
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.time_at(0) == 0.0);
  CHECK(a.time_at(200) == doctest::Approx(10.0));
}

TEST_CASE("stationary path has the stationary variance") {
  OUParams p(0.5, 1.0);
  SamplePath path = ou_path(p, 10000.0, 0.05, 11);
  double sum = 0.0, sq = 0.0;
  for (double v : path.values) {
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(path.values.size());
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  // Effective sample size ~ horizon * theta; allow 3 sigma on that basis.
  const double neff = 10000.0 * p.theta;
  CHECK(std::abs(mean) < 3.0 * std::sqrt(1.0 / neff));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / neff));
}

TEST_CASE("lag autocorrelation decays at rate theta") {
  OUParams p(0.01, 1.0);
  const double dt = 0.05;
  // Segment the path and use the across-segment spread as the error bar.
  const int segments = 20;
  const double seg_horizon = 2000.0;
  for (int lag : {20, 100, 400}) {
    std::vector<double> est;
    for (int seg = 0; seg < segments; ++seg) {
      SamplePath path = ou_path(p, seg_horizon, dt, 1000 + static_cast<std::uint64_t>(seg));
      double c0 = 0.0, ck = 0.0;
      const std::size_t n = path.values.size();
      for (std::size_t i = 0; i + lag < n; ++i) {
        c0 += path.values[i] * path.values[i];
        ck += path.values[i] * path.values[i + lag];
      }
      est.push_back(ck / c0);
    }
    double mean = 0.0;
    for (double v : est) mean += v;
    mean /= segments;
    double var = 0.0;
    for (double v : est) var += (v - mean) * (v - mean);
    var /= (segments - 1);
    const double se = std::sqrt(var / segments);
    CHECK(std::abs(mean - std::exp(-p.theta * lag * dt)) < 3.0 * se);
  }
}

TEST_CASE("csv serialization") {
  OUParams p(0.5, 1.0);
  SamplePath path = ou_path(p, 0.1, 0.05, 1);
  std::ostringstream out;
  write_csv(path, out);
  const std::string text = out.str();
  CHECK(text.rfind("t,x\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + 3 rows
}
