#include "ouq/penalty.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ouq {

AgePenalty AgePenalty::mmse_ou(const OUParams& params, int ell) {
  if (ell < 1) {
    throw std::invalid_argument("AgePenalty::mmse_ou: ell must be >= 1");
  }
  AgePenalty g;
  g.mmse_ = true;
  g.s_ = params.steady_state_variance();
  g.c_ = 1.0 - std::exp2(-2.0 * ell);
  g.theta_ = params.theta;
  return g;
}

AgePenalty AgePenalty::custom(std::function<double(double)> fn, double audit_hi) {
  if (!fn) {
    throw std::invalid_argument("AgePenalty::custom: empty function");
  }
  // The solver structure relies on the penalty being nondecreasing in age.
  constexpr int kAuditPoints = 1000;
  double prev = fn(0.0);
  for (int i = 1; i < kAuditPoints; ++i) {
    const double a = audit_hi * static_cast<double>(i) / (kAuditPoints - 1);
    const double v = fn(a);
    if (!(v >= prev - 1e-12 * std::max(1.0, std::abs(prev)))) {
      throw std::invalid_argument("AgePenalty::custom: penalty is not nondecreasing");
    }
    prev = v;
  }
  AgePenalty g;
  g.fn_ = std::move(fn);
  return g;
}

double AgePenalty::evaluate(double age) const {
  if (!(age >= 0.0)) {
    throw std::invalid_argument("AgePenalty: age must be nonnegative");
  }
  if (mmse_) {
    return s_ * (1.0 - c_ * std::exp(-2.0 * theta_ * age));
  }
  return fn_(age);
}

double AgePenalty::integral(double a0, double a1) const {
  if (!(a0 >= 0.0) || !(a1 >= a0)) {
    throw std::invalid_argument("AgePenalty::integral: need 0 <= a0 <= a1");
  }
  if (mmse_) {
    // Antiderivative H(a) = s (a + c e^{-2 theta a} / (2 theta)).
    const auto H = [&](double a) {
      return s_ * (a + c_ * std::exp(-2.0 * theta_ * a) / (2.0 * theta_));
    };
    return H(a1) - H(a0);
  }
  return detail::integrate(fn_, a0, a1);
}

double G_of(const AgePenalty& g, double ybar, double x, const DelayDistribution& dist) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument("G_of: x must be nonnegative");
  }
  if (g.is_mmse()) {
    const double moment = dist.exp_moment(2.0 * g.theta());
    return g.steady_variance() *
           (1.0 - g.quantization_factor() * std::exp(-2.0 * g.theta() * (ybar + x)) * moment);
  }
  double v = 0.0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    v += dist.pmf[i] * g.evaluate(ybar + x + dist.support[i]);
  }
  // Tail counted at the last retained delay; with the default truncation
  // tolerance this is far below evaluation accuracy.
  v += dist.truncated_mass * g.evaluate(ybar + x + dist.support.back());
  return v;
}

double G_inverse(const AgePenalty& g, double ybar, double lambda, const DelayDistribution& dist) {
  if (!std::isfinite(lambda)) {
    throw std::invalid_argument("G_inverse: lambda must be finite");
  }
  if (g.is_mmse()) {
    const double s = g.steady_variance();
    if (lambda >= s) {
      throw std::invalid_argument("G_inverse: lambda at or above the penalty supremum");
    }
    if (lambda <= G_of(g, ybar, 0.0, dist)) {
      return 0.0;
    }
    const double moment = dist.exp_moment(2.0 * g.theta());
    const double target =
        std::log(s * g.quantization_factor() * moment / (s - lambda)) / (2.0 * g.theta());
    return std::max(0.0, target - ybar);
  }
  if (lambda <= G_of(g, ybar, 0.0, dist)) {
    return 0.0;
  }
  // Expanding bracket followed by bisection on the monotone map x -> G(x).
  double lo = 0.0;
  double hi = 1.0;
  int expansions = 0;
  while (G_of(g, ybar, hi, dist) < lambda) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 200) {
      throw std::runtime_error("G_inverse: lambda not reachable by any finite wait");
    }
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (G_of(g, ybar, mid, dist) < lambda ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m));
  const double frm = f(0.5 * (m + b));
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) {
    return 0.0;
  }
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  return adaptive(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 50);
}

}  // namespace detail

}  // namespace ouq
