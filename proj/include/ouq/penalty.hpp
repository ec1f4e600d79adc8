#pragma once

#include <functional>

#include "ouq/channel.hpp"
#include "ouq/ou.hpp"

namespace ouq {

/// Increasing age-penalty functional. The built-in kind is the OU MMSE
/// penalty h_ell(a) = s (1 - (1 - 2^{-2 ell}) e^{-2 theta a}) with
/// s = sigma^2/(2 theta); arbitrary increasing penalties are supported for
/// the generic solver paths.
class AgePenalty {
 public:
  /// Empty penalty; unusable until assigned from one of the factories.
  AgePenalty() = default;

  static AgePenalty mmse_ou(const OUParams& params, int ell);

  /// Custom increasing penalty. Monotonicity is audited on a 1000-point grid
  /// over [0, audit_hi] at construction.
  static AgePenalty custom(std::function<double(double)> fn, double audit_hi = 100.0);

  double operator()(double age) const { return evaluate(age); }
  double evaluate(double age) const;

  /// Integral of the penalty over [a0, a1]: analytic antiderivative for
  /// mmse_ou, adaptive Simpson (abs tol 1e-10) otherwise.
  double integral(double a0, double a1) const;

  bool is_mmse() const { return mmse_; }
  double steady_variance() const { return s_; }      // mmse_ou only
  double quantization_factor() const { return c_; }  // 1 - 2^{-2 ell}
  double theta() const { return theta_; }
  /// Penalty floor h(0); equals s 2^{-2 ell} for mmse_ou.
  double floor_value() const { return evaluate(0.0); }

 private:
  bool mmse_ = false;
  double s_ = 0.0;
  double c_ = 0.0;
  double theta_ = 0.0;
  std::function<double(double)> fn_;
};

/// G_{ybar}(x) = E[g(ybar + x + Y)] with Y ~ dist.
double G_of(const AgePenalty& g, double ybar, double x, const DelayDistribution& dist);

/// [G_{ybar}^{-1}(lambda)]^+ : the waiting time after which the expected
/// end-of-epoch penalty reaches lambda. Logarithmic closed form for mmse_ou;
/// monotone bisection (tol 1e-12) otherwise. Throws if lambda is not
/// reachable by any finite wait.
double G_inverse(const AgePenalty& g, double ybar, double lambda, const DelayDistribution& dist);

namespace detail {
/// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);
}  // namespace detail

}  // namespace ouq
