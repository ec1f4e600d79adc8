#pragma once

#include <iosfwd>
#include <vector>

#include "ouq/channel.hpp"
#include "ouq/penalty.hpp"

namespace ouq {

/// Threshold waiting policy for IIR together with the optimal long-term
/// average penalty it attains.
struct IIRPolicy {
  double lambda_star = 0.0;
  AgePenalty g;
  DelayDistribution dist;
  /// For the mmse_ou penalty the optimal wait is [threshold_age - ybar]^+;
  /// NaN for custom penalties (wait falls back to G_inverse).
  double threshold_age = 0.0;

  /// w*(ybar) = [G_{ybar}^{-1}(lambda_star)]^+.
  double wait(double ybar) const;
};

/// Just-in-time FR policy: waiting offset delta after each delivery and the
/// resulting inter-transmission period.
struct FRPolicy {
  double delta;
  double period;  // effective inter-decode period

  FRPolicy(const CodeConfig& cfg, double delta_);
  static FRPolicy optimal(const CodeConfig& cfg);
};

/// Dinkelbach auxiliary value p(lambda): expected epoch penalty area minus
/// lambda times expected epoch length, at the lambda-optimal waiting rule,
/// with the starting AoI distributed as the epoch-ending delay.
double p_iir(double lambda, const AgePenalty& g, const DelayDistribution& dist);

/// Bisection on p_iir; for mmse_ou the root is bracketed analytically by
/// [2^{-2 ell} s, s]. tol is relative on lambda.
IIRPolicy solve_iir(const AgePenalty& g, const DelayDistribution& dist, double tol = 1e-9);

/// Logarithmic closed form of the optimal IIR wait for the OU MMSE penalty;
/// agrees with G_inverse.
double iir_waiting_closed_form(double ybar, double lambda, const OUParams& params, int ell,
                               const DelayDistribution& dist);

/// Optimal post-delivery offset [beta - n T_b]^+ (just-in-time updating).
double fr_optimal_delta(const CodeConfig& cfg);

/// Effective inter-decode period for offset delta. The receiver cannot
/// decode faster than one message per beta, so the nominal period
/// n T_b + delta saturates at beta; sending earlier than the just-in-time
/// offset cannot shorten the cycle.
double fr_period(const CodeConfig& cfg, double delta);

/// Closed-form long-term average MMSE of the FR scheme at offset delta.
/// delta = beta reproduces the non-enhanced scheme, delta = [beta - nT_b]^+
/// the enhanced one.
double fr_mmse(const OUParams& params, const CodeConfig& cfg, double p0, double delta);

/// Ratio objective of the FR problem as a function of the first waiting time
/// w1 (all later waits zero), non-enhanced attempt timing.
double fr_first_wait_objective(const AgePenalty& g, const CodeConfig& cfg, double p0, double w1);

/// Grid argmin of the objective above; the zero-wait optimality result
/// predicts 0. The grid must contain 0.
double fr_zero_wait_check(const AgePenalty& g, const CodeConfig& cfg, double p0,
                          const std::vector<double>& grid);

/// CSV `ybar,wait` sampled over the policy's delay support.
void write_csv(const IIRPolicy& policy, std::ostream& out);

}  // namespace ouq
