#pragma once

#include <string>
#include <vector>

#include "ouq/experiments.hpp"

namespace ouq {

struct CheckResult {
  std::string name;
  bool passed;
  double measured;   // worst observed deviation
  double tolerance;  // allowed deviation (0 for structural checks)
  std::string note;
};

/// |sum(pmf) + truncated_mass - 1| within 1e-12.
CheckResult check_mass_conservation(const DelayDistribution& dist);

/// G(G^{-1}(lambda)) round trip within 1e-10 on the active region.
CheckResult check_g_roundtrip(const AgePenalty& g, const DelayDistribution& dist);

/// wait(ybar) = 0 iff ybar >= threshold; ybar + wait constant where positive.
CheckResult check_threshold_structure(const IIRPolicy& policy);

/// First-order stochastic dominance of the enhanced delay and the induced
/// ordering of G and lambda*.
CheckResult check_enhanced_dominance(const OUParams& params, const CodeConfig& cfg,
                                     const SuccessProbs& sp);

/// Training MSE non-increasing across Lloyd iterations.
CheckResult check_lloyd_monotone(const std::vector<double>& samples, int ell);

/// Informational: the BSC+MDS p_j sequence is not always monotone; reports
/// the first violation index without failing.
CheckResult diagnose_pj_monotonicity(const SuccessProbs& sp);

/// The full invariant suite at the given configuration.
std::vector<CheckResult> run_validation(const ExperimentConfig& cfg);

}  // namespace ouq
