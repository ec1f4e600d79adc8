#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ouq/rng.hpp"

namespace ouq {

/// Quantization/coding configuration: ell quantization bits, n codeword bits
/// (n >= ell), T_b seconds per bit, beta seconds of receiver processing per
/// decoding attempt.
struct CodeConfig {
  int ell;
  int n;
  double Tb;
  double beta;

  CodeConfig(int ell_, int n_, double Tb_, double beta_);

  /// Nominal single-attempt time n T_b + beta.
  double nbar() const { return static_cast<double>(n) * Tb + beta; }
};

/// Per-attempt ACK probabilities p_0, p_1, ... for a given code/channel.
/// p_j is the probability of successful decoding with j IR bits appended.
class SuccessProbs {
 public:
  SuccessProbs(std::vector<double> p, double epsilon);

  /// p_j; indices past the computed range are served by the last value once
  /// it has converged to 1 (within 1e-12), otherwise this throws.
  double at(std::size_t j) const;

  std::size_t size() const { return p_.size(); }
  double epsilon() const { return epsilon_; }
  const std::vector<double>& values() const { return p_; }

  /// The BSC+MDS formula is not monotone in j for every (ell, n, epsilon);
  /// returns the first index j with p_j > p_{j+1}, or -1 if nondecreasing.
  long first_non_monotone_index() const;

 private:
  std::vector<double> p_;
  double epsilon_;
};

/// ACK probabilities for MDS-coded transmission over a BSC(epsilon):
/// p_j = P(Bin(n + j, epsilon) <= floor((n + j - ell)/2)).
/// Computation stops early once p_j has converged to 1.
SuccessProbs mds_success_probs(const CodeConfig& cfg, double epsilon, std::size_t j_max = 4000);

/// Discrete channel-delay distribution with explicit truncated tail mass.
struct DelayDistribution {
  std::vector<double> support;  // sorted, support.front() == nbar
  std::vector<double> pmf;
  double truncated_mass = 0.0;

  double mean() const;
  /// E[e^{-rate Y}] over the retained support (tail contributes at most
  /// truncated_mass * e^{-rate * support.back()}).
  double exp_moment(double rate) const;
  /// Inverse-CDF draw; residual tail mass maps to the last support point.
  double sample(Rng& rng) const;
};

/// Channel-delay pmf for IIR. Original scheme: support nbar + k (T_b + beta)
/// with P = prod_{j<k}(1-p_j) p_k. Enhanced scheme streams IR bits during
/// processing: support spacing T_b when beta < T_b (same attempt
/// probabilities), or beta when beta >= T_b with attempt-j success
/// probability p_{floor(j beta / T_b)}.
DelayDistribution delay_pmf_iir(const SuccessProbs& sp, const CodeConfig& cfg, bool enhanced,
                                double tail_tol = 1e-12, std::size_t support_cap = 100000);

/// Smallest integer kappa in {0, ..., r} with floor(kappa beta / T_b) >= r.
/// Meaningful in the beta >= T_b regime; kappa(0) = 0.
int kappa(int r, const CodeConfig& cfg);

/// Channel-delay time saved by the enhanced IIR scheme for a given IR bit
/// count r: r min{beta, T_b} + (r - kappa) beta [beta >= T_b].
double enhanced_saving(int r, const CodeConfig& cfg);

/// Event-driven realized delay when decoding needs exactly r IR bits.
/// Bits take T_b each, every decoding attempt takes beta; the enhanced
/// transmitter keeps streaming IR bits during processing.
double timeline_delay_for_r(int r, const CodeConfig& cfg, bool enhanced);

/// Event-driven realized delay with random per-attempt decoding outcomes
/// (attempt with k IR bits available succeeds with probability p_k).
double simulate_timeline_iir(const SuccessProbs& sp, const CodeConfig& cfg, bool enhanced,
                             Rng& rng);

/// Number of FR transmission attempts until success: geometric with
/// parameter p0, support {1, 2, ...}.
int sample_attempts_fr(double p0, Rng& rng);

void write_csv(const DelayDistribution& dist, std::ostream& out);  // delay,probability
void write_csv(const SuccessProbs& sp, std::ostream& out);         // j,p_j

namespace detail {
/// floor(num/den) with a small relative guard against representation error
/// in ratios like 1.5 or 0.2 that are exact in intent but not in binary.
long floor_ratio(double num, double den);
}  // namespace detail

}  // namespace ouq
