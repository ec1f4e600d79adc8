#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "ouq/ou.hpp"

namespace ouq {

/// Scalar quantizer codebook: 2^ell strictly increasing reconstruction
/// levels with nearest-neighbor cell boundaries at level midpoints.
struct Codebook {
  std::vector<double> levels;
  std::vector<double> boundaries;  // levels.size() - 1 midpoints

  /// Rebuild boundaries as midpoints of consecutive levels.
  void refresh_boundaries();
};

/// Rate-distortion quantization error model: (sigma^2/2theta) 2^{-2 ell}.
double rd_quantizer_mse(const OUParams& params, int ell);

/// Lloyd-Max training on pooled OU sample paths. One codebook is trained per
/// path; the returned levels are the element-wise average of the sorted
/// per-path levels, with boundaries recomputed as midpoints of the averaged
/// levels. An empty cell during iteration is re-seeded at the midpoint of
/// the largest cell.
Codebook lloyd_train(const std::vector<SamplePath>& training, int ell, int max_iter = 500,
                     double tol = 1e-8);

/// Single-sample-set Lloyd iteration (used per path by lloyd_train; exposed
/// for direct training and tests). `mse_trace`, when non-null, receives the
/// training MSE after each iteration.
Codebook lloyd_train_samples(std::vector<double> samples, int ell, int max_iter = 500,
                             double tol = 1e-8, std::vector<double>* mse_trace = nullptr);

/// Nearest-level lookup; ties break toward the lower index.
std::pair<int, double> quantize(const Codebook& cb, double x);

/// Mean squared reconstruction error of the codebook on a sample set.
double quantizer_mse(const Codebook& cb, const std::vector<double>& samples);

/// CSV `index,level,lower_boundary,upper_boundary` (open ends as +/-inf).
void write_csv(const Codebook& cb, std::ostream& out);

}  // namespace ouq
