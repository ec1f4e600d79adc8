#include "ouq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ouq/csv.hpp"

namespace ouq {

void Codebook::refresh_boundaries() {
  boundaries.resize(levels.size() > 0 ? levels.size() - 1 : 0);
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    boundaries[k] = 0.5 * (levels[k] + levels[k + 1]);
  }
}

double rd_quantizer_mse(const OUParams& params, int ell) {
  if (ell < 1) {
    throw std::invalid_argument("rd_quantizer_mse: ell must be >= 1");
  }
  return params.steady_state_variance() * std::exp2(-2.0 * ell);
}

namespace {

struct Prefix {
  std::vector<double> x;    // sorted samples
  std::vector<double> sum;  // prefix sums of x
  std::vector<double> sq;   // prefix sums of x^2

  explicit Prefix(std::vector<double> samples) : x(std::move(samples)) {
    std::sort(x.begin(), x.end());
    sum.resize(x.size() + 1, 0.0);
    sq.resize(x.size() + 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum[i + 1] = sum[i] + x[i];
      sq[i + 1] = sq[i] + x[i] * x[i];
    }
  }

  std::size_t count() const { return x.size(); }
  double range_sum(std::size_t a, std::size_t b) const { return sum[b] - sum[a]; }
  double range_sq(std::size_t a, std::size_t b) const { return sq[b] - sq[a]; }
};

}  // namespace

Codebook lloyd_train_samples(std::vector<double> samples, int ell, int max_iter, double tol,
                             std::vector<double>* mse_trace) {
  if (ell < 1 || ell > 24) {
    throw std::invalid_argument("lloyd_train_samples: ell out of range");
  }
  const std::size_t levels_n = std::size_t{1} << ell;
  Prefix data(std::move(samples));
  {
    std::vector<double> uniq(data.x);
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (uniq.size() < levels_n) {
      throw std::invalid_argument("lloyd_train_samples: fewer distinct samples than levels");
    }
  }

  Codebook cb;
  cb.levels.resize(levels_n);
  for (std::size_t k = 0; k < levels_n; ++k) {
    // Quantile seeding keeps initial cells non-empty.
    const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(levels_n);
    cb.levels[k] = data.x[static_cast<std::size_t>(q * static_cast<double>(data.count() - 1))];
  }
  std::sort(cb.levels.begin(), cb.levels.end());

  const double scale = std::max(1.0, data.x.back() - data.x.front());
  std::vector<std::size_t> edges(levels_n + 1);

  for (int iter = 0; iter < max_iter; ++iter) {
    cb.refresh_boundaries();

    edges[0] = 0;
    edges[levels_n] = data.count();
    for (std::size_t k = 0; k + 1 < levels_n; ++k) {
      // Boundary ties assign to the lower cell.
      edges[k + 1] = static_cast<std::size_t>(
          std::upper_bound(data.x.begin(), data.x.end(), cb.boundaries[k]) - data.x.begin());
    }

    double max_shift = 0.0;
    bool reseeded = false;
    for (std::size_t k = 0; k < levels_n; ++k) {
      const std::size_t a = edges[k], b = edges[k + 1];
      if (b > a) {
        const double centroid = data.range_sum(a, b) / static_cast<double>(b - a);
        max_shift = std::max(max_shift, std::abs(centroid - cb.levels[k]));
        cb.levels[k] = centroid;
      } else {
        // Empty cell: re-seed at the midpoint of the currently largest cell.
        std::size_t big = 0;
        for (std::size_t j = 1; j < levels_n; ++j) {
          if (edges[j + 1] - edges[j] > edges[big + 1] - edges[big]) {
            big = j;
          }
        }
        const double lo = data.x[edges[big]];
        const double hi = data.x[edges[big + 1] - 1];
        cb.levels[k] = 0.5 * (lo + hi);
        reseeded = true;
      }
    }
    std::sort(cb.levels.begin(), cb.levels.end());

    if (mse_trace) {
      cb.refresh_boundaries();
      double err = 0.0;
      std::size_t a = 0;
      for (std::size_t k = 0; k < levels_n; ++k) {
        const std::size_t b =
            (k + 1 == levels_n)
                ? data.count()
                : static_cast<std::size_t>(std::upper_bound(data.x.begin(), data.x.end(),
                                                            cb.boundaries[k]) -
                                           data.x.begin());
        err += data.range_sq(a, b) - 2.0 * cb.levels[k] * data.range_sum(a, b) +
               static_cast<double>(b - a) * cb.levels[k] * cb.levels[k];
        a = b;
      }
      mse_trace->push_back(err / static_cast<double>(data.count()));
    }

    if (!reseeded && max_shift <= tol * scale) {
      break;
    }
  }
  cb.refresh_boundaries();
  return cb;
}

Codebook lloyd_train(const std::vector<SamplePath>& training, int ell, int max_iter, double tol) {
  if (training.empty()) {
    throw std::invalid_argument("lloyd_train: no training paths");
  }
  const std::size_t levels_n = std::size_t{1} << ell;
  std::vector<double> mean_levels(levels_n, 0.0);
  for (const SamplePath& path : training) {
    Codebook cb = lloyd_train_samples(path.values, ell, max_iter, tol);
    // Levels come out sorted, so the element-wise average is well-defined.
    for (std::size_t k = 0; k < levels_n; ++k) {
      mean_levels[k] += cb.levels[k];
    }
  }
  Codebook avg;
  avg.levels = std::move(mean_levels);
  for (double& v : avg.levels) {
    v /= static_cast<double>(training.size());
  }
  avg.refresh_boundaries();
  return avg;
}

std::pair<int, double> quantize(const Codebook& cb, double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("quantize: non-finite input");
  }
  const auto it = std::lower_bound(cb.boundaries.begin(), cb.boundaries.end(), x);
  const auto idx = static_cast<int>(it - cb.boundaries.begin());
  return {idx, cb.levels[static_cast<std::size_t>(idx)]};
}

double quantizer_mse(const Codebook& cb, const std::vector<double>& samples) {
  double err = 0.0;
  for (double x : samples) {
    const double d = x - quantize(cb, x).second;
    err += d * d;
  }
  return err / static_cast<double>(samples.size());
}

void write_csv(const Codebook& cb, std::ostream& out) {
  out << "index,level,lower_boundary,upper_boundary\n";
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cb.levels.size(); ++k) {
    const double lo = (k == 0) ? -inf : cb.boundaries[k - 1];
    const double hi = (k + 1 == cb.levels.size()) ? inf : cb.boundaries[k];
    out << k << ',' << csv::num(cb.levels[k]) << ',' << csv::num(lo) << ',' << csv::num(hi)
        << '\n';
  }
}

}  // namespace ouq
