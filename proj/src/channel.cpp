#include "ouq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>

#include "ouq/csv.hpp"

namespace ouq {

CodeConfig::CodeConfig(int ell_, int n_, double Tb_, double beta_)
    : ell(ell_), n(n_), Tb(Tb_), beta(beta_) {
  if (ell < 1) {
    throw std::invalid_argument("CodeConfig: ell must be >= 1");
  }
  if (n < ell) {
    throw std::invalid_argument("CodeConfig: n must be >= ell");
  }
  if (!(Tb > 0.0)) {
    throw std::invalid_argument("CodeConfig: Tb must be positive");
  }
  if (!(beta >= 0.0)) {
    throw std::invalid_argument("CodeConfig: beta must be nonnegative");
  }
}

SuccessProbs::SuccessProbs(std::vector<double> p, double epsilon)
    : p_(std::move(p)), epsilon_(epsilon) {
  if (p_.empty()) {
    throw std::invalid_argument("SuccessProbs: empty sequence");
  }
  for (double v : p_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("SuccessProbs: probability outside [0,1]");
    }
  }
}

double SuccessProbs::at(std::size_t j) const {
  if (j < p_.size()) {
    return p_[j];
  }
  if (p_.back() > 1.0 - 1e-12) {
    return p_.back();
  }
  throw std::runtime_error(
      "SuccessProbs: index beyond computed range before convergence to 1; "
      "raise j_max (channel too noisy for the cap)");
}

long SuccessProbs::first_non_monotone_index() const {
  for (std::size_t j = 0; j + 1 < p_.size(); ++j) {
    if (p_[j] > p_[j + 1]) {
      return static_cast<long>(j);
    }
  }
  return -1;
}

SuccessProbs mds_success_probs(const CodeConfig& cfg, double epsilon, std::size_t j_max) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("mds_success_probs: epsilon must be in (0, 1/2)");
  }
  std::vector<double> p;
  p.reserve(std::min<std::size_t>(j_max + 1, 1024));
  for (std::size_t j = 0; j <= j_max; ++j) {
    const int total = cfg.n + static_cast<int>(j);
    const int correctable = (total - cfg.ell) / 2;
    boost::math::binomial_distribution<double> bin(static_cast<double>(total), epsilon);
    p.push_back(boost::math::cdf(bin, static_cast<double>(correctable)));
    if (p.back() > 1.0 - 1e-15 && j >= 1) {
      break;
    }
  }
  return SuccessProbs(std::move(p), epsilon);
}

double DelayDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    m += support[i] * pmf[i];
  }
  // Residual tail counted at the last retained delay (lower bound).
  return m + truncated_mass * support.back();
}

double DelayDistribution::exp_moment(double rate) const {
  double m = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    m += std::exp(-rate * support[i]) * pmf[i];
  }
  return m;
}

double DelayDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  double cum = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    cum += pmf[i];
    if (u < cum) {
      return support[i];
    }
  }
  return support.back();
}

namespace detail {

long floor_ratio(double num, double den) {
  const double r = num / den;
  return static_cast<long>(std::floor(r + 1e-9 * std::max(1.0, std::abs(r))));
}

}  // namespace detail

DelayDistribution delay_pmf_iir(const SuccessProbs& sp, const CodeConfig& cfg, bool enhanced,
                                double tail_tol, std::size_t support_cap) {
  const double nbar = cfg.nbar();
  double spacing;
  if (!enhanced) {
    spacing = cfg.Tb + cfg.beta;
  } else if (cfg.beta < cfg.Tb) {
    spacing = cfg.Tb;
  } else {
    spacing = cfg.beta;
  }
  const bool floor_indexed = enhanced && cfg.beta >= cfg.Tb;

  DelayDistribution dist;
  double survival = 1.0;  // prod_{j<k} (1 - p_j)
  double cum = 0.0;
  for (std::size_t k = 0;; ++k) {
    if (k > support_cap) {
      throw std::runtime_error(
          "delay_pmf_iir: tail mass target not reached within the support cap "
          "(channel too noisy for the cap)");
    }
    const std::size_t attempt_index =
        floor_indexed ? static_cast<std::size_t>(detail::floor_ratio(
                            static_cast<double>(k) * cfg.beta, cfg.Tb))
                      : k;
    const double pk = sp.at(attempt_index);
    const double mass = survival * pk;
    dist.support.push_back(nbar + static_cast<double>(k) * spacing);
    dist.pmf.push_back(mass);
    cum += mass;
    survival *= (1.0 - pk);
    if (cum >= 1.0 - tail_tol) {
      break;
    }
  }
  dist.truncated_mass = std::max(0.0, 1.0 - cum);
  return dist;
}

int kappa(int r, const CodeConfig& cfg) {
  if (r < 0) {
    throw std::invalid_argument("kappa: r must be nonnegative");
  }
  for (int k = 0; k < r; ++k) {
    if (detail::floor_ratio(static_cast<double>(k) * cfg.beta, cfg.Tb) >= r) {
      return k;
    }
  }
  return r;
}

double enhanced_saving(int r, const CodeConfig& cfg) {
  if (r < 0) {
    throw std::invalid_argument("enhanced_saving: r must be nonnegative");
  }
  double saving = static_cast<double>(r) * std::min(cfg.beta, cfg.Tb);
  if (cfg.beta >= cfg.Tb) {
    saving += static_cast<double>(r - kappa(r, cfg)) * cfg.beta;
  }
  return saving;
}

double timeline_delay_for_r(int r, const CodeConfig& cfg, bool enhanced) {
  if (r < 0) {
    throw std::invalid_argument("timeline_delay_for_r: r must be nonnegative");
  }
  const double head = static_cast<double>(cfg.n) * cfg.Tb;
  if (!enhanced) {
    // Transmitter idles during processing: each retry costs one IR bit plus
    // one full processing period.
    return head + cfg.beta + static_cast<double>(r) * (cfg.Tb + cfg.beta);
  }
  // IR bits stream continuously from time `head`; attempt starts when the
  // receiver is free and at least one new bit has arrived since the last try.
  double attempt_start = head;
  for (;;) {
    const long avail = detail::floor_ratio(attempt_start - head, cfg.Tb);
    if (avail >= r) {
      return attempt_start + cfg.beta;
    }
    attempt_start = std::max(attempt_start + cfg.beta,
                             head + static_cast<double>(avail + 1) * cfg.Tb);
  }
}

double simulate_timeline_iir(const SuccessProbs& sp, const CodeConfig& cfg, bool enhanced,
                             Rng& rng) {
  const double head = static_cast<double>(cfg.n) * cfg.Tb;
  if (!enhanced) {
    double t = head;
    for (std::size_t k = 0;; ++k) {
      t += cfg.beta;
      if (rng.bernoulli(sp.at(k))) {
        return t;
      }
      t += cfg.Tb;
    }
  }
  double attempt_start = head;
  for (;;) {
    const long avail = detail::floor_ratio(attempt_start - head, cfg.Tb);
    if (rng.bernoulli(sp.at(static_cast<std::size_t>(avail)))) {
      return attempt_start + cfg.beta;
    }
    attempt_start = std::max(attempt_start + cfg.beta,
                             head + static_cast<double>(avail + 1) * cfg.Tb);
  }
}

int sample_attempts_fr(double p0, Rng& rng) {
  if (!(p0 > 0.0 && p0 <= 1.0)) {
    throw std::invalid_argument("sample_attempts_fr: p0 must be in (0, 1]");
  }
  if (p0 == 1.0) {
    return 1;
  }
  int m = 1;
  while (!rng.bernoulli(p0)) {
    ++m;
  }
  return m;
}

void write_csv(const DelayDistribution& dist, std::ostream& out) {
  out << "delay,probability\n";
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    out << csv::num(dist.support[i]) << ',' << csv::num(dist.pmf[i]) << '\n';
  }
}

void write_csv(const SuccessProbs& sp, std::ostream& out) {
  out << "j,p_j\n";
  for (std::size_t j = 0; j < sp.size(); ++j) {
    out << j << ',' << csv::num(sp.values()[j]) << '\n';
  }
}

}  // namespace ouq
