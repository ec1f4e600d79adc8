#pragma once

#include <cstdint>
#include <random>

namespace ouq {

/// Seeded, splittable random source.
///
/// Generator identity: std::mt19937_64 seeded through splitmix64 so that
/// nearby user seeds produce decorrelated streams. split(k) derives an
/// independent stream deterministically from (base seed, k), so concurrent
/// paths/runs can each own their own Rng.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : base_seed_(seed), eng_(splitmix64(seed)) {}

  /// Derive an independent stream from this generator's base seed.
  Rng split(std::uint64_t stream) const {
    return Rng(splitmix64(base_seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
  }

  double normal() { return normal_(eng_); }
  double uniform() { return uniform_(eng_); }  // [0,1)
  bool bernoulli(double p) { return uniform_(eng_) < p; }

  std::mt19937_64& engine() { return eng_; }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t base_seed_;
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace ouq
