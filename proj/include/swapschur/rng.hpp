#pragma once

#include <cstdint>
#include <random>

namespace swapschur {

/// Seeded generator used everywhere a random choice is made.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard.
/// Uniform variates are derived from raw 64-bit draws here rather than via
/// <random> distributions, whose algorithms vary between standard libraries;
/// this keeps seeded output identical across platforms.
class Rng {
 public:
  static constexpr const char* algorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (one value per call).
  double normal();

  /// Independent stream for job `index`, derived from this generator's seed.
  Rng fork(std::uint64_t index) const;

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

/// Fresh seed from OS entropy, for runs where the caller gave none.
std::uint64_t entropy_seed();

}  // namespace swapschur
