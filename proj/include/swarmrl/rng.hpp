#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace swarmrl {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the `index`-th child stream of `base`. Pure function of its inputs.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// A private random stream. Every run owns one; nothing is shared between runs.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

  /// Standard exponential variate.
  double exponential() { return -std::log1p(-uniform()); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace swarmrl
