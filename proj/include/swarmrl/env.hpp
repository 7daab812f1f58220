#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swarmrl/rng.hpp"

namespace swarmrl {

/// Where the latent means of a bandit family are drawn from.
///   NearZero: Uniform(-6, -2)   Spread: Uniform(-3, 3)   NearOne: Uniform(2, 6)
enum class EnvFamily { NearZero, Spread, NearOne };

std::string_view to_string(EnvFamily family);
/// Accepts "near-zero", "near_zero", "nearzero", "NearZero" (case-insensitive) etc.
EnvFamily parse_env_family(std::string_view text);

struct EnvDescriptor {
  EnvFamily family = EnvFamily::Spread;
  std::size_t n_arms = 10;
  double variance = 1.0;
  std::uint64_t seed = 0;

  bool operator==(const EnvDescriptor&) const = default;
};

/// Logistic function 1 / (1 + e^-x).
double sigmoid(double x);

/// Multi-armed bandit whose arm a pays sigmoid(x), x ~ N(latent_means[a], variance).
/// Immutable after construction.
class BanditEnv {
 public:
  BanditEnv(EnvFamily family, std::vector<double> latent_means, double variance,
            std::uint64_t seed = 0);

  std::size_t n_arms() const { return latent_means_.size(); }
  std::span<const double> latent_means() const { return latent_means_; }
  double variance() const { return variance_; }
  double stddev() const { return stddev_; }
  EnvFamily family() const { return family_; }
  std::uint64_t seed() const { return seed_; }
  /// Index of the strictly largest latent mean (and hence of the largest q).
  std::size_t optimal_arm() const { return optimal_arm_; }
  EnvDescriptor descriptor() const { return {family_, n_arms(), variance_, seed_}; }

 private:
  EnvFamily family_;
  std::vector<double> latent_means_;
  double variance_;
  double stddev_;
  std::uint64_t seed_;
  std::size_t optimal_arm_;
};

BanditEnv make_env(EnvFamily family, std::size_t n_arms, double variance, std::uint64_t seed);
BanditEnv make_env(const EnvDescriptor& desc);

/// One reward draw from `arm`. Throws std::out_of_range for a bad arm index.
double sample_reward(const BanditEnv& env, std::size_t arm, RngStream& rng);

/// Monte Carlo estimate of the expected squashed reward of every arm.
struct QTable {
  std::vector<double> q;
  std::size_t sample_count = 0;

  std::size_t size() const { return q.size(); }
  double operator[](std::size_t a) const { return q[a]; }
};

inline constexpr std::size_t kDefaultQSamples = 10'000'000;

/// Each arm is estimated from its own stream derived from the env seed, so the
/// result does not depend on `jobs`.
QTable estimate_q(const BanditEnv& env, std::size_t samples = kDefaultQSamples,
                  unsigned jobs = 1);

}  // namespace swarmrl
