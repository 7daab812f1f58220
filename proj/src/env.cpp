#include "swarmrl/env.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "swarmrl/errors.hpp"

namespace swarmrl {
namespace {

constexpr std::uint64_t kQEstimateSalt = 0x71e57a7e5eedULL;

struct Range {
  double lo;
  double hi;
};

Range family_range(EnvFamily family) {
  switch (family) {
    case EnvFamily::NearZero:
      return {-6.0, -2.0};
    case EnvFamily::Spread:
      return {-3.0, 3.0};
    case EnvFamily::NearOne:
      return {2.0, 6.0};
  }
  throw ConfigError("unknown environment family");
}

std::string normalize(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view to_string(EnvFamily family) {
  switch (family) {
    case EnvFamily::NearZero:
      return "near-zero";
    case EnvFamily::Spread:
      return "spread";
    case EnvFamily::NearOne:
      return "near-one";
  }
  return "unknown";
}

EnvFamily parse_env_family(std::string_view text) {
  const std::string key = normalize(text);
  if (key == "nearzero") return EnvFamily::NearZero;
  if (key == "spread") return EnvFamily::Spread;
  if (key == "nearone") return EnvFamily::NearOne;
  throw ConfigError("unknown environment family '" + std::string(text) +
                    "' (expected near-zero, spread or near-one)");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

BanditEnv::BanditEnv(EnvFamily family, std::vector<double> latent_means, double variance,
                     std::uint64_t seed)
    : family_(family),
      latent_means_(std::move(latent_means)),
      variance_(variance),
      stddev_(0.0),
      seed_(seed),
      optimal_arm_(0) {
  if (latent_means_.size() < 2) throw ConfigError("a bandit needs at least 2 arms");
  if (!(variance_ >= 0.0) || !std::isfinite(variance_)) {
    throw ConfigError("reward variance must be finite and non-negative");
  }
  for (double m : latent_means_) {
    if (!std::isfinite(m)) throw ConfigError("latent means must be finite");
  }
  stddev_ = std::sqrt(variance_);
  optimal_arm_ = static_cast<std::size_t>(
      std::max_element(latent_means_.begin(), latent_means_.end()) - latent_means_.begin());
}

BanditEnv make_env(EnvFamily family, std::size_t n_arms, double variance, std::uint64_t seed) {
  if (n_arms < 2) throw ConfigError("n_arms must be at least 2");
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw ConfigError("variance must be finite and non-negative");
  }
  const Range range = family_range(family);
  RngStream rng(seed);
  auto draw = [&] { return range.lo + (range.hi - range.lo) * rng.uniform(); };

  std::vector<double> means(n_arms);
  for (double& m : means) m = draw();
  // Re-draw any arm tied with the maximum so the optimal arm is unique.
  for (;;) {
    const double best = *std::max_element(means.begin(), means.end());
    auto first = std::find(means.begin(), means.end(), best);
    auto tied = std::find(std::next(first), means.end(), best);
    if (tied == means.end()) break;
    *tied = draw();
  }
  return BanditEnv(family, std::move(means), variance, seed);
}

BanditEnv make_env(const EnvDescriptor& desc) {
  return make_env(desc.family, desc.n_arms, desc.variance, desc.seed);
}

double sample_reward(const BanditEnv& env, std::size_t arm, RngStream& rng) {
  if (arm >= env.n_arms()) {
    throw std::out_of_range("arm " + std::to_string(arm) + " out of range for " +
                            std::to_string(env.n_arms()) + "-armed bandit");
  }
  const double mean = env.latent_means()[arm];
  if (env.stddev() == 0.0) return sigmoid(mean);
  return sigmoid(mean + env.stddev() * rng.normal());
}

QTable estimate_q(const BanditEnv& env, std::size_t samples, unsigned jobs) {
  if (samples == 0) throw ContractError("estimate_q needs at least one sample");
  const std::size_t n = env.n_arms();
  QTable table{std::vector<double>(n, 0.0), samples};

  auto estimate_arm = [&](std::size_t arm) {
    RngStream rng(derive_seed(env.seed() ^ kQEstimateSalt, arm));
    // Kahan summation keeps 1e7-sample means accurate to well below the MC error.
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double y = sample_reward(env, arm, rng) - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
    table.q[arm] = sum / static_cast<double>(samples);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t a = 0; a < n; ++a) estimate_arm(a);
    return table;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t a = w; a < n; a += workers) estimate_arm(a);
    });
  }
  for (auto& t : pool) t.join();
  return table;
}

}  // namespace swarmrl
