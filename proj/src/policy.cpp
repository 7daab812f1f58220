#include "swarmrl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "swarmrl/errors.hpp"

namespace swarmrl {
namespace {

constexpr double kMaxDrift = 1e-6;

void check_reward(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw ContractError("reward " + std::to_string(r) + " outside [0, 1]");
  }
}

void check_arm(const Simplex& pi, std::size_t k) {
  if (k >= pi.size()) {
    throw std::out_of_range("action " + std::to_string(k) + " out of range for " +
                            std::to_string(pi.size()) + " arms");
  }
}

void check_batch(const Simplex& pi, std::span<const Sample> batch) {
  if (batch.empty()) throw ContractError("batch must not be empty");
  for (const Sample& s : batch) {
    check_arm(pi, s.arm);
    check_reward(s.reward);
  }
}

// Finish an update whose exact-arithmetic result is already on the simplex.
Simplex settle(std::vector<double> p) {
  double total = 0.0;
  for (double& x : p) {
    x = std::clamp(x, 0.0, 1.0);
    total += x;
  }
  const double drift = std::abs(total - 1.0);
  if (drift > kMaxDrift) {
    throw NumericError("simplex drifted by " + std::to_string(drift) + " in one update");
  }
  if (drift > Simplex::kSumTolerance) {
    for (double& x : p) x /= total;
  }
  return Simplex(std::move(p));
}

// Finish an update that may leave [0,1]: clamp each entry, then renormalize.
Simplex clamp_and_renormalize(std::vector<double> p) {
  for (double& x : p) x = std::clamp(x, 0.0, 1.0);
  return Simplex::normalized(std::move(p));
}

std::vector<double> apply_batch(const Simplex& pi, std::span<const Sample> batch,
                                double reward_scale) {
  // sum_s w_s (e_{k_s} - pi) = hits - (sum_s w_s) pi, with w_s = r_s * scale / B.
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  std::vector<double> hits(pi.size(), 0.0);
  double total_weight = 0.0;
  for (const Sample& s : batch) {
    const double w = s.reward * reward_scale * inv_b;
    hits[s.arm] += w;
    total_weight += w;
  }
  std::vector<double> next(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) {
    next[a] = pi[a] + hits[a] - total_weight * pi[a];
  }
  return next;
}

}  // namespace

RewardBaseline::RewardBaseline(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ContractError("gamma must lie in (0, 1]");
}

RewardBaseline::RewardBaseline(double r_bar, double gamma) : RewardBaseline(gamma) {
  if (!(r_bar > 0.0)) throw NumericError("reward baseline must be positive");
  r_bar_ = r_bar;
  initialized_ = true;
  count_ = std::numeric_limits<std::uint64_t>::max();
}

void RewardBaseline::observe(double reward) {
  if (count_ < std::numeric_limits<std::uint64_t>::max()) ++count_;
  initialized_ = true;
  const double w = std::max(gamma_, 1.0 / static_cast<double>(count_));
  r_bar_ = std::max(w * reward + (1.0 - w) * r_bar_, kFloor);
}

std::size_t sample_action(const Simplex& pi, RngStream& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < pi.size(); ++a) {
    if (pi[a] <= 0.0) continue;
    cumulative += pi[a];
    last_positive = a;
    if (u < cumulative) return a;
  }
  // u landed in the rounding gap between the cumulative sum and 1.
  return last_positive;
}

Direction cross_direction(const Simplex& pi, std::size_t k, double weight) {
  check_arm(pi, k);
  Direction d(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) {
    d[a] = weight * ((a == k ? 1.0 : 0.0) - pi[a]);
  }
  return d;
}

Simplex cl_update(const Simplex& pi, std::size_t k, double reward, double alpha) {
  check_arm(pi, k);
  check_reward(reward);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ContractError("alpha must lie in (0, 1]");
  const double step = alpha * reward;
  std::vector<double> next(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) {
    next[a] = a == k ? pi[a] + step * (1.0 - pi[a]) : pi[a] - step * pi[a];
  }
  return settle(std::move(next));
}

Simplex mcl_update(const Simplex& pi, std::size_t k, double reward, RewardBaseline& baseline,
                   double alpha) {
  check_arm(pi, k);
  check_reward(reward);
  if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
  const bool first = !baseline.initialized();
  if (first) baseline.observe(reward);
  if (!(baseline.r_bar() > 0.0)) throw NumericError("reward baseline is not positive");

  const double step = alpha * reward / baseline.r_bar();
  std::vector<double> next(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) {
    next[a] = a == k ? pi[a] + step * (1.0 - pi[a]) : pi[a] - step * pi[a];
  }
  Simplex result = clamp_and_renormalize(std::move(next));
  if (!first) baseline.observe(reward);
  return result;
}

Simplex bcl_update(const Simplex& pi, std::span<const Sample> batch) {
  check_batch(pi, batch);
  return settle(apply_batch(pi, batch, 1.0));
}

Simplex bmcl_update(const Simplex& pi, std::span<const Sample> batch) {
  check_batch(pi, batch);
  double total = 0.0;
  for (const Sample& s : batch) total += s.reward;
  const double mean = total / static_cast<double>(batch.size());
  if (mean < kDegenerateBatchMean) {
    throw DegenerateBatchError("batch mean reward " + std::to_string(mean) +
                               " is too small to normalize by");
  }
  return clamp_and_renormalize(apply_batch(pi, batch, 1.0 / mean));
}

double policy_value(const Simplex& pi, std::span<const double> q) {
  if (q.size() != pi.size()) throw ContractError("q table and policy differ in size");
  std::vector<double> terms(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) terms[a] = pi[a] * q[a];
  return ordered_sum(terms);
}

Direction expected_cl_direction(const Simplex& pi, std::span<const double> q) {
  // v is a convex combination of q; pinning it to [min q, max q] keeps a flat q an
  // exact fixed point despite rounding.
  const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
  const double v = std::clamp(policy_value(pi, q), *lo, *hi);
  Direction d(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) d[a] = pi[a] * (q[a] - v);
  return d;
}

Direction expected_mcl_direction(const Simplex& pi, std::span<const double> q) {
  const double v = policy_value(pi, q);
  if (v == 0.0) throw NumericError("policy value is zero; MRD field undefined");
  Direction d = expected_cl_direction(pi, q);
  for (double& x : d) x /= v;
  return d;
}

}  // namespace swarmrl
