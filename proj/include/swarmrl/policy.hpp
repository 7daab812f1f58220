#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "swarmrl/env.hpp"
#include "swarmrl/rng.hpp"
#include "swarmrl/simplex.hpp"

namespace swarmrl {

/// Per-arm change of a simplex; components sum to zero.
using Direction = std::vector<double>;

/// One (action, reward) observation.
struct Sample {
  std::size_t arm = 0;
  double reward = 0.0;
};

/// Exponential moving average of observed rewards, the learner's stand-in for
/// the policy value in Maynard-Cross Learning.
///
/// The first observed reward initializes the average. Until 1/gamma rewards have
/// been seen, each new reward gets weight max(gamma, 1/count), i.e. the average
/// is the plain mean of the rewards so far; a single unlucky first draw would
/// otherwise dominate for ~1/gamma steps. The average never drops below kFloor.
class RewardBaseline {
 public:
  static constexpr double kFloor = 1e-6;

  explicit RewardBaseline(double gamma);
  /// Starts from a settled average: updates use weight gamma right away.
  RewardBaseline(double r_bar, double gamma);

  bool initialized() const { return initialized_; }
  double r_bar() const { return r_bar_; }
  double gamma() const { return gamma_; }

  /// r_bar <- w * reward + (1 - w) * r_bar with w = max(gamma, 1/count).
  void observe(double reward);

 private:
  double r_bar_ = 0.0;
  double gamma_;
  bool initialized_ = false;
  std::uint64_t count_ = 0;
};

/// Batches whose mean reward is below this are skipped by B-MCL.
inline constexpr double kDegenerateBatchMean = 1e-6;

/// Draw an arm with probability pi[a].
std::size_t sample_action(const Simplex& pi, RngStream& rng);

/// weight * (e_k - pi): the Cross Learning update direction for action k.
Direction cross_direction(const Simplex& pi, std::size_t k, double weight);

/// Cross Learning scaled by a learning rate:
///   pi_a += alpha * r * (1 - pi_a)  if a == k,   pi_a -= alpha * r * pi_a  otherwise.
/// Stays on the simplex without clamping for r in [0,1], alpha in (0,1].
Simplex cl_update(const Simplex& pi, std::size_t k, double reward, double alpha = 1.0);

/// Maynard-Cross Learning with a moving-average value estimate. The raw step is
/// the CL step scaled by reward / r_bar; the result is clamped to [0,1] and
/// renormalized, then the baseline absorbs the reward.
Simplex mcl_update(const Simplex& pi, std::size_t k, double reward, RewardBaseline& baseline,
                   double alpha);

/// Batched Cross Learning: pi + mean over the batch of the CL directions.
Simplex bcl_update(const Simplex& pi, std::span<const Sample> batch);

/// Batched Maynard-Cross Learning: each CL direction is weighted by reward / batch
/// mean. Throws DegenerateBatchError when the batch mean is below kDegenerateBatchMean.
Simplex bmcl_update(const Simplex& pi, std::span<const Sample> batch);

/// v = sum_a pi_a q_a.
double policy_value(const Simplex& pi, std::span<const double> q);
inline double policy_value(const Simplex& pi, const QTable& q) { return policy_value(pi, q.q); }

/// pi_a (q_a - v): the expected CL step, i.e. the Taylor replicator field.
Direction expected_cl_direction(const Simplex& pi, std::span<const double> q);
inline Direction expected_cl_direction(const Simplex& pi, const QTable& q) {
  return expected_cl_direction(pi, q.q);
}

/// (pi_a / v)(q_a - v): the expected MCL step, i.e. the Maynard Smith replicator field.
/// Throws NumericError when v == 0.
Direction expected_mcl_direction(const Simplex& pi, std::span<const double> q);
inline Direction expected_mcl_direction(const Simplex& pi, const QTable& q) {
  return expected_mcl_direction(pi, q.q);
}

}  // namespace swarmrl
