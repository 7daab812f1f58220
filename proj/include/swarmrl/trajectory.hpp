#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace swarmrl {

/// One recorded step of a run.
struct TrajectoryPoint {
  std::uint64_t step = 0;
  double time = 0.0;
  /// Privileged value sum_a pi_a q_hat_a.
  double value = 0.0;
  /// Mean reward actually sampled since the previous record. Steps without samples
  /// (the initial state, ODE references) report `value` instead.
  double sampled_reward = 0.0;
  /// Probability (RL, ODE) or member fraction (population) on the optimal arm.
  double mass_optimal = 0.0;
  /// Whether the optimal arm strictly dominates every other entry.
  bool argmax_optimal = false;
  /// Simplex entries, or per-type member counts for population runs.
  std::vector<double> state;
  /// Full member list; only filled when a member dump was requested.
  std::vector<std::uint32_t> members;
};

struct Trajectory {
  /// Rule tag: CL, MCL, BCL, BMCL, VR, WVR, TRD or MRD.
  std::string kind;
  std::size_t optimal_arm = 0;
  /// Number of arms/types, i.e. the width of `state`.
  std::size_t n_states = 0;
  /// Skipped B-MCL batches or silent WVR steps.
  std::size_t degenerate_steps = 0;
  /// True when `state` holds member counts instead of probabilities.
  bool state_is_counts = false;
  std::vector<TrajectoryPoint> points;
};

struct AggregatePoint {
  std::uint64_t step = 0;
  double time = 0.0;
  double mean_value = 0.0;
  double var_value = 0.0;
  double mean_sampled_reward = 0.0;
  double frac_seeds_optimal = 0.0;
  double mean_mass_optimal = 0.0;
  double var_mass_optimal = 0.0;

  bool operator==(const AggregatePoint&) const = default;
};

/// Pointwise statistics over seeds. Variances use the population convention
/// (divide by the number of trajectories).
struct AggregateSeries {
  std::size_t trajectories = 0;
  std::vector<AggregatePoint> points;
};

/// Throws AggregationError for an empty input or trajectories on different step grids.
AggregateSeries aggregate(std::span<const Trajectory> trajectories);

/// Largest |a.mean_value - b.mean_value| over the shared grid. Grids must match.
double max_value_gap(const AggregateSeries& a, const AggregateSeries& b);

}  // namespace swarmrl
