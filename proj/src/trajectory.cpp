#include "swarmrl/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "swarmrl/errors.hpp"

namespace swarmrl {
namespace {

// Two-pass mean and population variance of one column.
template <typename Get>
std::pair<double, double> mean_and_variance(std::span<const Trajectory> ts, std::size_t i,
                                            Get get) {
  const double n = static_cast<double>(ts.size());
  double sum = 0.0;
  for (const Trajectory& t : ts) sum += get(t.points[i]);
  const double mean = sum / n;
  double ss = 0.0;
  for (const Trajectory& t : ts) {
    const double d = get(t.points[i]) - mean;
    ss += d * d;
  }
  return {mean, ss / n};
}

}  // namespace

AggregateSeries aggregate(std::span<const Trajectory> trajectories) {
  if (trajectories.empty()) throw AggregationError("nothing to aggregate");
  const auto& grid = trajectories.front().points;
  for (const Trajectory& t : trajectories) {
    if (t.points.size() != grid.size()) {
      throw AggregationError("trajectories have " + std::to_string(t.points.size()) + " and " +
                             std::to_string(grid.size()) + " points");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (t.points[i].step != grid[i].step) {
        throw AggregationError("trajectories disagree on the step at index " +
                               std::to_string(i));
      }
    }
  }

  const double n = static_cast<double>(trajectories.size());
  AggregateSeries series;
  series.trajectories = trajectories.size();
  series.points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [mean_value, var_value] =
        mean_and_variance(trajectories, i, [](const TrajectoryPoint& p) { return p.value; });
    const auto [mean_mass, var_mass] = mean_and_variance(
        trajectories, i, [](const TrajectoryPoint& p) { return p.mass_optimal; });
    double sampled = 0.0;
    std::size_t optimal = 0;
    for (const Trajectory& t : trajectories) {
      sampled += t.points[i].sampled_reward;
      optimal += t.points[i].argmax_optimal ? 1 : 0;
    }
    AggregatePoint out;
    out.step = grid[i].step;
    out.time = grid[i].time;
    out.mean_value = mean_value;
    out.var_value = var_value;
    out.mean_sampled_reward = sampled / n;
    out.frac_seeds_optimal = static_cast<double>(optimal) / n;
    out.mean_mass_optimal = mean_mass;
    out.var_mass_optimal = var_mass;
    series.points.push_back(out);
  }
  return series;
}

double max_value_gap(const AggregateSeries& a, const AggregateSeries& b) {
  if (a.points.size() != b.points.size()) {
    throw AggregationError("series have different lengths");
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].step != b.points[i].step) {
      throw AggregationError("series disagree on the step grid");
    }
    gap = std::max(gap, std::abs(a.points[i].mean_value - b.points[i].mean_value));
  }
  return gap;
}

}  // namespace swarmrl
