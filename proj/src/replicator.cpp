#include "swarmrl/replicator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarmrl/errors.hpp"

namespace swarmrl {
namespace {

constexpr double kNegativeSlack = 1e-9;
constexpr double kRenormalizeDrift = 1e-12;
constexpr double kMinValue = 1e-12;

Simplex advance(const Simplex& pi, const Direction& d) {
  std::vector<double> next(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) {
    double x = pi[a] + d[a];
    if (x < -kNegativeSlack) {
      throw StepSizeError("Euler step drove entry " + std::to_string(a) + " to " +
                          std::to_string(x) + "; reduce delta");
    }
    x = std::clamp(x, 0.0, 1.0);
    next[a] = x;
  }
  const double total = ordered_sum(next);
  if (std::abs(total - 1.0) > kRenormalizeDrift) {
    for (double& x : next) x /= total;
  }
  return Simplex(std::move(next));
}

std::size_t best_arm(std::span<const double> q) {
  return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
}

}  // namespace

std::string_view to_string(OdeKind kind) { return kind == OdeKind::TRD ? "TRD" : "MRD"; }

std::uint64_t step_count(double t_final, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be positive");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be positive");
  const double ratio = t_final / delta;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::uint64_t>(nearest);
  }
  return static_cast<std::uint64_t>(std::ceil(ratio));
}

Direction trd_displacement(const Simplex& pi, std::span<const double> q, double delta) {
  Direction d = expected_cl_direction(pi, q);
  for (double& x : d) x *= delta;
  return d;
}

Direction mrd_displacement(const Simplex& pi, std::span<const double> q, double delta) {
  const double v = policy_value(pi, q);
  if (!(v > kMinValue)) {
    throw NumericError("policy value " + std::to_string(v) + " too small for the MRD");
  }
  const double v_inv_delta = delta / v;
  const Direction field = expected_cl_direction(pi, q);
  Direction d(field.size());
  for (std::size_t a = 0; a < d.size(); ++a) d[a] = field[a] * v_inv_delta;
  return d;
}

Simplex trd_step(const Simplex& pi, std::span<const double> q, double delta) {
  const double v = policy_value(pi, q);
  double spread = 0.0;
  for (double qa : q) spread = std::max(spread, std::abs(qa - v));
  if (delta * spread > 1.0) {
    throw StepSizeError("delta * max|q_a - v| = " + std::to_string(delta * spread) +
                        " exceeds 1");
  }
  return advance(pi, trd_displacement(pi, q, delta));
}

Simplex mrd_step(const Simplex& pi, std::span<const double> q, double delta) {
  return advance(pi, mrd_displacement(pi, q, delta));
}

Trajectory integrate(const OdeConfig& cfg, const Simplex& pi0, std::span<const double> q) {
  if (q.size() != pi0.size()) throw ContractError("q table and initial state differ in size");
  if (cfg.record_stride == 0) throw ConfigError("record_stride must be at least 1");
  if (cfg.t_final < cfg.delta * (1.0 - 1e-12)) throw ConfigError("t_final must be >= delta");
  const std::uint64_t steps = step_count(cfg.t_final, cfg.delta);
  const std::size_t best = best_arm(q);

  Trajectory traj;
  traj.kind = std::string(to_string(cfg.kind));
  traj.optimal_arm = best;
  traj.n_states = pi0.size();
  traj.points.reserve(static_cast<std::size_t>(steps / cfg.record_stride + 2));

  auto record = [&](std::uint64_t step, const Simplex& pi) {
    TrajectoryPoint p;
    p.step = step;
    p.time = static_cast<double>(step) * cfg.delta;
    p.value = policy_value(pi, q);
    p.sampled_reward = p.value;
    p.mass_optimal = pi[best];
    p.argmax_optimal = pi.strict_argmax_is(best);
    p.state = pi.vector();
    traj.points.push_back(std::move(p));
  };

  Simplex pi = pi0;
  record(0, pi);
  for (std::uint64_t s = 1; s <= steps; ++s) {
    try {
      pi = cfg.kind == OdeKind::TRD ? trd_step(pi, q, cfg.delta) : mrd_step(pi, q, cfg.delta);
    } catch (const StepSizeError& e) {
      throw StepSizeError("step " + std::to_string(s) + ": " + e.what());
    } catch (const NumericError& e) {
      throw NumericError("step " + std::to_string(s) + ": " + e.what());
    }
    if (s % cfg.record_stride == 0 || s == steps) record(s, pi);
  }
  return traj;
}

}  // namespace swarmrl
