#include "swarmrl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include "swarmrl/errors.hpp"
#include "swarmrl/policy.hpp"
#include "swarmrl/population.hpp"
#include "swarmrl/replicator.hpp"

namespace swarmrl {
namespace {

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kDynamicsStream = 1;

void require(bool ok, const ExperimentConfig& cfg, const char* what) {
  if (!ok) {
    throw ConfigError("experiment '" + cfg.name + "' has rule " + std::string(to_string(cfg.rule)) +
                      ", which is not " + what);
  }
}

TrajectoryPoint policy_point(std::uint64_t step, double time, const Simplex& pi,
                             const PreparedExperiment& exp, double sampled_reward) {
  const std::size_t best = exp.env.optimal_arm();
  TrajectoryPoint p;
  p.step = step;
  p.time = time;
  p.value = policy_value(pi, exp.q);
  p.sampled_reward = sampled_reward;
  p.mass_optimal = pi[best];
  p.argmax_optimal = pi.strict_argmax_is(best);
  p.state = pi.vector();
  return p;
}

// Mean of the rewards seen since the last record; the expected value when none were.
struct RewardWindow {
  double sum = 0.0;
  std::size_t count = 0;

  double take(double fallback) {
    const double mean = count ? sum / static_cast<double>(count) : fallback;
    sum = 0.0;
    count = 0;
    return mean;
  }
};

}  // namespace

PreparedExperiment prepare(const ExperimentConfig& config, unsigned jobs) {
  validate(config);
  BanditEnv env = make_env(config.env);
  QTable q = estimate_q(env, config.q_samples, jobs);
  return PreparedExperiment{config, std::move(env), std::move(q)};
}

PreparedExperiment prepare(const ExperimentConfig& config, QTable q) {
  validate(config);
  BanditEnv env = make_env(config.env);
  if (q.size() != env.n_arms()) throw ContractError("q table does not match the environment");
  return PreparedExperiment{config, std::move(env), std::move(q)};
}

std::uint64_t run_seed(const ExperimentConfig& config, std::size_t seed_index) {
  return derive_seed(config.seeds.base, seed_index);
}

Simplex initial_policy(const ExperimentConfig& config, std::size_t n_arms, std::size_t seed_index) {
  RngStream rng(derive_seed(run_seed(config, seed_index), kInitStream));
  return Simplex::random(n_arms, rng);
}

Trajectory run_rl(const PreparedExperiment& exp, std::size_t seed_index) {
  const ExperimentConfig& cfg = exp.config;
  require(is_rl_rule(cfg.rule), cfg, "an RL rule");
  const std::size_t n = exp.env.n_arms();
  const std::uint64_t stride = effective_record_stride(cfg);
  const double dt = step_duration(cfg);
  RngStream rng(derive_seed(run_seed(cfg, seed_index), kDynamicsStream));

  Trajectory traj;
  traj.kind = std::string(to_string(cfg.rule));
  traj.optimal_arm = exp.env.optimal_arm();
  traj.n_states = n;
  traj.points.reserve(static_cast<std::size_t>(cfg.runs / stride + 2));

  Simplex pi = initial_policy(cfg, n, seed_index);
  traj.points.push_back(policy_point(0, 0.0, pi, exp, policy_value(pi, exp.q)));

  std::optional<RewardBaseline> baseline;
  if (cfg.rule == Rule::MCL) baseline.emplace(*cfg.gamma);
  std::vector<Sample> batch(cfg.batch_size.value_or(0));
  RewardWindow window;

  for (std::uint64_t step = 1; step <= cfg.runs; ++step) {
    switch (cfg.rule) {
      case Rule::CL:
      case Rule::MCL: {
        const std::size_t k = sample_action(pi, rng);
        const double r = sample_reward(exp.env, k, rng);
        pi = cfg.rule == Rule::CL ? cl_update(pi, k, r, *cfg.alpha)
                                  : mcl_update(pi, k, r, *baseline, *cfg.alpha);
        window.sum += r;
        ++window.count;
        break;
      }
      case Rule::BCL:
      case Rule::BMCL: {
        for (Sample& s : batch) {
          s.arm = sample_action(pi, rng);
          s.reward = sample_reward(exp.env, s.arm, rng);
          window.sum += s.reward;
          ++window.count;
        }
        if (cfg.rule == Rule::BCL) {
          pi = bcl_update(pi, batch);
        } else {
          try {
            pi = bmcl_update(pi, batch);
          } catch (const DegenerateBatchError&) {
            ++traj.degenerate_steps;
          }
        }
        break;
      }
      default:
        break;
    }
    if (step % stride == 0 || step == cfg.runs) {
      const double t = static_cast<double>(step) * dt;
      traj.points.push_back(policy_point(step, t, pi, exp, window.take(policy_value(pi, exp.q))));
    }
  }
  return traj;
}

Trajectory run_population(const PreparedExperiment& exp, std::size_t seed_index,
                          const RunOptions& options) {
  const ExperimentConfig& cfg = exp.config;
  require(is_population_rule(cfg.rule), cfg, "a population rule");
  const std::size_t n = exp.env.n_arms();
  const std::size_t best = exp.env.optimal_arm();
  const std::uint64_t stride = effective_record_stride(cfg);
  RngStream rng(derive_seed(run_seed(cfg, seed_index), kDynamicsStream));

  Trajectory traj;
  traj.kind = std::string(to_string(cfg.rule));
  traj.optimal_arm = best;
  traj.n_states = n;
  traj.state_is_counts = true;
  traj.points.reserve(static_cast<std::size_t>(cfg.runs / stride + 2));

  auto record = [&](std::uint64_t step, const Population& pop, double sampled) {
    const Simplex pi = population_vector(pop);
    TrajectoryPoint p;
    p.step = step;
    p.time = static_cast<double>(step);
    p.value = policy_value(pi, exp.q);
    p.sampled_reward = sampled < 0.0 ? p.value : sampled;
    p.mass_optimal = pi[best];
    p.argmax_optimal = pi.strict_argmax_is(best);
    const auto counts = pop.counts();
    p.state.assign(counts.begin(), counts.end());
    if (options.dump_members) p.members.assign(pop.members().begin(), pop.members().end());
    traj.points.push_back(std::move(p));
  };

  Population pop = options.initial_population ? *options.initial_population
                                               : init_population(*cfg.pop_size, n);
  if (pop.size() != *cfg.pop_size || pop.n_types() != n) {
    throw ContractError("initial population does not match pop_size / n_arms");
  }
  record(0, pop, -1.0);
  StepDiagnostics diag;
  double last_sum = 0.0;
  std::size_t last_count = 0;
  const bool sequential = cfg.revision == Revision::Sequential;
  for (std::uint64_t step = 1; step <= cfg.runs; ++step) {
    if (cfg.rule == Rule::VR) {
      pop = sequential ? vr_sequential_step(pop, exp.env, rng, &diag) : vr_step(pop, exp.env, rng, &diag);
    } else {
      pop = wvr_step(pop, exp.env, rng, &diag);
    }
    if (step % stride == 0 || step == cfg.runs) {
      const std::size_t count = diag.payoff_count - last_count;
      const double sampled =
          count ? (diag.payoff_sum - last_sum) / static_cast<double>(count) : -1.0;
      last_sum = diag.payoff_sum;
      last_count = diag.payoff_count;
      record(step, pop, sampled);
    }
  }
  traj.degenerate_steps = diag.degenerate_steps;
  return traj;
}

Trajectory run_reference(const PreparedExperiment& exp, std::size_t seed_index) {
  const ExperimentConfig& cfg = exp.config;
  require(is_reference_rule(cfg.rule), cfg, "a reference rule");
  OdeConfig ode;
  ode.kind = cfg.rule == Rule::TRD ? OdeKind::TRD : OdeKind::MRD;
  ode.delta = step_duration(cfg);
  ode.t_final = ode.delta * static_cast<double>(cfg.runs);
  ode.record_stride = effective_record_stride(cfg);
  const std::size_t n = exp.env.n_arms();
  const Simplex pi0 = cfg.init.value_or(InitKind::Random) == InitKind::Uniform
                          ? Simplex::uniform(n)
                          : initial_policy(cfg, n, seed_index);
  Trajectory traj = integrate(ode, pi0, exp.q.q);
  // The environment's optimal arm is argmax q as well; keep the env's choice.
  traj.optimal_arm = exp.env.optimal_arm();
  return traj;
}

Trajectory run_single(const PreparedExperiment& exp, std::size_t seed_index,
                      const RunOptions& options) {
  const Rule r = exp.config.rule;
  if (is_rl_rule(r)) return run_rl(exp, seed_index);
  if (is_population_rule(r)) return run_population(exp, seed_index, options);
  return run_reference(exp, seed_index);
}

bool ExperimentResult::ok() const {
  for (const auto& c : cells) {
    if (!c.ok) return false;
  }
  return !cells.empty();
}

unsigned resolve_jobs(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const PreparedExperiment& exp, unsigned jobs) {
  const std::size_t count = exp.config.seeds.count;
  std::vector<std::optional<Trajectory>> runs(count);
  ExperimentResult result;
  result.cells.resize(count);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      CellStatus& cell = result.cells[i];
      cell.seed_index = i;
      try {
        runs[i] = run_single(exp, i);
        cell.ok = true;
        cell.degenerate_steps = runs[i]->degenerate_steps;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    }
  };
  const unsigned workers = std::min<unsigned>(resolve_jobs(jobs), static_cast<unsigned>(count));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<Trajectory> good;
  for (auto& r : runs) {
    if (r) good.push_back(std::move(*r));
  }
  if (!good.empty()) result.series = aggregate(good);
  return result;
}

}  // namespace swarmrl
