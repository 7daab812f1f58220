#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmrl/config.hpp"
#include "swarmrl/env.hpp"
#include "swarmrl/population.hpp"
#include "swarmrl/simplex.hpp"
#include "swarmrl/trajectory.hpp"

namespace swarmrl {

/// A validated experiment together with its environment and privileged q table.
struct PreparedExperiment {
  ExperimentConfig config;
  BanditEnv env;
  QTable q;
};

/// Builds the environment and estimates q with `config.q_samples` draws per arm.
PreparedExperiment prepare(const ExperimentConfig& config, unsigned jobs = 1);
/// Same, reusing an already estimated q table for this environment.
PreparedExperiment prepare(const ExperimentConfig& config, QTable q);

/// Seed of the run with index `seed_index`: derived from (seeds.base, seed_index)
/// only, so seeds can run in any order or in parallel.
std::uint64_t run_seed(const ExperimentConfig& config, std::size_t seed_index);

/// Starting simplex shared by every rule run under the same (seeds.base, index):
/// a flat-Dirichlet draw. RL learners and random-init references agree on it.
Simplex initial_policy(const ExperimentConfig& config, std::size_t n_arms, std::size_t seed_index);

struct RunOptions {
  /// Population runs: keep the full member list at every recorded step.
  bool dump_members = false;
  /// Population runs: start here instead of the equal-share population.
  std::optional<Population> initial_population;
};

/// CL / MCL / BCL / BMCL from a random initial policy for `runs` steps.
Trajectory run_rl(const PreparedExperiment& exp, std::size_t seed_index);
/// VR / WVR from the equal-share population for `runs` synchronous steps.
Trajectory run_population(const PreparedExperiment& exp, std::size_t seed_index,
                          const RunOptions& options = {});
/// TRD / MRD Euler integration with delta = alpha (or 1) and t_f = delta * runs.
Trajectory run_reference(const PreparedExperiment& exp, std::size_t seed_index = 0);
/// Dispatches on the rule.
Trajectory run_single(const PreparedExperiment& exp, std::size_t seed_index,
                      const RunOptions& options = {});

struct CellStatus {
  std::size_t seed_index = 0;
  bool ok = false;
  std::string error;
  std::size_t degenerate_steps = 0;
};

struct ExperimentResult {
  AggregateSeries series;
  std::vector<CellStatus> cells;

  bool ok() const;
};

/// Runs every seed of one experiment on `jobs` threads and aggregates the
/// successful ones. Failed seeds are recorded, not thrown.
ExperimentResult run_experiment(const PreparedExperiment& exp, unsigned jobs = 1);

/// Number of worker threads to use for `requested` (0 = hardware concurrency).
unsigned resolve_jobs(unsigned requested);

}  // namespace swarmrl
