#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "swarmrl/env.hpp"
#include "swarmrl/trajectory.hpp"

namespace swarmrl {

inline constexpr std::string_view kAggregateHeader =
    "step,time,mean_value,var_value,mean_sampled_reward,frac_seeds_optimal,mean_mass_optimal,"
    "var_mass_optimal";

/// Shortest decimal that round-trips to the same double; independent of locale.
std::string format_number(double x);

std::string aggregate_csv(const AggregateSeries& series);
/// Columns: step,time,value,sampled_reward,mass_optimal,argmax_optimal, then p<a>
/// per arm (or count<a> for population runs), then `members` when dumped.
std::string trajectory_csv(const Trajectory& traj);
/// Columns: arm,latent_mean,q.
std::string q_table_csv(const BanditEnv& env, const QTable& q);

/// Parse text produced by aggregate_csv. Throws IoError on malformed input.
AggregateSeries parse_aggregate_csv(std::string_view text);

/// Write `text` to `path`, creating parent directories. IoError names the path.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

void write_csv(const AggregateSeries& series, const std::filesystem::path& path);
void write_csv(const Trajectory& traj, const std::filesystem::path& path);
AggregateSeries read_aggregate_csv(const std::filesystem::path& path);

}  // namespace swarmrl
