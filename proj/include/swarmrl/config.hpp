#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swarmrl/env.hpp"

namespace swarmrl {

enum class Rule { CL, MCL, BCL, BMCL, VR, WVR, TRD, MRD };

std::string_view to_string(Rule rule);
/// Case-insensitive; accepts "b-cl" style spellings too.
Rule parse_rule(std::string_view text);

bool is_rl_rule(Rule rule);          // CL, MCL, BCL, BMCL
bool is_batched_rule(Rule rule);     // BCL, BMCL
bool is_population_rule(Rule rule);  // VR, WVR
bool is_reference_rule(Rule rule);   // TRD, MRD

/// VR revision schedule. Sequential revision is exploratory only.
enum class Revision { Synchronous, Sequential };
/// Initial state of a reference integration: a seeded flat-Dirichlet draw (matching
/// the RL learners of the same seed) or the uniform simplex (matching populations).
enum class InitKind { Random, Uniform };

struct SeedSpec {
  std::size_t count = 1;
  std::uint64_t base = 0;

  bool operator==(const SeedSpec&) const = default;
};

/// One experiment family. Only the fields relevant to `rule` may be set:
///
///   CL     alpha
///   MCL    alpha, gamma
///   BCL    batch_size
///   BMCL   batch_size
///   VR     pop_size, revision (optional)
///   WVR    pop_size
///   TRD    alpha (optional; the Euler step, default 1), init (optional)
///   MRD    alpha (optional), init (optional)
///
/// `runs` is the number of update steps per seed. For references the horizon is
/// delta * runs.
struct ExperimentConfig {
  std::string name;
  Rule rule = Rule::CL;
  EnvDescriptor env;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> pop_size;
  std::optional<Revision> revision;
  std::optional<InitKind> init;
  std::uint64_t runs = 0;
  SeedSpec seeds;
  std::size_t q_samples = kDefaultQSamples;
  std::optional<std::uint64_t> record_stride;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigError describing the first problem found.
void validate(const ExperimentConfig& cfg);

/// Explicit stride, or max(1, runs / 1000) so long runs keep about 1001 points.
std::uint64_t effective_record_stride(const ExperimentConfig& cfg);
/// Time advanced by one update: alpha for CL/MCL and alpha-stepped references, else 1.
double step_duration(const ExperimentConfig& cfg);

struct SuiteConfig {
  std::vector<ExperimentConfig> experiments;

  bool operator==(const SuiteConfig&) const = default;
};

/// Parse a JSON experiment object / suite document. Unknown keys, missing
/// required keys and fields irrelevant to the rule are ConfigErrors. Experiments
/// without a name get "<index>-<rule>-<family>".
ExperimentConfig parse_experiment(std::string_view json_text);
SuiteConfig parse_suite(std::string_view json_text);
SuiteConfig load_suite(const std::string& path);

/// Canonical JSON text (2-space indent, fixed key order, trailing newline).
std::string to_json_text(const ExperimentConfig& cfg);
std::string to_json_text(const SuiteConfig& suite);

}  // namespace swarmrl
