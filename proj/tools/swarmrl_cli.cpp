// swarmrl: run bandit learners, voter populations and replicator references.
//
//   swarmrl suite --config figure-1 --out results/
//   swarmrl rl --rule mcl --alpha 0.1 --runs 1000 --env near-zero --seed 3
//   swarmrl population --rule wvr --pop-size 1000 --runs 100
//   swarmrl ode --rule trd --alpha 0.001 --runs 100000
//   swarmrl estimate-q --env spread --seed 7 --samples 1000000
//   swarmrl presets --dump figure-3 --out fig3.json

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "swarmrl/config.hpp"
#include "swarmrl/csv.hpp"
#include "swarmrl/errors.hpp"
#include "swarmrl/harness.hpp"
#include "swarmrl/presets.hpp"
#include "swarmrl/suite.hpp"

namespace {

using namespace swarmrl;

// Flags shared by the single-run subcommands. Unset flags leave the file/default value.
struct RunFlags {
  std::string config;
  std::string rule;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> pop_size;
  std::string revision;
  std::string init;
  std::optional<std::uint64_t> runs;
  std::string env;
  std::optional<std::size_t> n_arms;
  std::optional<double> variance;
  std::optional<std::uint64_t> env_seed;
  std::optional<std::uint64_t> seed;
  std::size_t seed_index = 0;
  std::optional<std::size_t> q_samples;
  std::optional<std::uint64_t> record_stride;
  std::string out;
  std::string format = "csv";
  unsigned jobs = 0;
  bool dump_members = false;
};

void add_env_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--env", f.env, "Environment family: near-zero, spread, near-one");
  cmd->add_option("--n-arms", f.n_arms, "Number of arms/types");
  cmd->add_option("--variance", f.variance, "Variance of the latent Gaussian");
  cmd->add_option("--env-seed", f.env_seed, "Environment seed (defaults to --seed)");
}

void add_common_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "JSON file holding one experiment; flags override it");
  cmd->add_option("--runs", f.runs, "Number of update steps (R)");
  add_env_flags(cmd, f);
  cmd->add_option("--seed", f.seed, "Base seed; all randomness derives from it");
  cmd->add_option("--seed-index", f.seed_index, "Which derived seed stream to run");
  cmd->add_option("--q-samples", f.q_samples, "Samples per arm for the privileged q estimate");
  cmd->add_option("--record-stride", f.record_stride, "Record every k-th step");
  cmd->add_option("--out", f.out, "Trajectory CSV path (default: stdout)");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv"}));
  cmd->add_option("--jobs", f.jobs, "Threads for q estimation (0 = all cores)");
}

ExperimentConfig build_config(const RunFlags& f, std::string_view default_rule) {
  ExperimentConfig cfg;
  bool from_file = false;
  if (!f.config.empty()) {
    std::string text;
    try {
      text = read_text(f.config);
    } catch (const IoError& e) {
      throw ConfigError(e.what());
    }
    cfg = parse_experiment(text);
    from_file = true;
  } else {
    cfg.rule = parse_rule(default_rule);
    cfg.name = "run";
  }
  if (!f.rule.empty()) cfg.rule = parse_rule(f.rule);
  if (f.alpha) cfg.alpha = f.alpha;
  if (f.gamma) cfg.gamma = f.gamma;
  if (cfg.rule == Rule::MCL && !cfg.gamma) cfg.gamma = 0.01;
  if (f.batch_size) cfg.batch_size = f.batch_size;
  if (f.pop_size) cfg.pop_size = f.pop_size;
  if (!f.revision.empty()) {
    cfg.revision = f.revision == "sequential" ? Revision::Sequential : Revision::Synchronous;
  }
  if (!f.init.empty()) cfg.init = f.init == "uniform" ? InitKind::Uniform : InitKind::Random;
  if (f.runs) cfg.runs = *f.runs;
  else if (!from_file) throw ConfigError("--runs is required");
  if (!f.env.empty()) cfg.env.family = parse_env_family(f.env);
  if (f.n_arms) cfg.env.n_arms = *f.n_arms;
  if (f.variance) cfg.env.variance = *f.variance;
  if (f.seed) {
    cfg.seeds.base = *f.seed;
    cfg.env.seed = *f.seed;
  }
  if (f.env_seed) cfg.env.seed = *f.env_seed;
  cfg.seeds.count = std::max<std::size_t>(cfg.seeds.count, f.seed_index + 1);
  if (f.q_samples) cfg.q_samples = *f.q_samples;
  if (f.record_stride) cfg.record_stride = f.record_stride;
  validate(cfg);
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

int run_single_command(const RunFlags& f, std::string_view default_rule, bool (*accepts)(Rule)) {
  const ExperimentConfig cfg = build_config(f, default_rule);
  if (!accepts(cfg.rule)) {
    throw ConfigError("rule " + std::string(to_string(cfg.rule)) + " is not valid for this subcommand");
  }
  const PreparedExperiment exp = prepare(cfg, resolve_jobs(f.jobs));
  RunOptions options;
  options.dump_members = f.dump_members;
  const Trajectory traj = run_single(exp, f.seed_index, options);
  emit(trajectory_csv(traj), f.out);
  if (traj.degenerate_steps > 0) {
    std::cerr << "note: " << traj.degenerate_steps << " degenerate step(s) left the state unchanged\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit learners, voter populations and replicator dynamics"};
  app.require_subcommand(1);

  // suite
  std::string suite_config;
  std::string suite_out = "results";
  unsigned suite_jobs = 0;
  std::optional<std::uint64_t> suite_seed;
  std::optional<std::size_t> suite_seeds;
  std::optional<std::size_t> suite_q_samples;
  std::optional<std::uint64_t> suite_env_seed;
  std::string suite_format = "csv";
  auto* suite = app.add_subcommand("suite", "Run a preset or config file of experiments");
  suite->add_option("--config", suite_config, "Preset name or JSON suite file")->required();
  suite->add_option("--out", suite_out, "Output directory for CSVs and manifest.json");
  suite->add_option("--jobs", suite_jobs, "Parallel (experiment, seed) cells (0 = all cores)");
  suite->add_option("--seed", suite_seed, "Override seeds.base of every experiment");
  suite->add_option("--seeds", suite_seeds, "Override seeds.count of every experiment");
  suite->add_option("--env-seed", suite_env_seed, "Override env.seed of every experiment");
  suite->add_option("--q-samples", suite_q_samples, "Override q_samples of every experiment");
  suite->add_option("--format", suite_format, "Output format")->check(CLI::IsMember({"csv"}));

  RunFlags rl_flags;
  auto* rl = app.add_subcommand("rl", "Run one CL/MCL/BCL/BMCL learner and print its trajectory");
  rl->add_option("--rule", rl_flags.rule, "cl, mcl, bcl or bmcl");
  rl->add_option("--alpha", rl_flags.alpha, "Learning rate (CL, MCL)");
  rl->add_option("--gamma", rl_flags.gamma, "Reward moving-average weight (MCL, default 0.01)");
  rl->add_option("--batch-size", rl_flags.batch_size, "Batch size (BCL, BMCL)");
  add_common_run_flags(rl, rl_flags);

  RunFlags pop_flags;
  auto* population = app.add_subcommand("population", "Run one VR/WVR population");
  population->add_option("--rule", pop_flags.rule, "vr or wvr");
  population->add_option("--pop-size", pop_flags.pop_size, "Population size N");
  population->add_option("--revision", pop_flags.revision, "VR schedule")
      ->check(CLI::IsMember({"synchronous", "sequential"}));
  population->add_flag("--dump-members", pop_flags.dump_members,
                       "Add the full member list to every row");
  add_common_run_flags(population, pop_flags);

  RunFlags ode_flags;
  auto* ode = app.add_subcommand("ode", "Integrate the TRD or MRD with the privileged q table");
  ode->add_option("--rule", ode_flags.rule, "trd or mrd");
  ode->add_option("--alpha", ode_flags.alpha, "Euler step delta (default 1)");
  ode->add_option("--init", ode_flags.init, "Initial state")
      ->check(CLI::IsMember({"random", "uniform"}));
  add_common_run_flags(ode, ode_flags);

  RunFlags q_flags;
  std::size_t q_samples = 1'000'000;
  auto* estimate = app.add_subcommand("estimate-q", "Print the Monte Carlo q table of an environment");
  add_env_flags(estimate, q_flags);
  estimate->add_option("--seed", q_flags.seed, "Environment seed");
  estimate->add_option("--samples", q_samples, "Samples per arm");
  estimate->add_option("--jobs", q_flags.jobs, "Threads (0 = all cores)");
  estimate->add_option("--out", q_flags.out, "CSV path (default: stdout)");

  std::string dump_name;
  std::string dump_out;
  auto* presets = app.add_subcommand("presets", "List built-in experiment sets or dump one as JSON");
  presets->add_option("--dump", dump_name, "Preset to print as an editable suite file");
  presets->add_option("--out", dump_out, "Write the dump here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kExitConfigInvalid;
  }

  try {
    if (*suite) {
      SuiteConfig cfg =
          is_preset(suite_config) ? make_preset(suite_config) : load_suite(suite_config);
      for (auto& exp : cfg.experiments) {
        if (suite_seed) exp.seeds.base = *suite_seed;
        if (suite_seeds) exp.seeds.count = *suite_seeds;
        if (suite_env_seed) exp.env.seed = *suite_env_seed;
        if (suite_q_samples) exp.q_samples = *suite_q_samples;
        validate(exp);
      }
      const SuiteReport report = run_suite(cfg, suite_out, SuiteOptions{suite_jobs});
      for (const auto& e : report.experiments) {
        std::cerr << (e.ok() ? "ok     " : "FAILED ") << e.name;
        if (!e.error.empty()) std::cerr << ": " << e.error;
        for (const auto& c : e.cells) {
          if (!c.ok) std::cerr << "\n  seed " << c.seed_index << ": " << c.error;
        }
        std::cerr << "\n";
      }
      std::cerr << "manifest: " << report.manifest.string() << "\n";
      return report.exit_code();
    }
    if (*rl) return run_single_command(rl_flags, "CL", is_rl_rule);
    if (*population) return run_single_command(pop_flags, "VR", is_population_rule);
    if (*ode) return run_single_command(ode_flags, "TRD", is_reference_rule);
    if (*estimate) {
      EnvDescriptor desc;
      if (!q_flags.env.empty()) desc.family = parse_env_family(q_flags.env);
      if (q_flags.n_arms) desc.n_arms = *q_flags.n_arms;
      if (q_flags.variance) desc.variance = *q_flags.variance;
      if (q_flags.seed) desc.seed = *q_flags.seed;
      if (q_flags.env_seed) desc.seed = *q_flags.env_seed;
      const BanditEnv env = make_env(desc);
      const QTable q = estimate_q(env, q_samples, resolve_jobs(q_flags.jobs));
      emit(q_table_csv(env, q), q_flags.out);
      return kExitOk;
    }
    if (*presets) {
      if (dump_name.empty()) {
        for (const auto& name : preset_names()) {
          std::cout << name << "\t" << preset_summary(name) << "\n";
        }
        return kExitOk;
      }
      emit(to_json_text(make_preset(dump_name)), dump_out);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCellFailed;
  }
  return kExitConfigInvalid;
}
