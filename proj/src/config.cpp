#include "swarmrl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "config_json.hpp"
#include "swarmrl/errors.hpp"

namespace swarmrl {
namespace {

using detail::Json;

std::string squash(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

std::uint64_t as_count(const Json& v, std::string_view key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto x = v.get<std::int64_t>();
    if (x >= 0) return static_cast<std::uint64_t>(x);
  }
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x >= 0.0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
  }
  throw ConfigError("'" + std::string(key) + "' must be a non-negative integer");
}

double as_real(const Json& v, std::string_view key) {
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' must be a number");
  return v.get<double>();
}

std::string as_text(const Json& v, std::string_view key) {
  if (!v.is_string()) throw ConfigError("'" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

EnvDescriptor env_from_json(const Json& j) {
  reject_unknown(j, {"family", "n_arms", "variance", "seed"}, "env");
  EnvDescriptor env;
  if (!j.contains("family")) throw ConfigError("env.family is required");
  env.family = parse_env_family(as_text(j.at("family"), "env.family"));
  if (j.contains("n_arms")) env.n_arms = as_count(j.at("n_arms"), "env.n_arms");
  if (j.contains("variance")) env.variance = as_real(j.at("variance"), "env.variance");
  if (j.contains("seed")) env.seed = as_count(j.at("seed"), "env.seed");
  return env;
}

Revision parse_revision(std::string_view text) {
  const std::string key = squash(text);
  if (key == "synchronous") return Revision::Synchronous;
  if (key == "sequential") return Revision::Sequential;
  throw ConfigError("revision must be 'synchronous' or 'sequential'");
}

InitKind parse_init(std::string_view text) {
  const std::string key = squash(text);
  if (key == "random") return InitKind::Random;
  if (key == "uniform") return InitKind::Uniform;
  throw ConfigError("init must be 'random' or 'uniform'");
}

bool is_safe_name(const std::string& name) {
  return !name.empty() && name.front() != '.' &&
         std::all_of(name.begin(), name.end(), [](char c) {
           return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
         });
}

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::CL: return "CL";
    case Rule::MCL: return "MCL";
    case Rule::BCL: return "BCL";
    case Rule::BMCL: return "BMCL";
    case Rule::VR: return "VR";
    case Rule::WVR: return "WVR";
    case Rule::TRD: return "TRD";
    case Rule::MRD: return "MRD";
  }
  return "?";
}

Rule parse_rule(std::string_view text) {
  const std::string key = squash(text);
  for (Rule r : {Rule::CL, Rule::MCL, Rule::BCL, Rule::BMCL, Rule::VR, Rule::WVR, Rule::TRD,
                 Rule::MRD}) {
    if (key == lower(to_string(r))) return r;
  }
  throw ConfigError("unknown rule '" + std::string(text) +
                    "' (expected CL, MCL, BCL, BMCL, VR, WVR, TRD or MRD)");
}

bool is_rl_rule(Rule rule) {
  return rule == Rule::CL || rule == Rule::MCL || is_batched_rule(rule);
}
bool is_batched_rule(Rule rule) { return rule == Rule::BCL || rule == Rule::BMCL; }
bool is_population_rule(Rule rule) { return rule == Rule::VR || rule == Rule::WVR; }
bool is_reference_rule(Rule rule) { return rule == Rule::TRD || rule == Rule::MRD; }

void validate(const ExperimentConfig& cfg) {
  const std::string where = "experiment '" + cfg.name + "' (" + std::string(to_string(cfg.rule)) + ")";
  auto fail = [&](const std::string& msg) { throw ConfigError(where + ": " + msg); };
  auto forbid = [&](bool set, const char* field) {
    if (set) fail(std::string("field '") + field + "' does not apply to this rule");
  };
  const Rule r = cfg.rule;

  if (!cfg.name.empty() && !is_safe_name(cfg.name)) {
    fail("name may only contain letters, digits, '-', '_' and '.'");
  }
  if (cfg.env.n_arms < 2) fail("env.n_arms must be at least 2");
  if (!(cfg.env.variance >= 0.0) || !std::isfinite(cfg.env.variance)) {
    fail("env.variance must be finite and non-negative");
  }
  if (cfg.seeds.count < 1) fail("seeds.count must be at least 1");
  if (cfg.q_samples < 1) fail("q_samples must be at least 1");
  if (cfg.record_stride && *cfg.record_stride < 1) fail("record_stride must be at least 1");

  const bool wants_alpha = r == Rule::CL || r == Rule::MCL || is_reference_rule(r);
  forbid(cfg.alpha.has_value() && !wants_alpha, "alpha");
  forbid(cfg.gamma.has_value() && r != Rule::MCL, "gamma");
  forbid(cfg.batch_size.has_value() && !is_batched_rule(r), "batch_size");
  forbid(cfg.pop_size.has_value() && !is_population_rule(r), "pop_size");
  forbid(cfg.revision.has_value() && r != Rule::VR, "revision");
  forbid(cfg.init.has_value() && !is_reference_rule(r), "init");

  if (r == Rule::CL || r == Rule::MCL) {
    if (!cfg.alpha) fail("alpha is required");
  }
  if (cfg.alpha && !(*cfg.alpha > 0.0 && *cfg.alpha <= 1.0)) fail("alpha must lie in (0, 1]");
  if (r == Rule::MCL) {
    if (!cfg.gamma) fail("gamma is required");
    if (!(*cfg.gamma > 0.0 && *cfg.gamma <= 1.0)) fail("gamma must lie in (0, 1]");
  }
  if (is_batched_rule(r)) {
    if (!cfg.batch_size) fail("batch_size is required");
    if (*cfg.batch_size < 1) fail("batch_size must be at least 1");
  }
  if (is_population_rule(r)) {
    if (!cfg.pop_size) fail("pop_size is required");
    if (*cfg.pop_size < 2 || *cfg.pop_size < cfg.env.n_arms) {
      fail("pop_size must be at least 2 and at least env.n_arms");
    }
  }
  if (is_reference_rule(r) && cfg.runs < 1) fail("runs must be at least 1 for a reference");
}

std::uint64_t effective_record_stride(const ExperimentConfig& cfg) {
  if (cfg.record_stride) return *cfg.record_stride;
  return std::max<std::uint64_t>(1, cfg.runs / 1000);
}

double step_duration(const ExperimentConfig& cfg) {
  if (cfg.alpha && (cfg.rule == Rule::CL || cfg.rule == Rule::MCL || is_reference_rule(cfg.rule))) {
    return *cfg.alpha;
  }
  return 1.0;
}

namespace detail {

ExperimentConfig experiment_from_json(const Json& j, std::size_t index) {
  reject_unknown(j,
                 {"name", "rule", "env", "alpha", "gamma", "batch_size", "pop_size", "revision",
                  "init", "runs", "seeds", "q_samples", "record_stride"},
                 "experiment " + std::to_string(index));
  ExperimentConfig cfg;
  if (!j.contains("rule")) throw ConfigError("experiment " + std::to_string(index) + ": 'rule' is required");
  if (!j.contains("env")) throw ConfigError("experiment " + std::to_string(index) + ": 'env' is required");
  if (!j.contains("runs")) throw ConfigError("experiment " + std::to_string(index) + ": 'runs' is required");
  cfg.rule = parse_rule(as_text(j.at("rule"), "rule"));
  cfg.env = env_from_json(j.at("env"));
  cfg.runs = as_count(j.at("runs"), "runs");
  if (j.contains("name")) {
    cfg.name = as_text(j.at("name"), "name");
  } else {
    cfg.name = std::to_string(index) + "-" + lower(to_string(cfg.rule)) + "-" +
               std::string(to_string(cfg.env.family));
  }
  if (j.contains("alpha")) cfg.alpha = as_real(j.at("alpha"), "alpha");
  if (j.contains("gamma")) cfg.gamma = as_real(j.at("gamma"), "gamma");
  if (j.contains("batch_size")) cfg.batch_size = as_count(j.at("batch_size"), "batch_size");
  if (j.contains("pop_size")) cfg.pop_size = as_count(j.at("pop_size"), "pop_size");
  if (j.contains("revision")) cfg.revision = parse_revision(as_text(j.at("revision"), "revision"));
  if (j.contains("init")) cfg.init = parse_init(as_text(j.at("init"), "init"));
  if (j.contains("seeds")) {
    const Json& s = j.at("seeds");
    reject_unknown(s, {"count", "base"}, "seeds");
    if (s.contains("count")) cfg.seeds.count = as_count(s.at("count"), "seeds.count");
    if (s.contains("base")) cfg.seeds.base = as_count(s.at("base"), "seeds.base");
  }
  if (j.contains("q_samples")) cfg.q_samples = as_count(j.at("q_samples"), "q_samples");
  if (j.contains("record_stride")) cfg.record_stride = as_count(j.at("record_stride"), "record_stride");
  validate(cfg);
  return cfg;
}

Json env_to_json(const EnvDescriptor& env) {
  Json j;
  j["family"] = std::string(to_string(env.family));
  j["n_arms"] = env.n_arms;
  j["variance"] = env.variance;
  j["seed"] = env.seed;
  return j;
}

Json experiment_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["name"] = cfg.name;
  j["rule"] = std::string(to_string(cfg.rule));
  j["env"] = env_to_json(cfg.env);
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  if (cfg.gamma) j["gamma"] = *cfg.gamma;
  if (cfg.batch_size) j["batch_size"] = *cfg.batch_size;
  if (cfg.pop_size) j["pop_size"] = *cfg.pop_size;
  if (cfg.revision) j["revision"] = *cfg.revision == Revision::Sequential ? "sequential" : "synchronous";
  if (cfg.init) j["init"] = *cfg.init == InitKind::Uniform ? "uniform" : "random";
  j["runs"] = cfg.runs;
  j["seeds"] = Json{{"count", cfg.seeds.count}, {"base", cfg.seeds.base}};
  j["q_samples"] = cfg.q_samples;
  if (cfg.record_stride) j["record_stride"] = *cfg.record_stride;
  return j;
}

}  // namespace detail

ExperimentConfig parse_experiment(std::string_view json_text) {
  return detail::experiment_from_json(parse_text(json_text), 0);
}

SuiteConfig parse_suite(std::string_view json_text) {
  const Json j = parse_text(json_text);
  reject_unknown(j, {"experiments"}, "suite");
  SuiteConfig suite;
  if (!j.contains("experiments")) return suite;
  const Json& list = j.at("experiments");
  if (!list.is_array()) throw ConfigError("'experiments' must be an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    ExperimentConfig cfg = detail::experiment_from_json(list[i], i);
    if (!names.insert(cfg.name).second) {
      throw ConfigError("duplicate experiment name '" + cfg.name + "'");
    }
    suite.experiments.push_back(std::move(cfg));
  }
  return suite;
}

SuiteConfig load_suite(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_suite(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string to_json_text(const ExperimentConfig& cfg) {
  return detail::experiment_to_json(cfg).dump(2) + "\n";
}

std::string to_json_text(const SuiteConfig& suite) {
  Json j;
  j["experiments"] = Json::array();
  for (const auto& cfg : suite.experiments) j["experiments"].push_back(detail::experiment_to_json(cfg));
  return j.dump(2) + "\n";
}

}  // namespace swarmrl
