#include "swarmrl/presets.hpp"

#include <array>

#include "swarmrl/errors.hpp"

namespace swarmrl {
namespace {

// Shared hyperparameters of every published experiment.
constexpr std::size_t kArms = 10;
constexpr double kVariance = 1.0;
constexpr std::size_t kSeeds = 100;
constexpr std::uint64_t kEnvSeed = 1;
constexpr double kGamma = 0.01;
constexpr std::uint64_t kShortRuns = 100;

constexpr std::array<EnvFamily, 3> kAllFamilies{EnvFamily::NearZero, EnvFamily::Spread,
                                                EnvFamily::NearOne};
constexpr std::array<EnvFamily, 2> kOtherFamilies{EnvFamily::NearZero, EnvFamily::NearOne};

struct PresetInfo {
  std::string_view name;
  std::string_view summary;
};

constexpr std::array<PresetInfo, 6> kPresets{{
    {"figure-1", "non-batched CL/MCL, alpha=0.001, R=1e6, all envs, with TRD/MRD references"},
    {"figure-2", "non-batched CL/MCL, alpha=0.1, R=1e3, all envs, with TRD/MRD references"},
    {"figure-3", "VR/WVR populations of 10 and 1000, spread env, with TRD/MRD references"},
    {"figure-4", "B-CL/B-MCL with batch 10 and 1000, spread env, with TRD/MRD references"},
    {"appendix-A1", "B-CL/B-MCL with batch 1000, near-zero and near-one envs"},
    {"appendix-A2", "VR/WVR populations of 1000, near-zero and near-one envs"},
}};

std::string_view strip_prefix(std::string_view name) {
  constexpr std::string_view prefix = "paper-";
  if (name.substr(0, prefix.size()) == prefix) name.remove_prefix(prefix.size());
  return name;
}

ExperimentConfig base(std::string name, Rule rule, EnvFamily family, std::uint64_t runs) {
  ExperimentConfig cfg;
  cfg.name = std::move(name);
  cfg.rule = rule;
  cfg.env = EnvDescriptor{family, kArms, kVariance, kEnvSeed};
  cfg.runs = runs;
  cfg.seeds = SeedSpec{kSeeds, 0};
  cfg.q_samples = kDefaultQSamples;
  return cfg;
}

std::string tag(std::string_view prefix, EnvFamily family, std::string_view what) {
  return std::string(prefix) + "-" + std::string(to_string(family)) + "-" + std::string(what);
}

void add_non_batched(SuiteConfig& suite, std::string_view prefix, double alpha,
                     std::uint64_t runs) {
  for (EnvFamily f : kAllFamilies) {
    auto cl = base(tag(prefix, f, "cl"), Rule::CL, f, runs);
    cl.alpha = alpha;
    auto mcl = base(tag(prefix, f, "mcl"), Rule::MCL, f, runs);
    mcl.alpha = alpha;
    mcl.gamma = kGamma;
    auto trd = base(tag(prefix, f, "trd"), Rule::TRD, f, runs);
    trd.alpha = alpha;
    auto mrd = base(tag(prefix, f, "mrd"), Rule::MRD, f, runs);
    mrd.alpha = alpha;
    for (auto* c : {&cl, &mcl, &trd, &mrd}) suite.experiments.push_back(std::move(*c));
  }
}

void add_references(SuiteConfig& suite, std::string_view prefix, EnvFamily f, InitKind init) {
  auto trd = base(tag(prefix, f, "trd"), Rule::TRD, f, kShortRuns);
  trd.init = init;
  auto mrd = base(tag(prefix, f, "mrd"), Rule::MRD, f, kShortRuns);
  mrd.init = init;
  suite.experiments.push_back(std::move(trd));
  suite.experiments.push_back(std::move(mrd));
}

void add_batched(SuiteConfig& suite, std::string_view prefix, EnvFamily f,
                 std::initializer_list<std::size_t> sizes) {
  for (Rule r : {Rule::BCL, Rule::BMCL}) {
    for (std::size_t b : sizes) {
      const std::string what = (r == Rule::BCL ? "bcl-b" : "bmcl-b") + std::to_string(b);
      auto cfg = base(tag(prefix, f, what), r, f, kShortRuns);
      cfg.batch_size = b;
      suite.experiments.push_back(std::move(cfg));
    }
  }
  add_references(suite, prefix, f, InitKind::Random);
}

void add_population(SuiteConfig& suite, std::string_view prefix, EnvFamily f,
                    std::initializer_list<std::size_t> sizes) {
  for (Rule r : {Rule::VR, Rule::WVR}) {
    for (std::size_t n : sizes) {
      const std::string what = (r == Rule::VR ? "vr-n" : "wvr-n") + std::to_string(n);
      auto cfg = base(tag(prefix, f, what), r, f, kShortRuns);
      cfg.pop_size = n;
      suite.experiments.push_back(std::move(cfg));
    }
  }
  add_references(suite, prefix, f, InitKind::Uniform);
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

std::string preset_summary(std::string_view name) {
  const std::string_view key = strip_prefix(name);
  for (const auto& p : kPresets) {
    if (p.name == key) return std::string(p.summary);
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

bool is_preset(std::string_view name) {
  const std::string_view key = strip_prefix(name);
  for (const auto& p : kPresets) {
    if (p.name == key) return true;
  }
  return false;
}

SuiteConfig make_preset(std::string_view name) {
  const std::string_view key = strip_prefix(name);
  SuiteConfig suite;
  if (key == "figure-1") {
    add_non_batched(suite, "fig1", 0.001, 1'000'000);
  } else if (key == "figure-2") {
    add_non_batched(suite, "fig2", 0.1, 1'000);
  } else if (key == "figure-3") {
    add_population(suite, "fig3", EnvFamily::Spread, {10, 1000});
  } else if (key == "figure-4") {
    add_batched(suite, "fig4", EnvFamily::Spread, {10, 1000});
  } else if (key == "appendix-A1") {
    for (EnvFamily f : kOtherFamilies) add_batched(suite, "a1", f, {1000});
  } else if (key == "appendix-A2") {
    for (EnvFamily f : kOtherFamilies) add_population(suite, "a2", f, {1000});
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  for (const auto& cfg : suite.experiments) validate(cfg);
  return suite;
}

}  // namespace swarmrl
