#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "swarmrl/config.hpp"
#include "swarmrl/csv.hpp"
#include "swarmrl/errors.hpp"
#include "swarmrl/harness.hpp"
#include "swarmrl/presets.hpp"
#include "swarmrl/suite.hpp"

using namespace swarmrl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("swarmrl-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig small(Rule rule) {
  ExperimentConfig cfg;
  cfg.name = "small";
  cfg.rule = rule;
  cfg.env = {EnvFamily::Spread, 5, 1.0, 3};
  cfg.runs = 200;
  cfg.seeds = {4, 11};
  cfg.q_samples = 20000;
  switch (rule) {
    case Rule::CL: cfg.alpha = 0.05; break;
    case Rule::MCL: cfg.alpha = 0.05; cfg.gamma = 0.01; break;
    case Rule::BCL:
    case Rule::BMCL: cfg.batch_size = 8; break;
    case Rule::VR:
    case Rule::WVR: cfg.pop_size = 20; break;
    case Rule::TRD:
    case Rule::MRD: cfg.alpha = 0.05; break;
  }
  return cfg;
}

Trajectory constant(double value, double mass, std::size_t points = 3) {
  Trajectory t;
  t.kind = "CL";
  t.n_states = 2;
  for (std::size_t i = 0; i < points; ++i) {
    TrajectoryPoint p;
    p.step = i;
    p.time = static_cast<double>(i);
    p.value = value;
    p.sampled_reward = value;
    p.mass_optimal = mass;
    p.argmax_optimal = mass > 0.5;
    p.state = {mass, 1.0 - mass};
    t.points.push_back(p);
  }
  return t;
}

}  // namespace

TEST_CASE("rule names") {
  CHECK(parse_rule("b-mcl") == Rule::BMCL);
  CHECK(parse_rule("wvr") == Rule::WVR);
  CHECK(to_string(Rule::TRD) == "TRD");
  CHECK_THROWS_AS(parse_rule("sarsa"), ConfigError);
}

TEST_CASE("validation accepts exactly the relevant fields") {
  for (Rule r : {Rule::CL, Rule::MCL, Rule::BCL, Rule::BMCL, Rule::VR, Rule::WVR, Rule::TRD, Rule::MRD}) {
    CHECK_NOTHROW(validate(small(r)));
  }
  auto cl = small(Rule::CL);
  cl.gamma = 0.1;
  CHECK_THROWS_AS(validate(cl), ConfigError);
  cl = small(Rule::CL);
  cl.alpha.reset();
  CHECK_THROWS_AS(validate(cl), ConfigError);
  cl = small(Rule::CL);
  cl.alpha = 1.5;
  CHECK_THROWS_AS(validate(cl), ConfigError);
  auto mcl = small(Rule::MCL);
  mcl.gamma.reset();
  CHECK_THROWS_AS(validate(mcl), ConfigError);
  auto b = small(Rule::BCL);
  b.pop_size = 10;
  CHECK_THROWS_AS(validate(b), ConfigError);
  b = small(Rule::BMCL);
  b.batch_size = 0;
  CHECK_THROWS_AS(validate(b), ConfigError);
  auto vr = small(Rule::VR);
  vr.pop_size = 4;  // fewer members than arms
  CHECK_THROWS_AS(validate(vr), ConfigError);
  auto wvr = small(Rule::WVR);
  wvr.revision = Revision::Sequential;
  CHECK_THROWS_AS(validate(wvr), ConfigError);
  auto ref = small(Rule::TRD);
  ref.init = InitKind::Uniform;
  CHECK_NOTHROW(validate(ref));
  ref.batch_size = 3;
  CHECK_THROWS_AS(validate(ref), ConfigError);
  auto bad_env = small(Rule::CL);
  bad_env.env.variance = -1.0;
  CHECK_THROWS_AS(validate(bad_env), ConfigError);
  auto no_seeds = small(Rule::CL);
  no_seeds.seeds.count = 0;
  CHECK_THROWS_AS(validate(no_seeds), ConfigError);
}

TEST_CASE("derived settings") {
  auto cfg = small(Rule::CL);
  cfg.runs = 1'000'000;
  CHECK(effective_record_stride(cfg) == 1000);
  cfg.runs = 100;
  CHECK(effective_record_stride(cfg) == 1);
  cfg.record_stride = 7;
  CHECK(effective_record_stride(cfg) == 7);
  CHECK(step_duration(small(Rule::CL)) == 0.05);
  CHECK(step_duration(small(Rule::BCL)) == 1.0);
  CHECK(step_duration(small(Rule::VR)) == 1.0);
  auto ref = small(Rule::MRD);
  ref.alpha.reset();
  CHECK(step_duration(ref) == 1.0);
}

TEST_CASE("JSON parsing is strict") {
  const std::string ok = R"({"rule":"cl","alpha":0.1,"runs":10,
      "env":{"family":"near-one","n_arms":3,"variance":0.5,"seed":2},"seeds":{"count":2,"base":9}})";
  const auto cfg = parse_experiment(ok);
  CHECK(cfg.rule == Rule::CL);
  CHECK(cfg.env.family == EnvFamily::NearOne);
  CHECK(cfg.env.n_arms == 3);
  CHECK(cfg.seeds.base == 9);
  CHECK(cfg.q_samples == kDefaultQSamples);

  CHECK_THROWS_AS(parse_experiment(R"({"rule":"cl","alpha":0.1,"runs":10,"colour":1})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment(R"({"rule":"cl","runs":10})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment(R"({"rule":"cl","alpha":"fast","runs":10})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment(R"({"rule":"vr","pop_size":20,"alpha":0.1,"runs":10})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_suite(R"({"experiments":[{"rule":"cl","alpha":0.1,"runs":1,"name":"a"},
                                 {"rule":"cl","alpha":0.1,"runs":1,"name":"a"}]})"),
                  ConfigError);
  const auto suite = parse_suite(R"({"experiments":[{"rule":"trd","runs":5,
      "env":{"family":"spread","n_arms":3,"variance":1,"seed":0}}]})");
  REQUIRE(suite.experiments.size() == 1);
  CHECK(suite.experiments[0].name == "0-trd-spread");
  CHECK(parse_suite(R"({"experiments":[]})").experiments.empty());
}

TEST_CASE("JSON round trip") {
  for (Rule r : {Rule::CL, Rule::MCL, Rule::BCL, Rule::BMCL, Rule::VR, Rule::WVR, Rule::TRD, Rule::MRD}) {
    auto cfg = small(r);
    if (r == Rule::VR) cfg.revision = Revision::Sequential;
    if (r == Rule::MRD) cfg.init = InitKind::Uniform;
    cfg.record_stride = 3;
    CHECK(parse_experiment(to_json_text(cfg)) == cfg);
  }
  for (const auto& name : preset_names()) {
    const auto preset = make_preset(name);
    const auto text = to_json_text(preset);
    CHECK(parse_suite(text) == preset);
    CHECK(to_json_text(parse_suite(text)) == text);
  }
}

TEST_CASE("presets") {
  CHECK(preset_names().size() == 6);
  CHECK(is_preset("paper-figure-1"));
  CHECK_FALSE(is_preset("figure-9"));
  CHECK_THROWS_AS(make_preset("figure-9"), ConfigError);

  const auto fig1 = make_preset("paper-figure-1");
  CHECK(fig1.experiments.size() == 12);
  for (auto family : {EnvFamily::NearZero, EnvFamily::Spread, EnvFamily::NearOne}) {
    for (Rule r : {Rule::CL, Rule::MCL, Rule::TRD, Rule::MRD}) {
      int hits = 0;
      for (const auto& e : fig1.experiments) hits += e.env.family == family && e.rule == r;
      CHECK(hits == 1);
    }
  }
  for (const auto& e : fig1.experiments) {
    CHECK(e.runs == 1'000'000);
    CHECK(e.alpha == 0.001);
    CHECK(e.seeds.count == 100);
    CHECK(e.env.n_arms == 10);
  }
  for (const auto& e : make_preset("figure-2").experiments) {
    CHECK(e.runs == 1000);
    CHECK(e.alpha == 0.1);
  }
  std::vector<std::size_t> sizes;
  for (const auto& e : make_preset("figure-3").experiments) {
    if (e.pop_size) sizes.push_back(*e.pop_size);
  }
  CHECK(std::count(sizes.begin(), sizes.end(), 10) == 2);
  CHECK(std::count(sizes.begin(), sizes.end(), 1000) == 2);
  for (const auto& name : preset_names()) {
    for (const auto& e : make_preset(name).experiments) CHECK_NOTHROW(validate(e));
  }
}

TEST_CASE("aggregate statistics") {
  const std::vector<Trajectory> one{constant(0.3, 0.9)};
  const auto a = aggregate(one);
  CHECK(a.trajectories == 1);
  for (const auto& p : a.points) {
    CHECK(p.var_value == 0.0);
    CHECK(p.var_mass_optimal == 0.0);
    CHECK(p.mean_value == 0.3);
    CHECK(p.frac_seeds_optimal == 1.0);
  }
  const std::vector<Trajectory> two{constant(0.4, 0.2), constant(0.6, 0.8)};
  const auto b = aggregate(two);
  for (const auto& p : b.points) {
    CHECK(p.mean_value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.var_value == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(p.frac_seeds_optimal == 0.5);
    CHECK(p.var_mass_optimal == doctest::Approx(0.09).epsilon(1e-12));
  }
  CHECK_THROWS_AS(aggregate(std::vector<Trajectory>{}), AggregationError);
  CHECK_THROWS_AS(aggregate(std::vector<Trajectory>{constant(0.1, 0.1, 3), constant(0.1, 0.1, 4)}),
                  AggregationError);
}

TEST_CASE("CSV output") {
  const auto dir = scratch("csv");
  write_csv(AggregateSeries{}, dir / "empty.csv");
  CHECK(read_text(dir / "empty.csv") == std::string(kAggregateHeader) + "\n");
  CHECK(read_aggregate_csv(dir / "empty.csv").points.empty());

  const std::vector<Trajectory> two{constant(0.1 + 1e-17, 0.2), constant(1.0 / 3.0, 0.8)};
  const auto series = aggregate(two);
  write_csv(series, dir / "nested" / "two.csv");
  const auto back = read_aggregate_csv(dir / "nested" / "two.csv");
  CHECK(back.points == series.points);

  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK_THROWS_AS(parse_aggregate_csv("step,time\n1,2\n"), IoError);
  CHECK_THROWS_AS(read_text(dir / "missing.csv"), IoError);

  auto traj = constant(0.5, 0.5, 2);
  const auto text = trajectory_csv(traj);
  CHECK(text.rfind("step,time,value,sampled_reward,mass_optimal,argmax_optimal,p0,p1\n", 0) == 0);
}

TEST_CASE("single runs") {
  SUBCASE("zero steps keep only the initial state") {
    for (Rule r : {Rule::CL, Rule::MCL, Rule::BCL, Rule::BMCL, Rule::VR, Rule::WVR}) {
      auto cfg = small(r);
      cfg.runs = 0;
      const auto exp = prepare(cfg);
      const auto t = run_single(exp, 0);
      REQUIRE(t.points.size() == 1);
      CHECK(t.points[0].step == 0);
    }
  }
  SUBCASE("learners and random-init references share the starting policy") {
    const auto cl = prepare(small(Rule::CL));
    const auto trd = prepare(small(Rule::TRD), cl.q);
    for (std::size_t s = 0; s < 3; ++s) {
      const auto a = run_rl(cl, s);
      const auto b = run_reference(trd, s);
      CHECK(a.points[0].state == b.points[0].state);
      CHECK(a.points[0].state == initial_policy(cl.config, 5, s).vector());
      REQUIRE(a.points.size() == b.points.size());
      for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].step == b.points[i].step);
        CHECK(a.points[i].time == doctest::Approx(b.points[i].time).epsilon(1e-12));
      }
    }
  }
  SUBCASE("reference with delta equal to the horizon has two points") {
    auto cfg = small(Rule::MRD);
    cfg.alpha = 0.5;
    cfg.runs = 1;
    const auto t = run_reference(prepare(cfg));
    CHECK(t.points.size() == 2);
    CHECK(t.points[1].time == 0.5);
  }
  SUBCASE("absorbing population start stays flat") {
    for (Rule r : {Rule::VR, Rule::WVR}) {
      const auto exp = prepare(small(r));
      RunOptions opt;
      opt.initial_population = Population(std::vector<TypeIndex>(20, 2), 5);
      const auto t = run_population(exp, 0, opt);
      for (const auto& p : t.points) {
        CHECK(p.value == t.points[0].value);
        CHECK(p.state == std::vector<double>{0, 0, 20, 0, 0});
      }
    }
  }
  SUBCASE("rule mismatch") {
    const auto exp = prepare(small(Rule::VR));
    CHECK_THROWS_AS(run_rl(exp, 0), ConfigError);
    CHECK_THROWS_AS(run_reference(exp, 0), ConfigError);
  }
  SUBCASE("metric sanity") {
    for (Rule r : {Rule::CL, Rule::MCL, Rule::BCL, Rule::BMCL, Rule::VR, Rule::WVR, Rule::TRD, Rule::MRD}) {
      const auto result = run_experiment(prepare(small(r)));
      CHECK(result.ok());
      std::uint64_t last = 0;
      for (std::size_t i = 0; i < result.series.points.size(); ++i) {
        const auto& p = result.series.points[i];
        if (i > 0) CHECK(p.step > last);
        last = p.step;
        CHECK(p.mean_value >= 0.0);
        CHECK(p.mean_value <= 1.0);
        CHECK(p.mean_sampled_reward >= 0.0);
        CHECK(p.mean_sampled_reward <= 1.0);
        CHECK(p.frac_seeds_optimal >= 0.0);
        CHECK(p.frac_seeds_optimal <= 1.0);
        CHECK(p.var_value >= 0.0);
      }
    }
  }
}

TEST_CASE("seed independence") {
  for (Rule r : {Rule::MCL, Rule::BMCL, Rule::WVR}) {
    const auto exp = prepare(small(r));
    const auto serial = run_experiment(exp, 1);
    const auto threaded = run_experiment(exp, 4);
    CHECK(serial.series.points == threaded.series.points);
    const auto late = run_single(exp, 3);
    const auto early = run_single(exp, 0);
    const auto late_again = run_single(exp, 3);
    bool same = true;
    bool differs = false;
    for (std::size_t i = 0; i < late.points.size(); ++i) {
      same &= late.points[i].state == late_again.points[i].state;
      differs |= early.points[i].state != late.points[i].state;
    }
    CHECK(same);
    CHECK(differs);
  }
}

TEST_CASE("suite output") {
  SuiteConfig suite;
  suite.experiments = {small(Rule::CL), small(Rule::TRD), small(Rule::WVR)};
  suite.experiments[1].name = "small-trd";
  suite.experiments[2].name = "small-wvr";

  const auto a = scratch("suite-a");
  const auto b = scratch("suite-b");
  const auto ra = run_suite(suite, a, {1});
  const auto rb = run_suite(suite, b, {3});
  CHECK(ra.exit_code() == kExitOk);
  CHECK(rb.exit_code() == kExitOk);
  for (const char* f : {"small.csv", "small-trd.csv", "small-wvr.csv", "manifest.json"}) {
    CHECK(read_text(a / f) == read_text(b / f));
  }
  CHECK(read_text(a / "small.csv").rfind(std::string(kAggregateHeader) + "\n", 0) == 0);

  const auto empty = scratch("suite-empty");
  const auto re = run_suite(SuiteConfig{}, empty);
  CHECK(re.exit_code() == kExitOk);
  CHECK(fs::exists(empty / "manifest.json"));
  CHECK(std::distance(fs::directory_iterator(empty), fs::directory_iterator{}) == 1);
}

TEST_CASE("a failing experiment does not stop the suite") {
  SuiteConfig suite;
  suite.experiments = {small(Rule::CL), small(Rule::BCL)};
  suite.experiments[1].name = "blocked";
  const auto dir = scratch("suite-fail");
  fs::create_directories(dir / "blocked.csv");  // a directory where the CSV should go
  const auto report = run_suite(suite, dir, {1});
  CHECK(report.exit_code() == kExitCellFailed);
  REQUIRE(report.experiments.size() == 2);
  CHECK(report.experiments[0].ok());
  CHECK_FALSE(report.experiments[1].ok());
  CHECK(fs::exists(dir / "small.csv"));
  const auto manifest = read_text(dir / "manifest.json");
  CHECK(manifest.find("blocked") != std::string::npos);
}
