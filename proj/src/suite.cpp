#include "swarmrl/suite.hpp"

#include <atomic>
#include <map>
#include <optional>
#include <thread>
#include <tuple>

#include "config_json.hpp"
#include "swarmrl/csv.hpp"
#include "swarmrl/errors.hpp"

#ifndef SWARMRL_VERSION
#define SWARMRL_VERSION "dev"
#endif

namespace swarmrl {
namespace {

using detail::Json;

using QKey = std::tuple<int, std::size_t, double, std::uint64_t, std::size_t>;

QKey q_key(const ExperimentConfig& cfg) {
  return {static_cast<int>(cfg.env.family), cfg.env.n_arms, cfg.env.variance, cfg.env.seed,
          cfg.q_samples};
}

struct Cell {
  std::size_t experiment;
  std::size_t seed;
};

Json cells_json(const std::vector<CellStatus>& cells) {
  Json list = Json::array();
  for (const auto& c : cells) {
    Json j;
    j["seed_index"] = c.seed_index;
    j["status"] = c.ok ? "ok" : "failed";
    if (!c.ok) j["error"] = c.error;
    j["degenerate_steps"] = c.degenerate_steps;
    list.push_back(std::move(j));
  }
  return list;
}

}  // namespace

bool ExperimentReport::ok() const {
  if (!error.empty()) return false;
  for (const auto& c : cells) {
    if (!c.ok) return false;
  }
  return true;
}

int SuiteReport::exit_code() const {
  for (const auto& e : experiments) {
    if (!e.ok()) return kExitCellFailed;
  }
  return kExitOk;
}

std::string build_identifier() {
  std::string id = "swarmrl " SWARMRL_VERSION;
#if defined(__clang__)
  id += " clang " __clang_version__;
#elif defined(__GNUC__)
  id += " gcc " __VERSION__;
#elif defined(_MSC_VER)
  id += " msvc " + std::to_string(_MSC_VER);
#endif
  return id;
}

SuiteReport run_suite(const SuiteConfig& suite, const std::filesystem::path& out_dir,
                      const SuiteOptions& options) {
  const unsigned jobs = resolve_jobs(options.jobs);
  const std::size_t n_exp = suite.experiments.size();

  // Prepare environments; experiments on the same environment share one q table.
  std::map<QKey, QTable> q_cache;
  std::vector<std::optional<PreparedExperiment>> prepared(n_exp);
  SuiteReport report;
  report.experiments.resize(n_exp);
  for (std::size_t e = 0; e < n_exp; ++e) {
    const ExperimentConfig& cfg = suite.experiments[e];
    ExperimentReport& er = report.experiments[e];
    er.name = cfg.name;
    er.csv = out_dir / (cfg.name + ".csv");
    try {
      const QKey key = q_key(cfg);
      auto it = q_cache.find(key);
      if (it == q_cache.end()) {
        PreparedExperiment p = prepare(cfg, jobs);
        q_cache.emplace(key, p.q);
        prepared[e] = std::move(p);
      } else {
        prepared[e] = prepare(cfg, it->second);
      }
      er.cells.resize(cfg.seeds.count);
    } catch (const std::exception& ex) {
      er.error = ex.what();
    }
  }

  std::vector<Cell> cells;
  std::vector<std::vector<std::optional<Trajectory>>> runs(n_exp);
  for (std::size_t e = 0; e < n_exp; ++e) {
    if (!prepared[e]) continue;
    runs[e].resize(prepared[e]->config.seeds.count);
    for (std::size_t s = 0; s < runs[e].size(); ++s) cells.push_back({e, s});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell c = cells[i];
      CellStatus& status = report.experiments[c.experiment].cells[c.seed];
      status.seed_index = c.seed;
      try {
        runs[c.experiment][c.seed] = run_single(*prepared[c.experiment], c.seed);
        status.ok = true;
        status.degenerate_steps = runs[c.experiment][c.seed]->degenerate_steps;
      } catch (const std::exception& ex) {
        status.ok = false;
        status.error = ex.what();
      }
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, cells.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  Json manifest;
  manifest["tool"] = "swarmrl";
  manifest["build"] = build_identifier();
  manifest["csv_columns"] = std::string(kAggregateHeader);
  manifest["variance_convention"] = "population (sum of squared deviations / number of seeds)";
  manifest["experiments"] = Json::array();
  for (std::size_t e = 0; e < n_exp; ++e) {
    ExperimentReport& er = report.experiments[e];
    Json j;
    j["name"] = er.name;
    j["config"] = detail::experiment_to_json(suite.experiments[e]);
    if (prepared[e]) {
      std::vector<Trajectory> good;
      for (auto& r : runs[e]) {
        if (r) good.push_back(std::move(*r));
      }
      AggregateSeries series;
      if (!good.empty()) series = aggregate(good);
      try {
        write_csv(series, er.csv);
        j["csv"] = er.csv.filename().string();
      } catch (const IoError& ex) {
        er.error = ex.what();
      }
      const PreparedExperiment& p = *prepared[e];
      j["env"] = {{"latent_means", std::vector<double>(p.env.latent_means().begin(),
                                                       p.env.latent_means().end())},
                  {"optimal_arm", p.env.optimal_arm()}};
      j["q_hat"] = {{"samples", p.q.sample_count}, {"q", p.q.q}};
      j["seeds_aggregated"] = good.size();
      j["cells"] = cells_json(er.cells);
    }
    j["status"] = er.ok() ? "ok" : "failed";
    if (!er.error.empty()) j["error"] = er.error;
    manifest["experiments"].push_back(std::move(j));
  }
  manifest["status"] = report.exit_code() == kExitOk ? "ok" : "failed";
  report.manifest = out_dir / "manifest.json";
  write_text(report.manifest, manifest.dump(2) + "\n");
  return report;
}

}  // namespace swarmrl
