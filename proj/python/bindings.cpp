#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <utility>
#include <vector>

#include "swarmrl/config.hpp"
#include "swarmrl/csv.hpp"
#include "swarmrl/env.hpp"
#include "swarmrl/errors.hpp"
#include "swarmrl/harness.hpp"
#include "swarmrl/policy.hpp"
#include "swarmrl/population.hpp"
#include "swarmrl/presets.hpp"
#include "swarmrl/replicator.hpp"
#include "swarmrl/suite.hpp"

namespace py = pybind11;
using namespace swarmrl;

namespace {

std::vector<Sample> to_batch(const std::vector<std::pair<std::size_t, double>>& pairs) {
  std::vector<Sample> batch;
  batch.reserve(pairs.size());
  for (const auto& [arm, reward] : pairs) batch.push_back({arm, reward});
  return batch;
}

py::dict point_dict(const AggregatePoint& p) {
  py::dict d;
  d["step"] = p.step;
  d["time"] = p.time;
  d["mean_value"] = p.mean_value;
  d["var_value"] = p.var_value;
  d["mean_sampled_reward"] = p.mean_sampled_reward;
  d["frac_seeds_optimal"] = p.frac_seeds_optimal;
  d["mean_mass_optimal"] = p.mean_mass_optimal;
  d["var_mass_optimal"] = p.var_mass_optimal;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bandit learners, voter populations and replicator references";

  auto base = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  auto numeric = py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<DegenerateBatchError>(m, "DegenerateBatchError", numeric.ptr());
  py::register_exception<StepSizeError>(m, "StepSizeError", PyExc_ArithmeticError);
  py::register_exception<AggregationError>(m, "AggregationError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  (void)base;

  m.attr("AGGREGATE_COLUMNS") = std::string(kAggregateHeader);

  // --- randomness and environments ---------------------------------------
  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &RngStream::uniform)
      .def("normal", &RngStream::normal);
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("index"));

  py::enum_<EnvFamily>(m, "EnvFamily")
      .value("NEAR_ZERO", EnvFamily::NearZero)
      .value("SPREAD", EnvFamily::Spread)
      .value("NEAR_ONE", EnvFamily::NearOne);

  py::class_<BanditEnv>(m, "BanditEnv")
      .def(py::init<EnvFamily, std::vector<double>, double, std::uint64_t>(), py::arg("family"),
           py::arg("latent_means"), py::arg("variance"), py::arg("seed") = 0)
      .def_property_readonly("n_arms", &BanditEnv::n_arms)
      .def_property_readonly("latent_means", [](const BanditEnv& e) {
        return std::vector<double>(e.latent_means().begin(), e.latent_means().end());
      })
      .def_property_readonly("variance", &BanditEnv::variance)
      .def_property_readonly("optimal_arm", &BanditEnv::optimal_arm)
      .def("sample_reward", [](const BanditEnv& e, std::size_t arm, RngStream& rng) {
        return sample_reward(e, arm, rng);
      });

  m.def("sigmoid", &sigmoid);
  m.def(
      "make_env",
      [](const std::string& family, std::size_t n_arms, double variance, std::uint64_t seed) {
        return make_env(parse_env_family(family), n_arms, variance, seed);
      },
      py::arg("family"), py::arg("n_arms") = 10, py::arg("variance") = 1.0, py::arg("seed") = 0);
  m.def(
      "estimate_q",
      [](const BanditEnv& env, std::size_t samples, unsigned jobs) {
        py::gil_scoped_release release;
        return estimate_q(env, samples, jobs).q;
      },
      py::arg("env"), py::arg("samples") = kDefaultQSamples, py::arg("jobs") = 1);

  // --- policy updates (simplices are plain float lists) ------------------
  py::class_<RewardBaseline>(m, "RewardBaseline")
      .def(py::init<double>(), py::arg("gamma"))
      .def(py::init<double, double>(), py::arg("r_bar"), py::arg("gamma"))
      .def_property_readonly("r_bar", &RewardBaseline::r_bar)
      .def("observe", &RewardBaseline::observe);

  m.def("cl_update", [](std::vector<double> pi, std::size_t k, double r, double alpha) {
    return cl_update(Simplex(std::move(pi)), k, r, alpha).vector();
  }, py::arg("pi"), py::arg("k"), py::arg("reward"), py::arg("alpha") = 1.0);
  m.def("mcl_update", [](std::vector<double> pi, std::size_t k, double r, RewardBaseline& b, double alpha) {
    return mcl_update(Simplex(std::move(pi)), k, r, b, alpha).vector();
  }, py::arg("pi"), py::arg("k"), py::arg("reward"), py::arg("baseline"), py::arg("alpha"));
  m.def("bcl_update", [](std::vector<double> pi, const std::vector<std::pair<std::size_t, double>>& batch) {
    return bcl_update(Simplex(std::move(pi)), to_batch(batch)).vector();
  }, py::arg("pi"), py::arg("batch"));
  m.def("bmcl_update", [](std::vector<double> pi, const std::vector<std::pair<std::size_t, double>>& batch) {
    return bmcl_update(Simplex(std::move(pi)), to_batch(batch)).vector();
  }, py::arg("pi"), py::arg("batch"));
  m.def("policy_value", [](std::vector<double> pi, const std::vector<double>& q) {
    return policy_value(Simplex(std::move(pi)), q);
  });
  m.def("expected_cl_direction", [](std::vector<double> pi, const std::vector<double>& q) {
    return expected_cl_direction(Simplex(std::move(pi)), q);
  });
  m.def("expected_mcl_direction", [](std::vector<double> pi, const std::vector<double>& q) {
    return expected_mcl_direction(Simplex(std::move(pi)), q);
  });

  // --- replicator references ---------------------------------------------
  m.def("trd_step", [](std::vector<double> pi, const std::vector<double>& q, double delta) {
    return trd_step(Simplex(std::move(pi)), q, delta).vector();
  }, py::arg("pi"), py::arg("q"), py::arg("delta"));
  m.def("mrd_step", [](std::vector<double> pi, const std::vector<double>& q, double delta) {
    return mrd_step(Simplex(std::move(pi)), q, delta).vector();
  }, py::arg("pi"), py::arg("q"), py::arg("delta"));

  // --- populations (members are lists of type indices) -------------------
  m.def("init_population", [](std::size_t n, std::size_t types) {
    const auto pop = init_population(n, types);
    return std::vector<TypeIndex>(pop.members().begin(), pop.members().end());
  }, py::arg("pop_size"), py::arg("n_types"));
  m.def("population_vector", [](std::vector<TypeIndex> members, std::size_t types) {
    return population_vector(Population(std::move(members), types)).vector();
  }, py::arg("members"), py::arg("n_types"));
  m.def("vr_step", [](std::vector<TypeIndex> members, const BanditEnv& env, RngStream& rng) {
    const auto next = vr_step(Population(std::move(members), env.n_arms()), env, rng);
    return std::vector<TypeIndex>(next.members().begin(), next.members().end());
  }, py::arg("members"), py::arg("env"), py::arg("rng"));
  m.def("wvr_step", [](std::vector<TypeIndex> members, const BanditEnv& env, RngStream& rng) {
    const auto next = wvr_step(Population(std::move(members), env.n_arms()), env, rng);
    return std::vector<TypeIndex>(next.members().begin(), next.members().end());
  }, py::arg("members"), py::arg("env"), py::arg("rng"));

  // --- experiments --------------------------------------------------------
  m.def("preset_names", &preset_names);
  m.def("preset_json", [](const std::string& name) { return to_json_text(make_preset(name)); });
  m.def("normalize_config", [](const std::string& json) { return to_json_text(parse_suite(json)); },
        "Parse a suite document and return its canonical JSON text.");
  m.def(
      "run_experiment",
      [](const std::string& json, unsigned jobs) {
        const auto cfg = parse_experiment(json);
        std::vector<AggregatePoint> points;
        {
          py::gil_scoped_release release;
          auto result = run_experiment(prepare(cfg, jobs), jobs);
          for (const auto& c : result.cells) {
            if (!c.ok) throw std::runtime_error("seed " + std::to_string(c.seed_index) + ": " + c.error);
          }
          points = std::move(result.series.points);
        }
        py::list out;
        for (const auto& p : points) out.append(point_dict(p));
        return out;
      },
      py::arg("config_json"), py::arg("jobs") = 1,
      "Run one experiment (JSON object) and return its seed-aggregated rows.");
  m.def(
      "run_suite",
      [](const std::string& config, const std::filesystem::path& out_dir, unsigned jobs) {
        const SuiteConfig suite = is_preset(config) ? make_preset(config)
                                  : config.find('{') != std::string::npos ? parse_suite(config)
                                                                          : load_suite(config);
        py::gil_scoped_release release;
        return run_suite(suite, out_dir, {jobs}).exit_code();
      },
      py::arg("config"), py::arg("out_dir"), py::arg("jobs") = 0,
      "Run a preset name, JSON text or JSON file; returns the exit code.");
  m.def("read_aggregate_csv", [](const std::filesystem::path& path) {
    py::list out;
    for (const auto& p : read_aggregate_csv(path).points) out.append(point_dict(p));
    return out;
  });
}
