#pragma once

// JSON (de)serialization shared by the config and suite translation units.

#include <json.hpp>

#include "swarmrl/config.hpp"

namespace swarmrl::detail {

using Json = nlohmann::ordered_json;

ExperimentConfig experiment_from_json(const Json& j, std::size_t index);
Json experiment_to_json(const ExperimentConfig& cfg);
Json env_to_json(const EnvDescriptor& env);

}  // namespace swarmrl::detail
