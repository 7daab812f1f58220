#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "swarmrl/config.hpp"

namespace swarmrl {

/// figure-1, figure-2, figure-3, figure-4, appendix-A1, appendix-A2.
std::vector<std::string> preset_names();
/// One-line description of a preset.
std::string preset_summary(std::string_view name);
/// Accepts the names above, optionally prefixed with "paper-".
bool is_preset(std::string_view name);
/// Throws ConfigError for an unknown name.
SuiteConfig make_preset(std::string_view name);

}  // namespace swarmrl
