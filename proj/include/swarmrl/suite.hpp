#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "swarmrl/config.hpp"
#include "swarmrl/harness.hpp"

namespace swarmrl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCellFailed = 1;
inline constexpr int kExitConfigInvalid = 2;

struct SuiteOptions {
  /// Worker threads for the (experiment, seed) fan-out; 0 = hardware concurrency.
  unsigned jobs = 0;
};

struct ExperimentReport {
  std::string name;
  std::filesystem::path csv;
  /// Set when the experiment could not even be prepared.
  std::string error;
  std::vector<CellStatus> cells;

  bool ok() const;
};

struct SuiteReport {
  std::filesystem::path manifest;
  std::vector<ExperimentReport> experiments;

  int exit_code() const;
};

/// Compiler and version string recorded in manifests.
std::string build_identifier();

/// Runs every (experiment, seed) cell, writes `<name>.csv` aggregates and
/// `manifest.json` into `out_dir`. Cell failures are recorded and do not stop
/// the suite. Output bytes depend only on the config and the build.
SuiteReport run_suite(const SuiteConfig& suite, const std::filesystem::path& out_dir,
                      const SuiteOptions& options = {});

}  // namespace swarmrl
