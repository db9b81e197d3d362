#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "phs/config.hpp"
#include "phs/stability.hpp"

namespace phs {

struct RunSummary {
  /// One line for the terminal.
  std::string line;
  /// The report document (also written as <kind>_report.json when json output is on).
  nlohmann::json report;
};

/// Runs the configured experiment and writes its outputs under out_dir.
/// Module errors propagate unchanged.
RunSummary run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

nlohmann::json to_json(const DecayReport& r);

}  // namespace phs
