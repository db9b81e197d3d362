#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phs/integrate.hpp"
#include "phs/ports.hpp"

namespace phs {

/// Shortest decimal that parses back to exactly the same double.
std::string format_double(double x);

/// Header: t,species_id,particle_id,x_1..x_d,v_1..v_d; one row per (record, particle).
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& traj);
void write_coupled_trajectory_csv(const std::filesystem::path& path, const CoupledTrajectory& traj);

/// First line {"schema": ..., "fields": [...]}, then one object per record.
void write_diagnostics_jsonl(const std::filesystem::path& path,
                             const std::vector<DiagnosticsRecord>& diagnostics);

nlohmann::json to_json(const DiagnosticsRecord& rec);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with one header line.
CsvTable read_csv(const std::filesystem::path& path);

/// Byte content of a file; IoError when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace phs
