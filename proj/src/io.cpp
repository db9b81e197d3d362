#include "phs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "phs/errors.hpp"

namespace phs {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, p);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

void header(std::ostream& os, std::size_t d) {
  os << "t,species_id,particle_id";
  for (std::size_t k = 1; k <= d; ++k) os << ",x_" << k;
  for (std::size_t k = 1; k <= d; ++k) os << ",v_" << k;
  os << "\n";
}

void rows(std::ostream& os, double t, int species, const Ensemble& e) {
  for (std::size_t i = 0; i < e.n; ++i) {
    os << format_double(t) << ',' << species << ',' << i;
    for (double x : e.position(i)) os << ',' << format_double(x);
    for (double v : e.velocity(i)) os << ',' << format_double(v);
    os << '\n';
  }
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& traj) {
  auto out = open_out(path);
  header(out, traj.states.empty() ? 0 : traj.states.front().d);
  for (std::size_t k = 0; k < traj.size(); ++k) rows(out, traj.times[k], 0, traj.states[k]);
  finish(out, path);
}

void write_coupled_trajectory_csv(const std::filesystem::path& path,
                                  const CoupledTrajectory& traj) {
  auto out = open_out(path);
  header(out, traj.first.empty() ? 0 : traj.first.front().d);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    rows(out, traj.times[k], 0, traj.first[k]);
    rows(out, traj.times[k], 1, traj.second[k]);
  }
  finish(out, path);
}

nlohmann::json to_json(const DiagnosticsRecord& rec) {
  return {{"t", rec.t},
          {"hamiltonian", rec.hamiltonian},
          {"dissipation_rate", rec.dissipation_rate},
          {"mean_velocity", rec.mean_velocity},
          {"mean_velocity_drift", rec.mean_velocity_drift},
          {"lasalle_residual", rec.lasalle_residual},
          {"lambda2", rec.lambda2}};
}

void write_diagnostics_jsonl(const std::filesystem::path& path,
                             const std::vector<DiagnosticsRecord>& diagnostics) {
  auto out = open_out(path);
  const nlohmann::json schema = {
      {"schema", "phsim.diagnostics/1"},
      {"fields",
       {"t", "hamiltonian", "dissipation_rate", "mean_velocity", "mean_velocity_drift",
        "lasalle_residual", "lambda2"}}};
  out << schema.dump() << '\n';
  for (const auto& rec : diagnostics) out << to_json(rec).dump() << '\n';
  finish(out, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double x = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (ec != std::errc() || p != cell.data() + cell.size())
        throw IoError("non-numeric cell '" + cell + "' in " + path.string());
      row.push_back(x);
    }
    if (row.size() != t.header.size()) throw IoError("ragged row in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace phs
