#include "phs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phs/errors.hpp"
#include "phs/io.hpp"
#include "phs/meanfield.hpp"
#include "phs/stability.hpp"

namespace phs {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const DecayReport& r) {
  return {{"schema", "phsim.decay_report/1"},
          {"fitted_rate", r.fitted_rate ? json(*r.fitted_rate) : json(nullptr)},
          {"envelope_violations", r.envelope_violations},
          {"final_residual", r.final_residual},
          {"lambda2_min", r.lambda2_min},
          {"epsilon", r.epsilon},
          {"grad_sup", r.grad_sup},
          {"records", r.records},
          {"max_envelope_ratio", r.max_envelope_ratio}};
}

namespace {

json model_json(const ModelSpec& m) {
  json j = {{"potential", m.potential.name()}, {"n", m.n}, {"d", m.d}};
  if (m.damping.is_friction()) {
    j["damping"] = "friction";
    j["friction_gamma"] = m.damping.gamma();
  } else {
    j["damping"] = "alignment";
    j["kernel"] = m.kernel().name();
  }
  return j;
}

void write_run(const ExperimentConfig& cfg, const fs::path& dir, const TrajectoryRecord& traj) {
  if (cfg.output.wants("csv")) write_trajectory_csv(dir / "trajectory.csv", traj);
  if (cfg.output.wants("jsonl")) write_diagnostics_jsonl(dir / "diagnostics.jsonl", traj.diagnostics);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

RunSummary run_simulate(const ExperimentConfig& cfg, const fs::path& dir) {
  const auto traj = simulate(initial_ensemble(cfg), cfg.model, cfg.integrator);
  write_run(cfg, dir, traj);
  double max_increase = -INFINITY, spread = 0.0;
  const double h0 = traj.diagnostics.front().hamiltonian;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k > 0)
      max_increase = std::max(max_increase, traj.diagnostics[k].hamiltonian -
                                                traj.diagnostics[k - 1].hamiltonian);
    spread = std::max(spread, std::abs(traj.diagnostics[k].hamiltonian - h0));
  }
  const double h_end = traj.diagnostics.back().hamiltonian;
  const double drift = traj.diagnostics.back().mean_velocity_drift;
  std::string verdict;
  if (spread <= 1e-12 * std::max(1.0, std::abs(h0)))
    verdict = "H constant";
  else if (max_increase <= 1e-8)
    verdict = "H nonincreasing";
  else
    verdict = "H increased by up to " + fmt(max_increase);
  RunSummary s;
  s.report = {{"schema", "phsim.simulate_report/1"},
              {"model", model_json(cfg.model)},
              {"records", traj.size()},
              {"final_hamiltonian", h_end},
              {"max_hamiltonian_increase", traj.size() > 1 ? json(max_increase) : json(nullptr)},
              {"final_mean_velocity_drift", drift},
              {"final_lasalle_residual", traj.diagnostics.back().lasalle_residual}};
  s.line = "simulate: final H = " + fmt(h_end) + ", " + verdict;
  return s;
}

RunSummary run_flocking(const ExperimentConfig& cfg, const fs::path& dir) {
  const auto traj = simulate(initial_ensemble(cfg), cfg.model, cfg.integrator);
  write_run(cfg, dir, traj);
  const auto rep = check_flocking(traj, cfg.model.potential, cfg.experiment.epsilon);
  RunSummary s;
  s.report = to_json(rep);
  s.line = "flocking: " + std::to_string(rep.envelope_violations) +
           " envelope violations, final residual " + fmt(rep.final_residual) + ", fitted rate " +
           (rep.fitted_rate ? fmt(*rep.fitted_rate) : std::string("n/a"));
  return s;
}

RunSummary run_casimir(const ExperimentConfig& cfg) {
  json rows = json::array();
  std::size_t passed = 0;
  std::string names;
  for (const auto& cand : casimir_battery()) {
    const auto r = casimir_test(cand, cfg.model, cfg.experiment.sample_count, cfg.experiment.seed,
                                cfg.experiment.tolerance);
    rows.push_back({{"name", r.name}, {"passed", r.passed}, {"max_residual", r.max_residual}});
    if (r.passed) {
      ++passed;
      names += (names.empty() ? "" : ", ") + r.name;
    }
  }
  RunSummary s;
  s.report = {{"schema", "phsim.casimir_report/1"},
              {"tolerance", cfg.experiment.tolerance},
              {"sample_count", cfg.experiment.sample_count},
              {"seed", cfg.experiment.seed},
              {"candidates", rows}};
  s.line = "casimir: " + std::to_string(passed) + " of " + std::to_string(rows.size()) +
           " candidates pass (" + (names.empty() ? std::string("none") : names) + ")";
  return s;
}

RunSummary run_dobrushin(const ExperimentConfig& cfg) {
  const auto rep = dobrushin_experiment(initial_ensemble(cfg), *cfg.experiment.perturbation_scale,
                                        cfg.model, cfg.integrator, cfg.experiment.seed);
  RunSummary s;
  s.report = {{"schema", "phsim.dobrushin_report/1"},
              {"initial_w2", rep.initial_w2},
              {"fitted_rate", rep.fitted_rate},
              {"least_squares_rate", rep.least_squares_rate},
              {"max_ratio", rep.max_ratio},
              {"times", rep.times},
              {"w2", rep.w2}};
  s.line = "dobrushin: W2(0) = " + fmt(rep.initial_w2) + ", fitted growth rate " +
           fmt(rep.fitted_rate) + " (least squares " + fmt(rep.least_squares_rate) + ")";
  return s;
}

RunSummary run_self_convergence(const ExperimentConfig& cfg) {
  const auto rows =
      self_convergence(cfg.model, make_sampler(cfg), cfg.experiment.n_list, cfg.experiment.t_eval,
                       cfg.experiment.repeats, cfg.integrator, cfg.initial.seed.value_or(0));
  json table = json::array();
  bool decreasing = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    table.push_back({{"n", rows[k].n}, {"median_w2", rows[k].median_w2}, {"samples", rows[k].samples}});
    if (k > 0 && !(rows[k].median_w2 < rows[k - 1].median_w2)) decreasing = false;
  }
  RunSummary s;
  s.report = {{"schema", "phsim.self_convergence/1"},
              {"t_eval", cfg.experiment.t_eval},
              {"repeats", cfg.experiment.repeats},
              {"rows", table},
              {"strictly_decreasing", decreasing}};
  std::string medians;
  for (const auto& r : rows) medians += " " + std::to_string(r.n) + ":" + fmt(r.median_w2);
  s.line = "self_convergence: median W2" + medians +
           (decreasing ? " (strictly decreasing)" : " (not monotone)");
  return s;
}

RunSummary run_meanfield_decay(const ExperimentConfig& cfg, const fs::path& dir) {
  const auto traj = simulate(initial_ensemble(cfg), cfg.model, cfg.integrator);
  write_run(cfg, dir, traj);
  const auto rep = meanfield_decay_check(traj, *cfg.experiment.psi_lower, cfg.experiment.grad_sup,
                                         *cfg.experiment.epsilon);
  RunSummary s;
  s.report = to_json(rep);
  s.report["schema"] = "phsim.meanfield_decay_report/1";
  s.line = "meanfield_decay: " + std::to_string(rep.envelope_violations) +
           " envelope violations, fitted rate " +
           (rep.fitted_rate ? fmt(*rep.fitted_rate) : std::string("n/a"));
  return s;
}

RunSummary run_couple(const ExperimentConfig& cfg, const fs::path& dir) {
  const auto spec = coupling_spec(cfg);
  const auto traj =
      simulate_coupled(spec, initial_ensemble(cfg), second_species_ensemble(cfg), cfg.integrator);
  if (cfg.output.wants("csv")) write_coupled_trajectory_csv(dir / "trajectory.csv", traj);
  if (cfg.output.wants("jsonl")) write_diagnostics_jsonl(dir / "diagnostics.jsonl", traj.diagnostics);
  double max_increase = -INFINITY;
  for (std::size_t k = 1; k < traj.size(); ++k)
    max_increase = std::max(max_increase, traj.diagnostics[k].hamiltonian -
                                              traj.diagnostics[k - 1].hamiltonian);
  RunSummary s;
  s.report = {{"schema", "phsim.couple_report/1"},
              {"n1", spec.first.n},
              {"n2", spec.second.n},
              {"records", traj.size()},
              {"final_hamiltonian", traj.diagnostics.back().hamiltonian},
              {"max_hamiltonian_increase", traj.size() > 1 ? json(max_increase) : json(nullptr)},
              {"final_mean_velocity_drift", traj.diagnostics.back().mean_velocity_drift}};
  s.line = "couple: final H = " + fmt(traj.diagnostics.back().hamiltonian) +
           (max_increase <= 1e-8 ? ", H nonincreasing" : ", H increased");
  return s;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());

  RunSummary s;
  switch (cfg.kind) {
    case ExperimentKind::simulate: s = run_simulate(cfg, out_dir); break;
    case ExperimentKind::flocking: s = run_flocking(cfg, out_dir); break;
    case ExperimentKind::casimir: s = run_casimir(cfg); break;
    case ExperimentKind::dobrushin: s = run_dobrushin(cfg); break;
    case ExperimentKind::self_convergence: s = run_self_convergence(cfg); break;
    case ExperimentKind::meanfield_decay: s = run_meanfield_decay(cfg, out_dir); break;
    case ExperimentKind::couple: s = run_couple(cfg, out_dir); break;
  }
  if (cfg.output.wants("json")) write_json(out_dir / (to_string(cfg.kind) + "_report.json"), s.report);
  return s;
}

}  // namespace phs
