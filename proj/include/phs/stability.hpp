#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phs/ensemble.hpp"
#include "phs/integrate.hpp"

namespace phs {

/// A differentiable function C on the flat state space, given through its gradient.
struct CasimirCandidate {
  std::string name;
  std::function<std::vector<double>(std::span<const double> z)> gradient;
};

struct DecayReport {
  /// Least-squares decay rate of the monitored quantity; empty when fewer than
  /// three strictly positive samples exist (e.g. an exactly flocked trajectory).
  std::optional<double> fitted_rate;
  std::size_t envelope_violations = 0;
  double final_residual = 0.0;
  /// Minimum lambda_2 of the damping block over the recorded states.
  double lambda2_min = 0.0;
  double epsilon = 0.0;
  /// Bound on the stacked potential-force vector used in the envelope.
  double grad_sup = 0.0;
  std::size_t records = 0;
  /// max over records of value / envelope.
  double max_envelope_ratio = 0.0;
};

/// ( |v - 1 vbar|^2 + sum_i |(1/N) sum_j grad V(r_i - r_j)|^2 )^{1/2}; vanishes exactly on
/// the LaSalle set. Requires the centered frame (FrameError otherwise).
double lasalle_residual(const Ensemble& ens, const PotentialSpec& potential);

/// Same functional about an explicit vbar, valid in either frame.
double lasalle_residual_about(const Ensemble& ens, const PotentialSpec& potential,
                              std::span<const double> vbar);

/// |v - 1 vbar|^2 with vbar the ensemble's reference mean velocity.
double velocity_deviation_sq(const Ensemble& ens);

/// alpha(t) exp(-(2 lambda2 - eps) t), alpha(t) = v0_dev_sq + (t / eps) grad_sup^2.
/// Throws ParameterError unless 0 < eps < 2 lambda2.
double gronwall_envelope(double v0_dev_sq, double grad_sup, double lambda2, double epsilon,
                         double t);

/// Least-squares slope of -log(values) against times. Needs >= 3 samples, all > 0.
double fit_decay_rate(std::span<const double> times, std::span<const double> values);

/// Checks |v(t) - 1 vbar|^2 against the Gronwall envelope built from the trajectory
/// minimum of lambda_2 (taken from the recorded diagnostics). epsilon defaults to
/// lambda2_min / 2. The envelope's force bound is sqrt(N) * potential.grad_sup_bound,
/// a bound on the norm of the stacked vector dH/dr.
DecayReport check_flocking(const TrajectoryRecord& traj, const PotentialSpec& potential,
                           std::optional<double> epsilon = std::nullopt);

struct CasimirResult {
  std::string name;
  bool passed = false;
  double max_residual = 0.0;
};

/// max over seeded random states of |(dC/dz)^T (J - R(z))|; passes iff <= tol.
/// A pass means no violation was found on the samples.
CasimirResult casimir_test(const CasimirCandidate& cand, const ModelSpec& model,
                           std::size_t sample_count, std::uint64_t seed, double tol);

/// constant, sum_v, sum_r, kinetic (|v|^2) and r_dot_v.
std::vector<CasimirCandidate> casimir_battery();

}  // namespace phs
