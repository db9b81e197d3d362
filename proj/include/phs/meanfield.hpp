#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "phs/ensemble.hpp"
#include "phs/integrate.hpp"
#include "phs/sampling.hpp"
#include "phs/stability.hpp"

namespace phs {

/// Equal-weight atoms in phase space R^{2d}; atom i is (position_i, velocity_i),
/// stored row-major with stride 2d.
struct EmpiricalMeasure {
  std::size_t m = 0;
  std::size_t d = 0;
  std::vector<double> atoms;

  std::span<const double> atom(std::size_t i) const { return {atoms.data() + i * 2 * d, 2 * d}; }
  std::span<const double> position(std::size_t i) const { return {atoms.data() + i * 2 * d, d}; }
  std::span<const double> velocity(std::size_t i) const {
    return {atoms.data() + i * 2 * d + d, d};
  }
  std::vector<double> mean_velocity() const;
  /// Measure made of the listed atoms (repeats allowed).
  EmpiricalMeasure select(std::span<const std::size_t> idx) const;

  void validate() const;
};

struct OTResult {
  double cost = 0.0;      // W2^2
  double distance = 0.0;  // W2
  /// matching[i] = atom of nu transported from atom i of mu
  std::vector<std::size_t> matching;
  /// Max dual infeasibility of the certificate (<= 0 up to rounding).
  double dual_infeasibility = 0.0;
};

/// Atoms in the ensemble's own frame; centered and absolute frames give shifted clouds.
EmpiricalMeasure empirical_from_ensemble(const Ensemble& ens);

/// Exact W2 between two clouds of equal size through an optimal assignment.
/// Throws SizeError on unequal atom counts and DimensionError on unequal d.
OTResult wasserstein2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// (1/(2m)) sum |v_i - vbar|^2 + (1/(2m^2)) sum_ij V(r_i - r_j), vbar the atom velocity mean.
double meanfield_hamiltonian(const EmpiricalMeasure& f, const PotentialSpec& potential);

/// (1/(2m^2)) sum_ij psi(|r_i - r_j|) |v_i - v_j|^2.
double meanfield_dissipation(const EmpiricalMeasure& f, const KernelSpec& kernel);

/// (1/m) sum |v_i - vbar|^2.
double velocity_variance(const EmpiricalMeasure& f);

struct DobrushinReport {
  std::vector<double> times;
  std::vector<double> w2;
  double initial_w2 = 0.0;
  /// Max over record intervals of the slope of log W2^2; the growth bound
  /// W2^2(t) <= W2^2(0) e^{c t} then holds at every record.
  double fitted_rate = 0.0;
  /// Least-squares slope of log W2^2 against t.
  double least_squares_rate = 0.0;
  /// max_t W2^2(t) / (W2^2(0) e^{c t})
  double max_ratio = 0.0;
};

/// Copy of ens with every position and velocity coordinate shifted by scale * N(0, 1).
/// A centered input is re-centered and gets the perturbed mean as its reference velocity.
Ensemble perturb(const Ensemble& ens, double scale, std::uint64_t seed);

/// Simulates ens0 and perturb(ens0, scale, seed) side by side and tracks W2 at every
/// record. Throws DegeneracyError when the initial W2 is zero.
DobrushinReport dobrushin_experiment(const Ensemble& ens0, double perturbation_scale,
                                     const ModelSpec& model, const IntegratorConfig& cfg,
                                     std::uint64_t seed);

struct ConvergenceRow {
  std::size_t n = 0;
  double median_w2 = 0.0;
  std::vector<double> samples;
};

/// For each N: draws N and 2N particles with seed + r (r < repeats), evolves both to
/// t_eval with the scheme and dt of `cfg` and records the exact W2 between the two
/// empirical measures (the N cloud enters with every atom doubled, which leaves its
/// measure unchanged). Reports the median over repeats.
std::vector<ConvergenceRow> self_convergence(const ModelSpec& model, const EnsembleSampler& sampler,
                                             std::span<const std::size_t> n_list, double t_eval,
                                             std::size_t repeats, const IntegratorConfig& cfg,
                                             std::uint64_t seed);

/// Checks velocity_variance(f_t) <= (variance_0 + grad_sup^2 / eps) e^{-(psi_lower - eps) t}
/// on every record. Throws ParameterError unless 0 < eps < psi_lower.
DecayReport meanfield_decay_check(const TrajectoryRecord& traj, double psi_lower, double grad_sup,
                                  double epsilon);

double median(std::vector<double> values);

}  // namespace phs
