#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "phs/ensemble.hpp"

namespace phs {

enum class Scheme { rk4, implicit_midpoint };

struct NewtonOptions {
  double tol = 1e-12;  // max-norm of the stage residual
  std::size_t max_iter = 50;
  bool operator==(const NewtonOptions&) const = default;
};

struct IntegratorConfig {
  Scheme scheme = Scheme::rk4;
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t record_every = 1;
  NewtonOptions newton;

  /// dt > 0, dt < t_end, t_end an integer multiple of dt, positive tolerances.
  void validate() const;
  std::size_t steps() const;

  bool operator==(const IntegratorConfig&) const = default;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double hamiltonian = 0.0;
  double dissipation_rate = 0.0;
  std::vector<double> mean_velocity;
  /// |mean velocity - reference mean velocity|, Euclidean.
  double mean_velocity_drift = 0.0;
  double lasalle_residual = 0.0;
  double lambda2 = 0.0;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Ensemble> states;
  std::vector<DiagnosticsRecord> diagnostics;

  std::size_t size() const { return times.size(); }
};

/// Autonomous vector field on a flat state vector.
using VectorField = std::function<void(std::span<const double> z, std::span<double> dz)>;

/// Classical fourth-order Runge-Kutta step.
std::vector<double> rk4_step(const VectorField& f, std::span<const double> z, double dt);

/// Implicit midpoint step z+ = z + dt f((z + z+)/2). The midpoint y solves
/// y - z - dt/2 f(y) = 0 by damped Newton with a central-difference Jacobian.
/// Throws StepError (carrying the residual) after newton.max_iter iterations.
std::vector<double> implicit_midpoint_step(const VectorField& f, std::span<const double> z,
                                           double dt, const NewtonOptions& newton);

/// The PHS vector field phs_rhs of the model, frozen to the layout of `like`.
VectorField phs_vector_field(const Ensemble& like, const ModelSpec& model);

using RecordCallback = std::function<void(std::size_t step, double t, std::span<const double> z)>;

/// Steps z' = f(z) from t = 0 to cfg.t_end with fixed dt, calling on_record at step 0,
/// every record_every steps and at the final step. Throws DivergenceError on non-finite
/// states. Returns the final state.
std::vector<double> integrate_field(const VectorField& f, std::vector<double> z0,
                                    const IntegratorConfig& cfg, const RecordCallback& on_record);

/// One step of the chosen scheme applied to phs_rhs.
Ensemble advance(const Ensemble& ens, const ModelSpec& model, Scheme scheme, double dt,
                 const NewtonOptions& newton = {});

/// Diagnostics of a single state: H, dissipation, mean velocity and its drift,
/// LaSalle residual and lambda_2 of the damping block.
DiagnosticsRecord diagnose(const Ensemble& ens, const ModelSpec& model, double t);

/// Integrates to cfg.t_end, recording state and diagnostics at step 0, every
/// record_every steps, and at the final step. Throws DivergenceError on any
/// non-finite state.
TrajectoryRecord simulate(const Ensemble& ens0, const ModelSpec& model, const IntegratorConfig& cfg);

/// Same time stepping as simulate without recording; returns the final state.
Ensemble evolve(const Ensemble& ens0, const ModelSpec& model, const IntegratorConfig& cfg);

}  // namespace phs
