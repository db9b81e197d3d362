#include "phs/integrate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "phs/errors.hpp"
#include "phs/phs_core.hpp"
#include "phs/spectrum.hpp"
#include "phs/stability.hpp"

namespace phs {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be positive");
  if (!(dt < t_end)) throw ParameterError("dt must be smaller than t_end");
  if (record_every == 0) throw ParameterError("record_every must be positive");
  if (!(newton.tol > 0.0)) throw ParameterError("newton_tol must be positive");
  if (newton.max_iter == 0) throw ParameterError("newton_max_iter must be positive");
  const double ratio = t_end / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw ParameterError("t_end must be an integer multiple of dt");
}

std::size_t IntegratorConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

std::vector<double> rk4_step(const VectorField& f, std::span<const double> z, double dt) {
  const std::size_t m = z.size();
  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
  const double half = 0.5 * dt;
  f(z, k1);
  for (std::size_t q = 0; q < m; ++q) tmp[q] = z[q] + half * k1[q];
  f(tmp, k2);
  for (std::size_t q = 0; q < m; ++q) tmp[q] = z[q] + half * k2[q];
  f(tmp, k3);
  for (std::size_t q = 0; q < m; ++q) tmp[q] = z[q] + dt * k3[q];
  f(tmp, k4);
  std::vector<double> out(m);
  const double sixth = dt / 6.0;
  for (std::size_t q = 0; q < m; ++q)
    out[q] = z[q] + sixth * (k1[q] + 2.0 * (k2[q] + k3[q]) + k4[q]);
  return out;
}

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> implicit_midpoint_step(const VectorField& f, std::span<const double> z,
                                           double dt, const NewtonOptions& newton) {
  const std::size_t m = z.size();
  const double half = 0.5 * dt;
  std::vector<double> fy(m), y(z.begin(), z.end()), trial(m), g(m), g_trial(m);

  auto residual = [&](std::span<const double> yy, std::span<double> out) {
    f(yy, fy);
    for (std::size_t q = 0; q < m; ++q) out[q] = yy[q] - z[q] - half * fy[q];
  };

  // Explicit half step as the initial guess.
  f(z, fy);
  for (std::size_t q = 0; q < m; ++q) y[q] = z[q] + half * fy[q];
  residual(y, g);

  const auto mi = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd jac(mi, mi);
  Eigen::VectorXd rhs(mi);
  std::vector<double> yp(m), fp(m), fm(m);
  const double fd_scale = std::cbrt(std::numeric_limits<double>::epsilon());

  for (std::size_t it = 0; it < newton.max_iter; ++it) {
    if (max_abs(g) <= newton.tol) {
      std::vector<double> out(m);
      for (std::size_t q = 0; q < m; ++q) out[q] = 2.0 * y[q] - z[q];
      return out;
    }
    // Jacobian of the stage residual: I - dt/2 Df(y), Df by central differences.
    for (std::size_t c = 0; c < m; ++c) {
      const double h = fd_scale * std::max(1.0, std::abs(y[c]));
      yp = y;
      yp[c] = y[c] + h;
      f(yp, fp);
      yp[c] = y[c] - h;
      f(yp, fm);
      for (std::size_t r = 0; r < m; ++r)
        jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            (r == c ? 1.0 : 0.0) - half * (fp[r] - fm[r]) / (2.0 * h);
    }
    for (std::size_t q = 0; q < m; ++q) rhs(static_cast<Eigen::Index>(q)) = -g[q];
    const Eigen::VectorXd delta = jac.partialPivLu().solve(rhs);

    const double g_norm = max_abs(g);
    double lambda = 1.0;
    for (;;) {
      for (std::size_t q = 0; q < m; ++q)
        trial[q] = y[q] + lambda * delta(static_cast<Eigen::Index>(q));
      residual(trial, g_trial);
      if (max_abs(g_trial) < g_norm || lambda < 1.0 / 64.0) break;
      lambda *= 0.5;
    }
    y.swap(trial);
    g.swap(g_trial);
  }
  if (max_abs(g) <= newton.tol) {
    std::vector<double> out(m);
    for (std::size_t q = 0; q < m; ++q) out[q] = 2.0 * y[q] - z[q];
    return out;
  }
  throw StepError("implicit midpoint stage did not converge after " +
                      std::to_string(newton.max_iter) + " Newton iterations (residual " +
                      std::to_string(max_abs(g)) + ")",
                  max_abs(g));
}

VectorField phs_vector_field(const Ensemble& like, const ModelSpec& model) {
  model.check(like);
  return [like, model](std::span<const double> z, std::span<double> dz) {
    const auto rhs = phs_rhs(like.with_state(z), model);
    std::copy(rhs.begin(), rhs.end(), dz.begin());
  };
}

Ensemble advance(const Ensemble& ens, const ModelSpec& model, Scheme scheme, double dt,
                 const NewtonOptions& newton) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  const auto field = phs_vector_field(ens, model);
  const auto z = ens.state();
  const auto next =
      scheme == Scheme::rk4 ? rk4_step(field, z, dt) : implicit_midpoint_step(field, z, dt, newton);
  return ens.with_state(next);
}

DiagnosticsRecord diagnose(const Ensemble& ens, const ModelSpec& model, double t) {
  DiagnosticsRecord rec;
  rec.t = t;
  rec.hamiltonian = hamiltonian(ens, model.potential);
  const auto structure = assemble_damping(ens, model.damping);
  const auto off = ens.velocity_offset();
  std::vector<double> u(ens.n * ens.d);
  for (std::size_t i = 0; i < ens.n; ++i)
    for (std::size_t k = 0; k < ens.d; ++k)
      u[i * ens.d + k] = ens.velocities[i * ens.d + k] - off[k];
  rec.dissipation_rate = structure.quadratic_form(u);
  rec.mean_velocity = ens.mean_velocity();
  double drift2 = 0.0;
  for (std::size_t k = 0; k < ens.d; ++k) {
    const double dv = rec.mean_velocity[k] - ens.reference_mean_velocity[k];
    drift2 += dv * dv;
  }
  rec.mean_velocity_drift = std::sqrt(drift2);
  rec.lasalle_residual = lasalle_residual_about(ens, model.potential, ens.reference_mean_velocity);
  if (structure.is_friction())
    rec.lambda2 = ens.n >= 2 ? *structure.friction : 0.0;
  else
    rec.lambda2 = second_smallest_eigenvalue(structure.damping, ens.n);
  return rec;
}

std::vector<double> integrate_field(const VectorField& f, std::vector<double> z,
                                    const IntegratorConfig& cfg, const RecordCallback& on_record) {
  cfg.validate();
  const std::size_t steps = cfg.steps();
  if (on_record) on_record(0, 0.0, z);
  for (std::size_t k = 1; k <= steps; ++k) {
    z = cfg.scheme == Scheme::rk4 ? rk4_step(f, z, cfg.dt)
                                  : implicit_midpoint_step(f, z, cfg.dt, cfg.newton);
    if (!std::all_of(z.begin(), z.end(), [](double x) { return std::isfinite(x); }))
      throw DivergenceError("non-finite state at step " + std::to_string(k) +
                                " (t = " + std::to_string(static_cast<double>(k) * cfg.dt) + ")",
                            k);
    if (on_record && (k % cfg.record_every == 0 || k == steps))
      on_record(k, static_cast<double>(k) * cfg.dt, z);
  }
  return z;
}

namespace {

Ensemble run(const Ensemble& ens0, const ModelSpec& model, const IntegratorConfig& cfg,
             const RecordCallback& on_record) {
  cfg.validate();
  model.check(ens0);
  ens0.validate();
  return ens0.with_state(
      integrate_field(phs_vector_field(ens0, model), ens0.state(), cfg, on_record));
}

}  // namespace

TrajectoryRecord simulate(const Ensemble& ens0, const ModelSpec& model,
                          const IntegratorConfig& cfg) {
  TrajectoryRecord traj;
  run(ens0, model, cfg, [&](std::size_t, double t, std::span<const double> z) {
    Ensemble e = ens0.with_state(z);
    traj.times.push_back(t);
    traj.diagnostics.push_back(diagnose(e, model, t));
    traj.states.push_back(std::move(e));
  });
  return traj;
}

Ensemble evolve(const Ensemble& ens0, const ModelSpec& model, const IntegratorConfig& cfg) {
  return run(ens0, model, cfg, nullptr);
}

}  // namespace phs
