#include "phs/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "phs/assignment.hpp"
#include "phs/errors.hpp"
#include "phs/pairwise.hpp"

namespace phs {

std::vector<double> EmpiricalMeasure::mean_velocity() const {
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < d; ++k) mean[k] += velocity(i)[k];
  for (auto& x : mean) x /= static_cast<double>(m);
  return mean;
}

EmpiricalMeasure EmpiricalMeasure::select(std::span<const std::size_t> idx) const {
  EmpiricalMeasure out;
  out.m = idx.size();
  out.d = d;
  out.atoms.reserve(idx.size() * 2 * d);
  for (std::size_t i : idx) {
    if (i >= m) throw DimensionError("atom index out of range");
    const auto a = atom(i);
    out.atoms.insert(out.atoms.end(), a.begin(), a.end());
  }
  return out;
}

void EmpiricalMeasure::validate() const {
  if (m < 1) throw SizeError("empirical measure needs at least one atom");
  if (atoms.size() != m * 2 * d) throw DimensionError("atom storage has the wrong length");
  for (double x : atoms)
    if (!std::isfinite(x)) throw DomainError("empirical measure has a non-finite atom");
}

EmpiricalMeasure empirical_from_ensemble(const Ensemble& ens) {
  EmpiricalMeasure f;
  f.m = ens.n;
  f.d = ens.d;
  f.atoms.resize(ens.n * 2 * ens.d);
  for (std::size_t i = 0; i < ens.n; ++i) {
    std::copy_n(&ens.positions[i * ens.d], ens.d, &f.atoms[i * 2 * ens.d]);
    std::copy_n(&ens.velocities[i * ens.d], ens.d, &f.atoms[i * 2 * ens.d + ens.d]);
  }
  return f;
}

OTResult wasserstein2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  if (mu.m != nu.m) throw SizeError("wasserstein2 needs equal atom counts");
  if (mu.d != nu.d) throw DimensionError("measures live in different dimensions");
  mu.validate();
  nu.validate();
  const std::size_t m = mu.m;
  const std::size_t w = 2 * mu.d;
  std::vector<double> cost(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      cost[i * m + j] = detail::squared_distance(&mu.atoms[i * w], &nu.atoms[j * w], w);

  const auto a = solve_assignment(cost, m);
  OTResult r;
  r.matching = a.row_to_col;
  r.cost = a.total_cost / static_cast<double>(m);
  r.distance = std::sqrt(r.cost);
  r.dual_infeasibility = verify_assignment(a, cost, m).dual_infeasibility;
  return r;
}

double meanfield_hamiltonian(const EmpiricalMeasure& f, const PotentialSpec& potential) {
  f.validate();
  potential.check_dimension(f.d);
  const auto md = static_cast<double>(f.m);
  const auto vbar = f.mean_velocity();
  std::vector<double> diff(f.d);
  double kin = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < f.m; ++i) {
    for (std::size_t k = 0; k < f.d; ++k) {
      const double u = f.velocity(i)[k] - vbar[k];
      kin += u * u;
    }
    for (std::size_t j = 0; j < f.m; ++j) {
      for (std::size_t k = 0; k < f.d; ++k) diff[k] = f.position(i)[k] - f.position(j)[k];
      pot += eval_potential(potential, diff);
    }
  }
  return kin / (2.0 * md) + pot / (2.0 * md * md);
}

double meanfield_dissipation(const EmpiricalMeasure& f, const KernelSpec& kernel) {
  f.validate();
  const auto md = static_cast<double>(f.m);
  double total = 0.0;
  for (std::size_t i = 0; i < f.m; ++i)
    for (std::size_t j = 0; j < f.m; ++j) {
      if (i == j) continue;
      const double psi = alignment_from_squared(
          kernel, detail::squared_distance(f.position(i).data(), f.position(j).data(), f.d));
      total += psi * detail::squared_distance(f.velocity(i).data(), f.velocity(j).data(), f.d);
    }
  return total / (2.0 * md * md);
}

double velocity_variance(const EmpiricalMeasure& f) {
  f.validate();
  const auto vbar = f.mean_velocity();
  double s = 0.0;
  for (std::size_t i = 0; i < f.m; ++i)
    for (std::size_t k = 0; k < f.d; ++k) {
      const double u = f.velocity(i)[k] - vbar[k];
      s += u * u;
    }
  return s / static_cast<double>(f.m);
}

Ensemble perturb(const Ensemble& ens, double scale, std::uint64_t seed) {
  if (!(scale >= 0.0) || !std::isfinite(scale))
    throw ParameterError("perturbation scale must be nonnegative");
  if (scale == 0.0) return ens;
  Ensemble out = ens;
  Rng rng(seed);
  for (std::size_t i = 0; i < ens.n; ++i) {
    for (std::size_t k = 0; k < ens.d; ++k) out.positions[i * ens.d + k] += scale * rng.normal();
    for (std::size_t k = 0; k < ens.d; ++k) out.velocities[i * ens.d + k] += scale * rng.normal();
  }
  if (ens.frame == Frame::centered) {
    const auto mp = out.mean_position();
    for (std::size_t i = 0; i < ens.n; ++i)
      for (std::size_t k = 0; k < ens.d; ++k) out.positions[i * ens.d + k] -= mp[k];
  }
  out.reference_mean_velocity = out.mean_velocity();
  return out;
}

DobrushinReport dobrushin_experiment(const Ensemble& ens0, double perturbation_scale,
                                     const ModelSpec& model, const IntegratorConfig& cfg,
                                     std::uint64_t seed) {
  const Ensemble other = perturb(ens0, perturbation_scale, seed);
  const double w0 =
      wasserstein2(empirical_from_ensemble(ens0), empirical_from_ensemble(other)).distance;
  if (!(w0 > 0.0))
    throw DegeneracyError("the perturbed ensemble coincides with the original (W2 = 0)");

  const auto a = simulate(ens0, model, cfg);
  const auto b = simulate(other, model, cfg);

  DobrushinReport rep;
  rep.times = a.times;
  rep.initial_w2 = w0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double w = wasserstein2(empirical_from_ensemble(a.states[k]),
                                  empirical_from_ensemble(b.states[k]))
                         .distance;
    if (!std::isfinite(w))
      throw DivergenceError("W2 became non-finite at t = " + std::to_string(a.times[k]), k);
    rep.w2.push_back(w);
  }

  std::vector<double> logs(rep.w2.size());
  for (std::size_t k = 0; k < logs.size(); ++k) logs[k] = std::log(rep.w2[k] * rep.w2[k]);
  rep.fitted_rate = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < logs.size(); ++k)
    rep.fitted_rate =
        std::max(rep.fitted_rate, (logs[k + 1] - logs[k]) / (rep.times[k + 1] - rep.times[k]));
  if (!std::isfinite(rep.fitted_rate))
    throw DegeneracyError("growth rate is not finite (W2 collapsed to zero)");

  // W2^2 as a decaying quantity: its decay rate is minus the growth rate.
  std::vector<double> sq(rep.w2.size());
  for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = rep.w2[k] * rep.w2[k];
  if (sq.size() >= 3) rep.least_squares_rate = -fit_decay_rate(rep.times, sq);

  const double t0 = rep.times.front();
  for (std::size_t k = 0; k < sq.size(); ++k)
    rep.max_ratio = std::max(
        rep.max_ratio, std::exp(logs[k] - logs[0] - rep.fitted_rate * (rep.times[k] - t0)));
  return rep;
}

double median(std::vector<double> values) {
  if (values.empty()) throw SizeError("median of an empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  return values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

std::vector<ConvergenceRow> self_convergence(const ModelSpec& model, const EnsembleSampler& sampler,
                                             std::span<const std::size_t> n_list, double t_eval,
                                             std::size_t repeats, const IntegratorConfig& cfg,
                                             std::uint64_t seed) {
  if (repeats == 0) throw ParameterError("repeats must be positive");
  if (!(t_eval >= 0.0)) throw ParameterError("t_eval must be nonnegative");
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] == 0) throw ParameterError("particle counts must be positive");
    if (k > 0 && n_list[k] <= n_list[k - 1])
      throw ParameterError("particle counts must be increasing");
  }

  auto run = [&](const Ensemble& e) {
    if (t_eval == 0.0) return e;
    IntegratorConfig c = cfg;
    c.t_end = t_eval;
    return evolve(e, model.resized(e.n), c);
  };

  std::vector<ConvergenceRow> rows;
  for (std::size_t n : n_list) {
    ConvergenceRow row;
    row.n = n;
    for (std::size_t r = 0; r < repeats; ++r) {
      const std::uint64_t s = seed + r;
      const auto small = run(sampler(n, s));
      const auto large = run(sampler(2 * n, s));
      // mu_N with every atom doubled is the same measure on 2N equal-weight atoms.
      std::vector<std::size_t> twice(2 * n);
      for (std::size_t i = 0; i < 2 * n; ++i) twice[i] = i % n;
      const auto doubled = empirical_from_ensemble(small).select(twice);
      row.samples.push_back(wasserstein2(doubled, empirical_from_ensemble(large)).distance);
    }
    row.median_w2 = median(row.samples);
    rows.push_back(std::move(row));
  }
  return rows;
}

DecayReport meanfield_decay_check(const TrajectoryRecord& traj, double psi_lower, double grad_sup,
                                  double epsilon) {
  if (!(psi_lower > 0.0)) throw ParameterError("psi_lower must be positive");
  if (!(epsilon > 0.0) || !(epsilon < psi_lower))
    throw ParameterError("mean-field decay check needs 0 < epsilon < psi_lower");
  if (!(grad_sup >= 0.0)) throw ParameterError("grad_sup must be nonnegative");
  if (traj.size() < 1) throw ParameterError("empty trajectory");

  DecayReport rep;
  rep.records = traj.size();
  rep.lambda2_min = psi_lower;
  rep.epsilon = epsilon;
  rep.grad_sup = grad_sup;
  const double t0 = traj.times.front();
  const double var0 = velocity_variance(empirical_from_ensemble(traj.states.front()));
  std::vector<double> ts, vals;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k] - t0;
    const double var = velocity_variance(empirical_from_ensemble(traj.states[k]));
    const double env =
        (var0 + grad_sup * grad_sup / epsilon) * std::exp(-(psi_lower - epsilon) * t);
    if (var > env) ++rep.envelope_violations;
    if (env > 0.0) rep.max_envelope_ratio = std::max(rep.max_envelope_ratio, var / env);
    if (var > 0.0) {
      ts.push_back(traj.times[k]);
      vals.push_back(var);
    }
  }
  if (ts.size() >= 3) rep.fitted_rate = fit_decay_rate(ts, vals);
  rep.final_residual = traj.diagnostics.empty() ? 0.0 : traj.diagnostics.back().lasalle_residual;
  return rep;
}

}  // namespace phs
