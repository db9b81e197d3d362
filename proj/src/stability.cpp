#include "phs/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phs/errors.hpp"
#include "phs/pairwise.hpp"
#include "phs/phs_core.hpp"
#include "phs/sampling.hpp"

namespace phs {

double lasalle_residual_about(const Ensemble& ens, const PotentialSpec& potential,
                              std::span<const double> vbar) {
  if (vbar.size() != ens.d) throw DimensionError("vbar must have d components");
  std::vector<double> force(ens.n * ens.d);
  pairwise::potential_force(ens.positions, ens.n, ens.d, potential, force);
  double total = 0.0;
  for (std::size_t i = 0; i < ens.n; ++i)
    for (std::size_t k = 0; k < ens.d; ++k) {
      const double u = ens.velocities[i * ens.d + k] - vbar[k];
      total += u * u + force[i * ens.d + k] * force[i * ens.d + k];
    }
  return std::sqrt(total);
}

double lasalle_residual(const Ensemble& ens, const PotentialSpec& potential) {
  if (ens.frame != Frame::centered)
    throw FrameError("lasalle_residual is defined in the centered frame");
  return lasalle_residual_about(ens, potential, ens.reference_mean_velocity);
}

double velocity_deviation_sq(const Ensemble& ens) {
  double s = 0.0;
  for (std::size_t i = 0; i < ens.n; ++i)
    for (std::size_t k = 0; k < ens.d; ++k) {
      const double u = ens.velocities[i * ens.d + k] - ens.reference_mean_velocity[k];
      s += u * u;
    }
  return s;
}

double gronwall_envelope(double v0_dev_sq, double grad_sup, double lambda2, double epsilon,
                         double t) {
  if (!(epsilon > 0.0) || !(epsilon < 2.0 * lambda2))
    throw ParameterError("Gronwall envelope needs 0 < epsilon < 2 lambda2");
  if (!(v0_dev_sq >= 0.0) || !(grad_sup >= 0.0) || !(t >= 0.0))
    throw ParameterError("Gronwall envelope arguments must be nonnegative");
  const double alpha = v0_dev_sq + (t / epsilon) * grad_sup * grad_sup;
  return alpha * std::exp(-(2.0 * lambda2 - epsilon) * t);
}

double fit_decay_rate(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw SizeError("times and values differ in length");
  if (times.size() < 3) throw ParameterError("decay fit needs at least 3 samples");
  const auto m = static_cast<double>(times.size());
  double tm = 0.0, ym = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(values[k] > 0.0)) throw DomainError("decay fit needs strictly positive values");
    tm += times[k];
    ym += -std::log(values[k]);
  }
  tm /= m;
  ym /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double dt = times[k] - tm;
    sxy += dt * (-std::log(values[k]) - ym);
    sxx += dt * dt;
  }
  if (!(sxx > 0.0)) throw ParameterError("decay fit needs distinct sample times");
  return sxy / sxx;
}

DecayReport check_flocking(const TrajectoryRecord& traj, const PotentialSpec& potential,
                           std::optional<double> epsilon) {
  if (traj.size() < 10) throw ParameterError("flocking check needs at least 10 records");
  if (traj.diagnostics.size() != traj.size() || traj.states.size() != traj.size())
    throw SizeError("trajectory record is inconsistent");
  if (!potential.grad_sup_bound)
    throw ParameterError("flocking check needs a known bound on |grad V|");

  DecayReport rep;
  rep.records = traj.size();
  rep.lambda2_min = std::numeric_limits<double>::infinity();
  for (const auto& d : traj.diagnostics) rep.lambda2_min = std::min(rep.lambda2_min, d.lambda2);
  if (!(rep.lambda2_min > 0.0))
    throw ParameterError("lambda2 vanishes along the trajectory; the alignment kernel must be "
                         "strictly positive");
  rep.epsilon = epsilon.value_or(0.5 * rep.lambda2_min);
  if (!(rep.epsilon > 0.0) || !(rep.epsilon < 2.0 * rep.lambda2_min))
    throw ParameterError("flocking check needs 0 < epsilon < 2 lambda2_min");

  const auto n = static_cast<double>(traj.states.front().n);
  rep.grad_sup = std::sqrt(n) * *potential.grad_sup_bound;

  const double t0 = traj.times.front();
  const double dev0 = velocity_deviation_sq(traj.states.front());
  std::vector<double> ts, vals;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k] - t0;
    const double dev = velocity_deviation_sq(traj.states[k]);
    const double env = gronwall_envelope(dev0, rep.grad_sup, rep.lambda2_min, rep.epsilon, t);
    if (dev > env) ++rep.envelope_violations;
    if (env > 0.0) rep.max_envelope_ratio = std::max(rep.max_envelope_ratio, dev / env);
    if (dev > 0.0) {
      ts.push_back(traj.times[k]);
      vals.push_back(dev);
    }
  }
  if (ts.size() >= 3) rep.fitted_rate = fit_decay_rate(ts, vals);
  rep.final_residual = traj.diagnostics.back().lasalle_residual;
  return rep;
}

CasimirResult casimir_test(const CasimirCandidate& cand, const ModelSpec& model,
                           std::size_t sample_count, std::uint64_t seed, double tol) {
  if (sample_count == 0) throw ParameterError("sample_count must be positive");
  const std::size_t n = model.n;
  const std::size_t d = model.d;
  const std::size_t nd = n * d;

  // Sample set fixed before any evaluation.
  Rng rng(seed);
  std::vector<Ensemble> samples;
  samples.reserve(sample_count);
  for (std::size_t s = 0; s < sample_count; ++s) {
    std::vector<double> pos(nd), vel(nd);
    for (auto& x : pos) x = rng.normal();
    for (auto& x : vel) x = rng.normal();
    samples.push_back(Ensemble::from_data(n, d, std::move(pos), std::move(vel)));
  }

  CasimirResult res;
  res.name = cand.name;
  std::vector<double> damped(nd);
  for (const auto& ens : samples) {
    model.check(ens);
    const auto z = ens.state();
    const auto g = cand.gradient(z);
    if (g.size() != z.size())
      throw DimensionError("Casimir candidate gradient has the wrong length");
    std::span<const double> g_r(g.data(), nd);
    std::span<const double> g_v(g.data() + nd, nd);
    // g^T (J - R) = (-g_v, g_r - R_v g_v)
    assemble_damping(ens, model.damping).apply(g_v, damped);
    double r2 = 0.0;
    for (std::size_t q = 0; q < nd; ++q) {
      r2 += g_v[q] * g_v[q];
      const double c = g_r[q] - damped[q];
      r2 += c * c;
    }
    res.max_residual = std::max(res.max_residual, std::sqrt(r2));
  }
  res.passed = res.max_residual <= tol;
  return res;
}

std::vector<CasimirCandidate> casimir_battery() {
  std::vector<CasimirCandidate> out;
  out.push_back({"constant", [](std::span<const double> z) {
                   return std::vector<double>(z.size(), 0.0);
                 }});
  out.push_back({"sum_v", [](std::span<const double> z) {
                   std::vector<double> g(z.size(), 0.0);
                   std::fill(g.begin() + static_cast<std::ptrdiff_t>(z.size() / 2), g.end(), 1.0);
                   return g;
                 }});
  out.push_back({"sum_r", [](std::span<const double> z) {
                   std::vector<double> g(z.size(), 0.0);
                   std::fill(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(z.size() / 2), 1.0);
                   return g;
                 }});
  out.push_back({"kinetic", [](std::span<const double> z) {
                   std::vector<double> g(z.size(), 0.0);
                   const std::size_t h = z.size() / 2;
                   for (std::size_t q = 0; q < h; ++q) g[h + q] = 2.0 * z[h + q];
                   return g;
                 }});
  out.push_back({"r_dot_v", [](std::span<const double> z) {
                   std::vector<double> g(z.size(), 0.0);
                   const std::size_t h = z.size() / 2;
                   for (std::size_t q = 0; q < h; ++q) {
                     g[q] = z[h + q];
                     g[h + q] = z[q];
                   }
                   return g;
                 }});
  return out;
}

}  // namespace phs
