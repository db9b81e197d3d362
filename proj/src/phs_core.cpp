#include "phs/phs_core.hpp"

#include <omp.h>

#include <cstdint>

#include "phs/errors.hpp"

namespace phs {

double StructureMatrices::entry(std::size_t i, std::size_t j) const {
  if (i >= n || j >= n) throw DimensionError("structure matrix index out of range");
  if (friction) return i == j ? *friction : 0.0;
  return damping[i * n + j];
}

std::vector<double> StructureMatrices::dense() const {
  if (!friction) return damping;
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = *friction;
  return m;
}

void StructureMatrices::apply(std::span<const double> u, std::span<double> out,
                              Execution exec) const {
  if (u.size() != n * d || out.size() != n * d)
    throw DimensionError("damping block applied to a vector of the wrong length");
  if (friction) {
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = *friction * u[k];
    return;
  }
  if (exec == Execution::parallel)
    pairwise::laplacian_apply(damping, n, d, u, out);
  else
    reference::laplacian_apply(damping, n, d, u, out);
}

std::vector<double> StructureMatrices::apply(std::span<const double> u, Execution exec) const {
  std::vector<double> out(u.size());
  apply(u, out, exec);
  return out;
}

double StructureMatrices::quadratic_form(std::span<const double> u) const {
  if (u.size() != n * d) throw DimensionError("quadratic form of a vector of the wrong length");
  if (friction) {
    double s = 0.0;
    for (double x : u) s += x * x;
    return *friction * s;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      row += -damping[i * n + j] * detail::squared_distance(&u[i * d], &u[j * d], d);
    }
    total += row;
  }
  return 0.5 * total;
}

StructureMatrices assemble_psi(const Ensemble& ens, const KernelSpec& kernel, Execution exec) {
  StructureMatrices s;
  s.n = ens.n;
  s.d = ens.d;
  s.damping.assign(ens.n * ens.n, 0.0);
  if (exec == Execution::parallel)
    pairwise::damping_matrix(ens.positions, ens.n, ens.d, kernel, s.damping);
  else
    reference::damping_matrix(ens.positions, ens.n, ens.d, kernel, s.damping);
  return s;
}

StructureMatrices assemble_damping(const Ensemble& ens, const DampingSpec& damping,
                                   Execution exec) {
  if (damping.is_friction()) {
    StructureMatrices s;
    s.n = ens.n;
    s.d = ens.d;
    s.friction = damping.gamma();
    return s;
  }
  return assemble_psi(ens, damping.kernel(), exec);
}

double hamiltonian(const Ensemble& ens, const PotentialSpec& potential, Execution exec) {
  potential.check_dimension(ens.d);
  const std::size_t n = ens.n;
  const std::size_t d = ens.d;
  const auto off = ens.velocity_offset();
  const double nd = static_cast<double>(n);
  std::vector<double> row_terms(n);
  std::vector<double> diff_buf(d);

  auto row_term = [&](std::size_t i, std::vector<double>& diff) {
    double kin = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double u = ens.velocities[i * d + k] - off[k];
      kin += u * u;
    }
    double pot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < d; ++k)
        diff[k] = ens.positions[i * d + k] - ens.positions[j * d + k];
      pot += eval_potential(potential, diff);
    }
    return kin + pot / nd;
  };

  if (exec == Execution::parallel) {
    const auto ni = static_cast<std::int64_t>(n);
#pragma omp parallel
    {
      std::vector<double> diff(d);
#pragma omp for schedule(static)
      for (std::int64_t ii = 0; ii < ni; ++ii)
        row_terms[static_cast<std::size_t>(ii)] = row_term(static_cast<std::size_t>(ii), diff);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) row_terms[i] = row_term(i, diff_buf);
  }
  double total = 0.0;
  for (double t : row_terms) total += t;
  return 0.5 * total;
}

std::vector<double> hamiltonian_gradient(const Ensemble& ens, const PotentialSpec& potential,
                                         Execution exec) {
  const std::size_t nd = ens.n * ens.d;
  std::vector<double> g(2 * nd);
  std::span<double> pos_block(g.data(), nd);
  if (exec == Execution::parallel)
    pairwise::potential_force(ens.positions, ens.n, ens.d, potential, pos_block);
  else
    reference::potential_force(ens.positions, ens.n, ens.d, potential, pos_block);
  const auto off = ens.velocity_offset();
  for (std::size_t i = 0; i < ens.n; ++i)
    for (std::size_t k = 0; k < ens.d; ++k)
      g[nd + i * ens.d + k] = ens.velocities[i * ens.d + k] - off[k];
  return g;
}

std::vector<double> force_field(const Ensemble& ens, const ModelSpec& model, Execution exec) {
  model.check(ens);
  const std::size_t nd = ens.n * ens.d;
  std::vector<double> pot(nd), f(nd);
  if (exec == Execution::parallel)
    pairwise::potential_force(ens.positions, ens.n, ens.d, model.potential, pot);
  else
    reference::potential_force(ens.positions, ens.n, ens.d, model.potential, pot);

  if (model.damping.is_friction()) {
    const double gamma = model.damping.gamma();
    const auto off = ens.velocity_offset();
    for (std::size_t i = 0; i < ens.n; ++i)
      for (std::size_t k = 0; k < ens.d; ++k)
        f[i * ens.d + k] = -gamma * (ens.velocities[i * ens.d + k] - off[k]) - pot[i * ens.d + k];
    return f;
  }
  if (exec == Execution::parallel)
    pairwise::alignment_force(ens.positions, ens.velocities, ens.n, ens.d, model.kernel(), f);
  else
    reference::alignment_force(ens.positions, ens.velocities, ens.n, ens.d, model.kernel(), f);
  for (std::size_t q = 0; q < nd; ++q) f[q] = f[q] - pot[q];
  return f;
}

std::vector<double> direct_rhs(const Ensemble& ens, const ModelSpec& model, Execution exec) {
  const std::size_t nd = ens.n * ens.d;
  const auto f = force_field(ens, model, exec);
  const auto off = ens.velocity_offset();
  std::vector<double> out(2 * nd);
  for (std::size_t i = 0; i < ens.n; ++i)
    for (std::size_t k = 0; k < ens.d; ++k)
      out[i * ens.d + k] = ens.velocities[i * ens.d + k] - off[k];
  std::copy(f.begin(), f.end(), out.begin() + static_cast<std::ptrdiff_t>(nd));
  return out;
}

std::vector<double> phs_rhs(const Ensemble& ens, const ModelSpec& model, Execution exec) {
  model.check(ens);
  const std::size_t nd = ens.n * ens.d;
  const auto grad = hamiltonian_gradient(ens, model.potential, exec);
  const auto structure = assemble_damping(ens, model.damping, exec);
  std::span<const double> dh_dr(grad.data(), nd);
  std::span<const double> dh_dv(grad.data() + nd, nd);

  std::vector<double> out(2 * nd);
  std::vector<double> damped(nd);
  structure.apply(dh_dv, damped, exec);
  for (std::size_t q = 0; q < nd; ++q) {
    out[q] = dh_dv[q];
    out[nd + q] = -dh_dr[q] - damped[q];
  }
  return out;
}

double dissipation_rate(const Ensemble& ens, const DampingSpec& damping, Execution exec) {
  const auto off = ens.velocity_offset();
  std::vector<double> u(ens.n * ens.d);
  for (std::size_t i = 0; i < ens.n; ++i)
    for (std::size_t k = 0; k < ens.d; ++k)
      u[i * ens.d + k] = ens.velocities[i * ens.d + k] - off[k];
  return assemble_damping(ens, damping, exec).quadratic_form(u);
}

}  // namespace phs
