#include "phs/ports.hpp"

#include <algorithm>
#include <cmath>

#include "phs/errors.hpp"
#include "phs/pairwise.hpp"
#include "phs/spectrum.hpp"
#include "phs/stability.hpp"

namespace phs {

double MassPort::energy(std::span<const double> vbar) const {
  double kin = 0.0;
  for (std::size_t k = 0; k < velocity.size(); ++k) {
    const double u = velocity[k] - vbar[k];
    kin += u * u;
  }
  return 0.5 * kin;
}

std::pair<std::vector<double>, std::vector<double>> SpringDamperPort::output() const {
  std::vector<double> neg(grad.size());
  for (std::size_t k = 0; k < grad.size(); ++k) neg[k] = -grad[k];
  return {grad, neg};
}

std::vector<double> SpringDamperPort::effort() const {
  std::vector<double> e(grad.size());
  for (std::size_t k = 0; k < grad.size(); ++k) e[k] = grad[k] + psi * v[k];
  return e;
}

ComposedNetwork compose_network(std::size_t n, const ModelSpec& model, const Ensemble& state) {
  if (state.n != n) throw SizeError("state size differs from the requested network size");
  model.check(state);
  const std::size_t d = state.d;
  const double nd = static_cast<double>(n);
  const auto off = state.velocity_offset();
  const KernelSpec kernel = model.kernel();

  ComposedNetwork net;
  net.masses.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& m = net.masses[i];
    m.index = i;
    m.position.assign(state.position(i).begin(), state.position(i).end());
    m.velocity.assign(state.velocity(i).begin(), state.velocity(i).end());
    m.input.assign(d, 0.0);
  }

  // Spring-damper ports, one per unordered pair.
  net.springs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      SpringDamperPort sd;
      sd.i = i;
      sd.j = j;
      sd.q.resize(d);
      sd.v.resize(d);
      for (std::size_t k = 0; k < d; ++k) {
        sd.q[k] = state.positions[i * d + k] - state.positions[j * d + k];
        sd.v[k] = state.velocities[i * d + k] - state.velocities[j * d + k];
      }
      sd.grad = eval_potential_gradient(model.potential, sd.q);
      sd.psi = alignment_from_squared(
          kernel, detail::squared_distance(&state.positions[i * d], &state.positions[j * d], d));
      sd.energy = eval_potential(model.potential, sd.q);
      net.springs.push_back(std::move(sd));
    }
  auto pair_index = [n](std::size_t i, std::size_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  };

  // Interconnection f_i = -sum_j e_ij (e_ji = -e_ij), normalized by n.
  net.forces.assign(n * d, 0.0);
  for (const auto& sd : net.springs) {
    const auto e = sd.effort();
    for (std::size_t k = 0; k < d; ++k) {
      net.forces[sd.i * d + k] -= e[k];
      net.forces[sd.j * d + k] += e[k];
    }
  }
  for (auto& f : net.forces) f /= nd;
  if (model.damping.is_friction())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < d; ++k)
        net.forces[i * d + k] -= model.damping.gamma() * (state.velocities[i * d + k] - off[k]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) net.masses[i].input[k] = net.forces[i * d + k];

  // Damping block from the port dampers.
  net.structure.n = n;
  net.structure.d = d;
  if (model.damping.is_friction()) {
    net.structure.friction = model.damping.gamma();
  } else {
    auto& M = net.structure.damping;
    M.assign(n * n, 0.0);
    for (const auto& sd : net.springs) {
      const double w = -(sd.psi / nd);
      M[sd.i * n + sd.j] = w;
      M[sd.j * n + sd.i] = w;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) acc += M[i * n + j];
      M[i * n + i] = -acc;
    }
  }

  // Storage: mass energies plus spring energies, the self term V(0) included per mass.
  std::vector<double> zero(d, 0.0);
  const double self = eval_potential(model.potential, zero);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double kin = 2.0 * net.masses[i].energy(off);
    double pot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i)
        pot += self;
      else
        pot += net.springs[j < i ? pair_index(j, i) : pair_index(i, j)].energy;
    }
    total += kin + pot / nd;
  }
  net.hamiltonian = 0.5 * total;
  return net;
}

MergedSystem couple_identical(const Ensemble& a, const Ensemble& b, const ModelSpec& model) {
  if (a.d != b.d) throw DimensionError("merged systems must share the space dimension");
  if (a.frame != b.frame) throw FrameError("merged systems must share the frame");
  a.validate();
  b.validate();
  std::vector<double> pos(a.positions), vel(a.velocities);
  pos.insert(pos.end(), b.positions.begin(), b.positions.end());
  vel.insert(vel.end(), b.velocities.begin(), b.velocities.end());
  Ensemble merged = Ensemble::from_data(a.n + b.n, a.d, std::move(pos), std::move(vel));
  if (a.frame == Frame::centered) merged = shift_to_center(merged).ensemble;
  ModelSpec m = model;
  m.n = merged.n;
  m.d = merged.d;
  return {std::move(merged), std::move(m)};
}

void SpeciesCouplingSpec::validate() const {
  first.potential.validate();
  second.potential.validate();
  first.damping.validate();
  second.damping.validate();
  cross.validate();
  if (first.d != second.d) throw DimensionError("species must share the space dimension");
  if (first.damping.is_friction() || second.damping.is_friction())
    throw ParameterError("species coupling needs alignment damping in both species");
  first.potential.check_dimension(first.d);
  second.potential.check_dimension(second.d);
}

namespace {

void check_species(const SpeciesCouplingSpec& spec, const Ensemble& a, const Ensemble& b) {
  spec.validate();
  spec.first.check(a);
  spec.second.check(b);
  if (a.frame != Frame::absolute || b.frame != Frame::absolute)
    throw FrameError("coupled species are simulated in the absolute frame");
}

double weight(std::size_t nk, std::size_t n1, std::size_t n2) {
  return n1 == n2 ? 1.0 : 0.5 * static_cast<double>(n1 + n2) / static_cast<double>(nk);
}

// Cross contribution of species k: (1/N_l) sum_j psi_c(|x_i - y_j|)(v_i - w_j).
void cross_alignment(const KernelSpec& cross, const Ensemble& self, const Ensemble& other,
                     std::span<double> out) {
  const std::size_t d = self.d;
  const double nl = static_cast<double>(other.n);
  for (std::size_t i = 0; i < self.n; ++i) {
    double* o = &out[i * d];
    for (std::size_t k = 0; k < d; ++k) o[k] = 0.0;
    for (std::size_t j = 0; j < other.n; ++j) {
      const double psi = alignment_from_squared(
          cross, detail::squared_distance(&self.positions[i * d], &other.positions[j * d], d));
      for (std::size_t k = 0; k < d; ++k)
        o[k] += psi * (self.velocities[i * d + k] - other.velocities[j * d + k]);
    }
    for (std::size_t k = 0; k < d; ++k) o[k] /= nl;
  }
}

StructureMatrices coupled_block(const SpeciesCouplingSpec& spec, const Ensemble& a,
                                const Ensemble& b) {
  const std::size_t n1 = a.n, n2 = b.n, n = n1 + n2, d = a.d;
  const double w1 = weight(n1, n1, n2), w2 = weight(n2, n1, n2);
  // w_k / N_l, symmetric in k and l
  const double wc = w1 / static_cast<double>(n2);

  StructureMatrices s;
  s.n = n;
  s.d = d;
  s.damping.assign(n * n, 0.0);
  auto& M = s.damping;
  const auto psi1 = assemble_psi(a, spec.first.kernel());
  const auto psi2 = assemble_psi(b, spec.second.kernel());
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      if (i != j) M[i * n + j] = n1 == n2 ? psi1.damping[i * n1 + j] : w1 * psi1.damping[i * n1 + j];
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      if (i != j)
        M[(n1 + i) * n + n1 + j] =
            n1 == n2 ? psi2.damping[i * n2 + j] : w2 * psi2.damping[i * n2 + j];
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const double psi = alignment_from_squared(
          spec.cross, detail::squared_distance(&a.positions[i * d], &b.positions[j * d], d));
      const double e = n1 == n2 ? -(psi / static_cast<double>(n2)) : -(wc * psi);
      M[i * n + n1 + j] = e;
      M[(n1 + j) * n + i] = e;
    }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) acc += M[i * n + j];
    M[i * n + i] = -acc;
  }
  return s;
}

Ensemble concat(const Ensemble& a, const Ensemble& b) {
  std::vector<double> pos(a.positions), vel(a.velocities);
  pos.insert(pos.end(), b.positions.begin(), b.positions.end());
  vel.insert(vel.end(), b.velocities.begin(), b.velocities.end());
  Ensemble e;
  e.n = a.n + b.n;
  e.d = a.d;
  e.positions = std::move(pos);
  e.velocities = std::move(vel);
  e.frame = Frame::absolute;
  e.reference_mean_velocity.assign(a.d, 0.0);
  return e;
}

std::vector<double> conserved_mean(const Ensemble& a, const Ensemble& b) {
  auto m1 = a.mean_velocity();
  const auto m2 = b.mean_velocity();
  for (std::size_t k = 0; k < m1.size(); ++k) m1[k] = 0.5 * (m1[k] + m2[k]);
  return m1;
}

}  // namespace

StructureMatrices assemble_coupled_structure(const SpeciesCouplingSpec& spec, const Ensemble& a,
                                             const Ensemble& b) {
  if (a.n != b.n) throw SizeError("coupled structure needs equal species sizes");
  check_species(spec, a, b);
  return coupled_block(spec, a, b);
}

StructureMatrices coupled_weighted_structure(const SpeciesCouplingSpec& spec, const Ensemble& a,
                                             const Ensemble& b) {
  check_species(spec, a, b);
  return coupled_block(spec, a, b);
}

double coupled_hamiltonian(const SpeciesCouplingSpec& spec, const Ensemble& a, const Ensemble& b) {
  check_species(spec, a, b);
  const double h1 = hamiltonian(a, spec.first.potential);
  const double h2 = hamiltonian(b, spec.second.potential);
  if (a.n == b.n) return h1 + h2;
  return weight(a.n, a.n, b.n) * h1 + weight(b.n, a.n, b.n) * h2;
}

double coupled_dissipation_rate(const SpeciesCouplingSpec& spec, const Ensemble& a,
                                const Ensemble& b) {
  check_species(spec, a, b);
  const auto s = coupled_block(spec, a, b);
  return s.quadratic_form(concat(a, b).velocities);
}

std::vector<double> coupled_rhs(const SpeciesCouplingSpec& spec, const Ensemble& a,
                                const Ensemble& b) {
  check_species(spec, a, b);
  auto r1 = phs_rhs(a, spec.first);
  auto r2 = phs_rhs(b, spec.second);
  if (!spec.cross.is_zero()) {
    const std::size_t nd1 = a.n * a.d, nd2 = b.n * b.d;
    std::vector<double> c1(nd1), c2(nd2);
    cross_alignment(spec.cross, a, b, c1);
    cross_alignment(spec.cross, b, a, c2);
    for (std::size_t q = 0; q < nd1; ++q) r1[nd1 + q] -= c1[q];
    for (std::size_t q = 0; q < nd2; ++q) r2[nd2 + q] -= c2[q];
  }
  r1.insert(r1.end(), r2.begin(), r2.end());
  return r1;
}

CoupledTrajectory simulate_coupled(const SpeciesCouplingSpec& spec, const Ensemble& a0,
                                   const Ensemble& b0, const IntegratorConfig& cfg) {
  check_species(spec, a0, b0);
  a0.validate();
  b0.validate();
  const std::size_t len1 = 2 * a0.n * a0.d;
  auto split = [&](std::span<const double> z) {
    return std::pair{a0.with_state(z.subspan(0, len1)), b0.with_state(z.subspan(len1))};
  };
  const VectorField field = [&](std::span<const double> z, std::span<double> dz) {
    const auto [a, b] = split(z);
    const auto r = coupled_rhs(spec, a, b);
    std::copy(r.begin(), r.end(), dz.begin());
  };

  const auto vbar0 = conserved_mean(a0, b0);
  std::vector<double> z0 = a0.state();
  const auto zb = b0.state();
  z0.insert(z0.end(), zb.begin(), zb.end());

  CoupledTrajectory traj;
  integrate_field(field, std::move(z0), cfg, [&](std::size_t, double t, std::span<const double> z) {
    auto [a, b] = split(z);
    DiagnosticsRecord rec;
    rec.t = t;
    rec.hamiltonian = coupled_hamiltonian(spec, a, b);
    const auto block = coupled_block(spec, a, b);
    rec.dissipation_rate = block.quadratic_form(concat(a, b).velocities);
    rec.mean_velocity = conserved_mean(a, b);
    double drift2 = 0.0;
    for (std::size_t k = 0; k < vbar0.size(); ++k) {
      const double dv = rec.mean_velocity[k] - vbar0[k];
      drift2 += dv * dv;
    }
    rec.mean_velocity_drift = std::sqrt(drift2);
    const double r1 = lasalle_residual_about(a, spec.first.potential, vbar0);
    const double r2 = lasalle_residual_about(b, spec.second.potential, vbar0);
    rec.lasalle_residual = std::sqrt(r1 * r1 + r2 * r2);
    rec.lambda2 = second_smallest_eigenvalue(block.damping, block.n);
    traj.times.push_back(t);
    traj.diagnostics.push_back(std::move(rec));
    traj.first.push_back(std::move(a));
    traj.second.push_back(std::move(b));
  });
  return traj;
}

}  // namespace phs
