#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "phs/ensemble.hpp"
#include "phs/integrate.hpp"
#include "phs/phs_core.hpp"

namespace phs {

/// Mass subsystem: state (x_i, v_i), input force f_i, output y_i = v_i.
struct MassPort {
  std::size_t index = 0;
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> input;

  const std::vector<double>& output() const { return velocity; }
  /// (1/2) |v_i - vbar|^2
  double energy(std::span<const double> vbar) const;
};

/// Spring-damper between masses i < j with q_ij = x_i - x_j and v_ij = v_i - v_j.
struct SpringDamperPort {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<double> q;
  std::vector<double> v;
  std::vector<double> grad;  // grad V(q_ij)
  double psi = 0.0;          // psi(|q_ij|)
  double energy = 0.0;       // V(q_ij)

  /// (grad V(q_ij), -grad V(q_ij))
  std::pair<std::vector<double>, std::vector<double>> output() const;
  /// e_ij = grad V(q_ij) + psi(|q_ij|) v_ij
  std::vector<double> effort() const;
};

struct ComposedNetwork {
  std::vector<MassPort> masses;
  std::vector<SpringDamperPort> springs;  // lexicographic (i, j), i < j
  StructureMatrices structure;
  double hamiltonian = 0.0;
  /// f_i = -(1/n) sum_j e_ij after interconnection, flat n * d.
  std::vector<double> forces;
};

/// Builds the particle system from n mass ports and n(n-1)/2 spring-damper ports and
/// interconnects them. The damping block and Hamiltonian use the same arithmetic as
/// assemble_damping and hamiltonian, so they agree exactly.
ComposedNetwork compose_network(std::size_t n, const ModelSpec& model, const Ensemble& state);

struct MergedSystem {
  Ensemble ensemble;
  ModelSpec model;
};

/// One system of size n_a + n_b with 1/(n_a + n_b) normalization. Both inputs must share
/// d and frame; the reference mean velocity is recomputed from the merged data.
MergedSystem couple_identical(const Ensemble& a, const Ensemble& b, const ModelSpec& model);

/// Two species with their own kernels and potentials and a shared cross kernel psi_c.
/// Cross sums of species k are normalized by the size of the partner species.
struct SpeciesCouplingSpec {
  ModelSpec first;
  ModelSpec second;
  KernelSpec cross;

  void validate() const;
  bool operator==(const SpeciesCouplingSpec&) const = default;
};

/// Full 2N x 2N damping block [[Psi_1, Psi_c], [Psi_c^T, Psi_2]] for equal species sizes.
/// Throws SizeError on unequal sizes.
StructureMatrices assemble_coupled_structure(const SpeciesCouplingSpec& spec, const Ensemble& a,
                                             const Ensemble& b);

/// Symmetric damping block of the energy-weighted system. Coincides with
/// assemble_coupled_structure for equal sizes; for N_1 != N_2 species k carries the
/// weight w_k = ((N_1 + N_2) / 2) / N_k.
StructureMatrices coupled_weighted_structure(const SpeciesCouplingSpec& spec, const Ensemble& a,
                                             const Ensemble& b);

/// w_1 H_1 + w_2 H_2 (w = 1 for equal sizes). The cross kernel adds no energy.
double coupled_hamiltonian(const SpeciesCouplingSpec& spec, const Ensemble& a, const Ensemble& b);

/// -dH/dt of the coupled energy: u^T (W Psi) u >= 0.
double coupled_dissipation_rate(const SpeciesCouplingSpec& spec, const Ensemble& a,
                                const Ensemble& b);

/// Right-hand side on the flat state [z_1, z_2].
std::vector<double> coupled_rhs(const SpeciesCouplingSpec& spec, const Ensemble& a,
                                const Ensemble& b);

struct CoupledTrajectory {
  std::vector<double> times;
  std::vector<Ensemble> first;
  std::vector<Ensemble> second;
  std::vector<DiagnosticsRecord> diagnostics;

  std::size_t size() const { return times.size(); }
};

/// Integrates the coupled system. Both species must be in the absolute frame. The
/// diagnostics mean velocity is (vbar_1 + vbar_2) / 2, which the flow conserves.
CoupledTrajectory simulate_coupled(const SpeciesCouplingSpec& spec, const Ensemble& a0,
                                   const Ensemble& b0, const IntegratorConfig& cfg);

}  // namespace phs
