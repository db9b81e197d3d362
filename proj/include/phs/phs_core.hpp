#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "phs/ensemble.hpp"
#include "phs/kernels.hpp"
#include "phs/pairwise.hpp"

namespace phs {

/// Damping block of the port-Hamiltonian form z' = (J - R(z)) dH/dz with
/// J = [[0, I], [-I, 0]] (implicit, never stored) and R(z) = diag(0, Psi(z) (x) I_d).
///
/// Psi is kept as an n x n scalar matrix acting blockwise on stacked R^{nd}
/// vectors. With uniform friction the block is gamma I and no matrix is stored.
struct StructureMatrices {
  std::size_t n = 0;
  std::size_t d = 0;
  /// Row-major n x n Laplacian; empty for uniform friction.
  std::vector<double> damping;
  std::optional<double> friction;

  bool is_friction() const { return friction.has_value(); }
  double entry(std::size_t i, std::size_t j) const;
  /// Dense n x n scalar matrix (gamma I for friction).
  std::vector<double> dense() const;

  /// out = (Psi (x) I_d) u. The Laplacian is applied as sum_{j != i} Psi_ij (u_j - u_i),
  /// so constant vectors map to exactly zero.
  void apply(std::span<const double> u, std::span<double> out,
             Execution exec = Execution::parallel) const;
  std::vector<double> apply(std::span<const double> u, Execution exec = Execution::parallel) const;

  /// u^T (Psi (x) I_d) u through the pair identity (1/2) sum_ij |Psi_ij| |u_i - u_j|^2,
  /// nonnegative by construction.
  double quadratic_form(std::span<const double> u) const;
};

/// Psi(z) for the given kernel. Diagonal excludes j = i, so rows sum to zero.
StructureMatrices assemble_psi(const Ensemble& ens, const KernelSpec& kernel,
                               Execution exec = Execution::parallel);
StructureMatrices assemble_damping(const Ensemble& ens, const DampingSpec& damping,
                                   Execution exec = Execution::parallel);

/// H = (1/2) sum_i [ |v_i - vbar|^2 + (1/N) sum_j V(p_i - p_j) ], self terms j = i included.
/// vbar is the reference mean velocity in the centered frame and 0 in the absolute frame.
double hamiltonian(const Ensemble& ens, const PotentialSpec& potential,
                   Execution exec = Execution::parallel);

/// Flat 2nd vector: position block (1/N) sum_j grad V(p_i - p_j), velocity block v_i - vbar.
std::vector<double> hamiltonian_gradient(const Ensemble& ens, const PotentialSpec& potential,
                                         Execution exec = Execution::parallel);

/// Accelerations F_i of the direct (x, v) form.
std::vector<double> force_field(const Ensemble& ens, const ModelSpec& model,
                                Execution exec = Execution::parallel);

/// Direct right-hand side (p' = v - vbar, v' = F) as a flat 2nd vector.
std::vector<double> direct_rhs(const Ensemble& ens, const ModelSpec& model,
                               Execution exec = Execution::parallel);

/// (J - R(z)) dH/dz assembled from assemble_damping and hamiltonian_gradient.
std::vector<double> phs_rhs(const Ensemble& ens, const ModelSpec& model,
                            Execution exec = Execution::parallel);

/// <v - 1 vbar, R_v (v - 1 vbar)> >= 0, i.e. -dH/dt along the flow.
double dissipation_rate(const Ensemble& ens, const DampingSpec& damping,
                        Execution exec = Execution::parallel);

}  // namespace phs
