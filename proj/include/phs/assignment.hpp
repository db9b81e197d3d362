#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phs {

/// Optimal solution of the linear assignment problem min sum_i C[i, sigma(i)]
/// together with the dual potentials that certify it.
struct Assignment {
  std::vector<std::size_t> row_to_col;
  double total_cost = 0.0;
  std::vector<double> row_potential;
  std::vector<double> col_potential;
};

/// Hungarian algorithm with potentials (shortest augmenting paths), O(m^3).
/// `cost` is row-major m x m with finite entries.
Assignment solve_assignment(std::span<const double> cost, std::size_t m);

struct CertificateCheck {
  /// max over (i, j) of u_i + v_j - C_ij (<= 0 up to rounding for a feasible dual)
  double dual_infeasibility = 0.0;
  /// |primal - dual|
  double duality_gap = 0.0;
  bool is_permutation = false;
};

/// Checks dual feasibility and strong duality of a solution; a permutation with
/// feasible duals and zero gap is optimal.
CertificateCheck verify_assignment(const Assignment& a, std::span<const double> cost,
                                   std::size_t m);

}  // namespace phs
