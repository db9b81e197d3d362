#pragma once

#include <cstddef>
#include <span>

#include "phs/kernels.hpp"

namespace phs {

/// Selects the implementation of the O(N^2) pair sums. Both produce bitwise
/// identical results: every row is reduced over j in ascending order.
enum class Execution { parallel, serial_reference };

/// OpenMP kernels. Pair terms are evaluated once for i < j into a scratch table
/// (rows distributed over threads), then each row is reduced independently.
namespace pairwise {

/// n x n row-major damping matrix: off-diagonal -psi(|p_i - p_j|) / n, diagonal the
/// negated sum of the row's off-diagonals.
void damping_matrix(std::span<const double> pos, std::size_t n, std::size_t d,
                    const KernelSpec& kernel, std::span<double> out);

/// out_i = (1/n) sum_j grad V(p_i - p_j)
void potential_force(std::span<const double> pos, std::size_t n, std::size_t d,
                     const PotentialSpec& potential, std::span<double> out);

/// out_i = (1/n) sum_j psi(|p_j - p_i|) (v_j - v_i)
void alignment_force(std::span<const double> pos, std::span<const double> vel, std::size_t n,
                     std::size_t d, const KernelSpec& kernel, std::span<double> out);

/// out_i = sum_{j != i} M_ij (u_j - u_i), applied coordinate-wise to n x d data.
/// Exactly zero on constant u when M has zero row sums.
void laplacian_apply(std::span<const double> matrix, std::size_t n, std::size_t d,
                     std::span<const double> u, std::span<double> out);

}  // namespace pairwise

/// Straightforward double loops evaluating every ordered pair directly. Kept as
/// the oracle for the parallel kernels and as the benchmark baseline.
namespace reference {

void damping_matrix(std::span<const double> pos, std::size_t n, std::size_t d,
                    const KernelSpec& kernel, std::span<double> out);
void potential_force(std::span<const double> pos, std::size_t n, std::size_t d,
                     const PotentialSpec& potential, std::span<double> out);
void alignment_force(std::span<const double> pos, std::span<const double> vel, std::size_t n,
                     std::size_t d, const KernelSpec& kernel, std::span<double> out);
void laplacian_apply(std::span<const double> matrix, std::size_t n, std::size_t d,
                     std::span<const double> u, std::span<double> out);

}  // namespace reference

namespace detail {

inline double squared_distance(const double* a, const double* b, std::size_t d) noexcept {
  double s2 = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    s2 += diff * diff;
  }
  return s2;
}

/// grad V(a - b) written to out[0..d). Odd in (a - b) bit for bit.
void potential_gradient_pair(const PotentialSpec& potential, const double* a, const double* b,
                             std::size_t d, double* out) noexcept;

}  // namespace detail

}  // namespace phs
