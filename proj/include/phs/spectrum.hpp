#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phs {

/// Eigenvalues of a symmetric row-major n x n matrix, ascending. Throws InputError
/// when |M_ij - M_ji| exceeds symmetry_tol.
std::vector<double> symmetric_eigenvalues(std::span<const double> matrix, std::size_t n,
                                          double symmetry_tol = 1e-12);

/// lambda_2, the second smallest eigenvalue, clamped at 0 from below. Returns 0 for n < 2.
double second_smallest_eigenvalue(std::span<const double> matrix, std::size_t n);

double smallest_eigenvalue(std::span<const double> matrix, std::size_t n);

}  // namespace phs
