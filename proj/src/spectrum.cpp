#include "phs/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "phs/errors.hpp"

namespace phs {

std::vector<double> symmetric_eigenvalues(std::span<const double> matrix, std::size_t n,
                                          double symmetry_tol) {
  if (matrix.size() != n * n) throw DimensionError("matrix must hold n * n entries");
  if (n == 0) return {};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!(std::abs(matrix[i * n + j] - matrix[j * n + i]) <= symmetry_tol))
        throw InputError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");

  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      matrix.data(), ni, ni);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InputError("symmetric eigensolver did not converge");
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double second_smallest_eigenvalue(std::span<const double> matrix, std::size_t n) {
  const auto ev = symmetric_eigenvalues(matrix, n);
  if (n < 2) return 0.0;
  return std::max(ev[1], 0.0);
}

double smallest_eigenvalue(std::span<const double> matrix, std::size_t n) {
  const auto ev = symmetric_eigenvalues(matrix, n);
  if (ev.empty()) throw DimensionError("empty matrix has no eigenvalues");
  return ev.front();
}

}  // namespace phs
