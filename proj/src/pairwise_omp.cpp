#include <omp.h>

#include <cstdint>
#include <string>
#include <vector>

#include "phs/errors.hpp"
#include "phs/pairwise.hpp"

namespace phs::pairwise {

namespace {

void check_sizes(std::size_t have, std::size_t want, const char* what) {
  if (have != want) throw DimensionError(std::string(what) + " has the wrong length");
}

// Packed strict upper triangle: pair (i, j), i < j.
inline std::size_t packed(std::size_t i, std::size_t j, std::size_t n) noexcept {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<double>& scratch(std::size_t size) {
  thread_local std::vector<double> buf;
  if (buf.size() < size) buf.resize(size);
  return buf;
}

using index_t = std::int64_t;

}  // namespace

void damping_matrix(std::span<const double> pos, std::size_t n, std::size_t d,
                    const KernelSpec& kernel, std::span<double> out) {
  check_sizes(pos.size(), n * d, "positions");
  check_sizes(out.size(), n * n, "damping matrix");
  const double nd = static_cast<double>(n);
  const index_t ni = static_cast<index_t>(n);

#pragma omp parallel for schedule(dynamic, 8)
  for (index_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s2 = detail::squared_distance(&pos[i * d], &pos[j * d], d);
      const double w = -(alignment_from_squared(kernel, s2) / nd);
      out[i * n + j] = w;
      out[j * n + i] = w;
    }
  }

#pragma omp parallel for schedule(static)
  for (index_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) acc += out[i * n + j];
    out[i * n + i] = -acc;
  }
}

void potential_force(std::span<const double> pos, std::size_t n, std::size_t d,
                     const PotentialSpec& potential, std::span<double> out) {
  check_sizes(pos.size(), n * d, "positions");
  check_sizes(out.size(), n * d, "force output");
  potential.check_dimension(d);
  const double nd = static_cast<double>(n);
  const index_t ni = static_cast<index_t>(n);

  if (potential.is_zero()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }

  std::vector<double>& table = scratch(n * (n - 1) / 2 * d);

#pragma omp parallel for schedule(dynamic, 8)
  for (index_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < n; ++j)
      detail::potential_gradient_pair(potential, &pos[i * d], &pos[j * d], d,
                                      &table[packed(i, j, n) * d]);
  }

#pragma omp parallel for schedule(static)
  for (index_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double* o = &out[i * d];
    for (std::size_t k = 0; k < d; ++k) o[k] = 0.0;
    // grad V(p_i - p_j) = -grad V(p_j - p_i) exactly for j < i.
    for (std::size_t j = 0; j < i; ++j) {
      const double* g = &table[packed(j, i, n) * d];
      for (std::size_t k = 0; k < d; ++k) o[k] += -g[k];
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* g = &table[packed(i, j, n) * d];
      for (std::size_t k = 0; k < d; ++k) o[k] += g[k];
    }
    for (std::size_t k = 0; k < d; ++k) o[k] /= nd;
  }
}

void alignment_force(std::span<const double> pos, std::span<const double> vel, std::size_t n,
                     std::size_t d, const KernelSpec& kernel, std::span<double> out) {
  check_sizes(pos.size(), n * d, "positions");
  check_sizes(vel.size(), n * d, "velocities");
  check_sizes(out.size(), n * d, "force output");
  const double nd = static_cast<double>(n);
  const index_t ni = static_cast<index_t>(n);

  std::vector<double>& table = scratch(n * (n - 1) / 2);

#pragma omp parallel for schedule(dynamic, 8)
  for (index_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < n; ++j)
      table[packed(i, j, n)] =
          alignment_from_squared(kernel, detail::squared_distance(&pos[i * d], &pos[j * d], d));
  }

#pragma omp parallel for schedule(static)
  for (index_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double* o = &out[i * d];
    const double* vi = &vel[i * d];
    for (std::size_t k = 0; k < d; ++k) o[k] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double psi = table[j < i ? packed(j, i, n) : packed(i, j, n)];
      const double* vj = &vel[j * d];
      for (std::size_t k = 0; k < d; ++k) o[k] += psi * (vj[k] - vi[k]);
    }
    for (std::size_t k = 0; k < d; ++k) o[k] /= nd;
  }
}

void laplacian_apply(std::span<const double> matrix, std::size_t n, std::size_t d,
                     std::span<const double> u, std::span<double> out) {
  check_sizes(matrix.size(), n * n, "matrix");
  check_sizes(u.size(), n * d, "input vector");
  check_sizes(out.size(), n * d, "output vector");
  const index_t ni = static_cast<index_t>(n);

#pragma omp parallel for schedule(static)
  for (index_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double* o = &out[i * d];
    const double* ui = &u[i * d];
    for (std::size_t k = 0; k < d; ++k) o[k] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double m = matrix[i * n + j];
      const double* uj = &u[j * d];
      for (std::size_t k = 0; k < d; ++k) o[k] += m * (uj[k] - ui[k]);
    }
  }
}

}  // namespace phs::pairwise
