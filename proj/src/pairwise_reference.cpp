#include <cmath>
#include <variant>

#include "phs/errors.hpp"
#include "phs/pairwise.hpp"

namespace phs {

namespace detail {

void potential_gradient_pair(const PotentialSpec& potential, const double* a, const double* b,
                             std::size_t d, double* out) noexcept {
  if (const auto* m = std::get_if<Morse>(&potential.form)) {
    double s2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      out[k] = a[k] - b[k];
      s2 += out[k] * out[k];
    }
    const double f =
        -2.0 * m->R / m->r * std::exp(-s2 / m->r) + 2.0 * m->A / m->a * std::exp(-s2 / m->a);
    for (std::size_t k = 0; k < d; ++k) out[k] *= f;
  } else if (std::holds_alternative<CosinePotential>(potential.form)) {
    out[0] = std::sin(a[0] - b[0]);
  } else {
    for (std::size_t k = 0; k < d; ++k) out[k] = 0.0;
  }
}

}  // namespace detail

namespace {

void check_sizes(std::size_t have, std::size_t want, const char* what) {
  if (have != want) throw DimensionError(std::string(what) + " has the wrong length");
}

}  // namespace

namespace reference {

void damping_matrix(std::span<const double> pos, std::size_t n, std::size_t d,
                    const KernelSpec& kernel, std::span<double> out) {
  check_sizes(pos.size(), n * d, "positions");
  check_sizes(out.size(), n * n, "damping matrix");
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double s2 = detail::squared_distance(&pos[i * d], &pos[j * d], d);
      const double w = -(alignment_from_squared(kernel, s2) / nd);
      out[i * n + j] = w;
      acc += w;
    }
    out[i * n + i] = -acc;
  }
}

void potential_force(std::span<const double> pos, std::size_t n, std::size_t d,
                     const PotentialSpec& potential, std::span<double> out) {
  check_sizes(pos.size(), n * d, "positions");
  check_sizes(out.size(), n * d, "force output");
  potential.check_dimension(d);
  const double nd = static_cast<double>(n);
  std::vector<double> acc(d), g(d);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      detail::potential_gradient_pair(potential, &pos[i * d], &pos[j * d], d, g.data());
      for (std::size_t k = 0; k < d; ++k) acc[k] += g[k];
    }
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] = acc[k] / nd;
  }
}

void alignment_force(std::span<const double> pos, std::span<const double> vel, std::size_t n,
                     std::size_t d, const KernelSpec& kernel, std::span<double> out) {
  check_sizes(pos.size(), n * d, "positions");
  check_sizes(vel.size(), n * d, "velocities");
  check_sizes(out.size(), n * d, "force output");
  const double nd = static_cast<double>(n);
  std::vector<double> acc(d);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double s2 = detail::squared_distance(&pos[i * d], &pos[j * d], d);
      const double psi = alignment_from_squared(kernel, s2);
      for (std::size_t k = 0; k < d; ++k) acc[k] += psi * (vel[j * d + k] - vel[i * d + k]);
    }
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] = acc[k] / nd;
  }
}

void laplacian_apply(std::span<const double> matrix, std::size_t n, std::size_t d,
                     std::span<const double> u, std::span<double> out) {
  check_sizes(matrix.size(), n * n, "matrix");
  check_sizes(u.size(), n * d, "input vector");
  check_sizes(out.size(), n * d, "output vector");
  std::vector<double> acc(d);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double m = matrix[i * n + j];
      for (std::size_t k = 0; k < d; ++k) acc[k] += m * (u[j * d + k] - u[i * d + k]);
    }
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] = acc[k];
  }
}

}  // namespace reference
}  // namespace phs
