#include "phs/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phs/errors.hpp"

namespace phs {

Assignment solve_assignment(std::span<const double> cost, std::size_t m) {
  if (cost.size() != m * m) throw DimensionError("assignment cost matrix must be m x m");
  for (double c : cost)
    if (!std::isfinite(c)) throw DomainError("assignment costs must be finite");

  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based with a virtual column 0 that holds the row being inserted.
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= m; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment a;
  a.row_to_col.assign(m, 0);
  for (std::size_t j = 1; j <= m; ++j) a.row_to_col[p[j] - 1] = j - 1;
  a.row_potential.assign(u.begin() + 1, u.end());
  a.col_potential.assign(v.begin() + 1, v.end());
  for (std::size_t i = 0; i < m; ++i) a.total_cost += cost[i * m + a.row_to_col[i]];
  return a;
}

CertificateCheck verify_assignment(const Assignment& a, std::span<const double> cost,
                                   std::size_t m) {
  if (cost.size() != m * m || a.row_to_col.size() != m || a.row_potential.size() != m ||
      a.col_potential.size() != m)
    throw DimensionError("assignment and cost matrix sizes differ");
  CertificateCheck c;
  std::vector<char> seen(m, 0);
  c.is_permutation = true;
  for (std::size_t col : a.row_to_col) {
    if (col >= m || seen[col]) {
      c.is_permutation = false;
      break;
    }
    seen[col] = 1;
  }
  c.dual_infeasibility = -std::numeric_limits<double>::infinity();
  double dual = 0.0, primal = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    dual += a.row_potential[i] + a.col_potential[i];
    if (c.is_permutation) primal += cost[i * m + a.row_to_col[i]];
    for (std::size_t j = 0; j < m; ++j)
      c.dual_infeasibility = std::max(
          c.dual_infeasibility, a.row_potential[i] + a.col_potential[j] - cost[i * m + j]);
  }
  if (m == 0) c.dual_infeasibility = 0.0;
  c.duality_gap = std::abs(primal - dual);
  return c;
}

}  // namespace phs
