// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/tracker/assignment.hpp"

#include <limits>

#include "svreid/core/errors.hpp"

namespace svreid {

namespace {

// Potential-based shortest augmenting paths; requires rows <= cols.
// Returns, per column (1-based), the assigned row (0 = none).
std::vector<int> solve_rectangular(const CostMatrix& a) {
  const int n = a.rows;
  const int m = a.cols;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = a.at(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      if (j1 < 0) {
        throw NumericalError("hungarian_assign: no augmenting path (non-finite costs?)");
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  return p;
}

}  // namespace

std::vector<int> hungarian_assign(const CostMatrix& cost) {
  std::vector<int> row_to_col(static_cast<std::size_t>(cost.rows), -1);
  if (cost.rows == 0 || cost.cols == 0) return row_to_col;
  for (double v : cost.values) {
    if (!(v == v) || v == std::numeric_limits<double>::infinity()) {
      throw NumericalError("hungarian_assign: costs must be finite (use kDisallowedCost)");
    }
  }

  if (cost.rows <= cost.cols) {
    const std::vector<int> p = solve_rectangular(cost);
    for (int j = 1; j <= cost.cols; ++j) {
      const int i = p[static_cast<std::size_t>(j)];
      if (i > 0) row_to_col[static_cast<std::size_t>(i - 1)] = j - 1;
    }
  } else {
    CostMatrix t(cost.cols, cost.rows);
    for (int r = 0; r < cost.rows; ++r) {
      for (int c = 0; c < cost.cols; ++c) {
        t.at(c, r) = cost.at(r, c);
      }
    }
    const std::vector<int> p = solve_rectangular(t);
    for (int j = 1; j <= t.cols; ++j) {
      const int i = p[static_cast<std::size_t>(j)];
      if (i > 0) row_to_col[static_cast<std::size_t>(j - 1)] = i - 1;
    }
  }

  // Pairs that only exist through a forbidden cost count as unassigned.
  for (int r = 0; r < cost.rows; ++r) {
    const int c = row_to_col[static_cast<std::size_t>(r)];
    if (c >= 0 && cost.at(r, c) >= 0.5 * kDisallowedCost) {
      row_to_col[static_cast<std::size_t>(r)] = -1;
    }
  }
  return row_to_col;
}

}  // namespace svreid
