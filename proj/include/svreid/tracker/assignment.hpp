// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <vector>

namespace svreid {

// Cost at or above this value marks a forbidden pair; the solver treats a
// forced pairing through it as "unassigned".
inline constexpr double kDisallowedCost = 1e9;

struct CostMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major

  CostMatrix() = default;
  CostMatrix(int r, int c) : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, 0.0) {}
  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
};

// Minimum-total-cost assignment of min(rows, cols) pairs (Hungarian
// algorithm with potentials, O(n^3)). Returns per-row column indices; -1
// for rows left unassigned or matched only through a disallowed cost.
std::vector<int> hungarian_assign(const CostMatrix& cost);

}  // namespace svreid
