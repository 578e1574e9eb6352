// Copyright 2026 The sepbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sepbench/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sepbench {

AssignmentResult solve_assignment(const std::vector<std::vector<double>>& cost,
                                  bool minimize) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) throw std::invalid_argument("assignment: empty matrix");
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("assignment: matrix must be square");
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("assignment: non-finite cost");
      }
    }
  }

  auto at = [&](int i, int j) { return minimize ? cost[i][j] : -cost[i][j]; };
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Potentials over rows (u) and columns (v); p[j] is the row matched to
  // column j. Index 0 is a virtual slot, the matrix is used 1-based.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
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
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  AssignmentResult result;
  result.assignment.assign(n, -1);
  for (int j = 1; j <= n; ++j) result.assignment[p[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) result.cost += cost[i][result.assignment[i]];
  return result;
}

}  // namespace sepbench
