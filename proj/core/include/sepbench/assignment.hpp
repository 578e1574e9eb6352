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

#ifndef SEPBENCH_ASSIGNMENT_HPP_
#define SEPBENCH_ASSIGNMENT_HPP_

#include <vector>

namespace sepbench {

struct AssignmentResult {
  std::vector<int> assignment;  // row index -> column index
  double cost = 0.0;
};

/// Optimal assignment on a square cost matrix (Jonker-Volgenant style
/// shortest augmenting paths, O(n^3)). Minimizes by default; set minimize
/// to false to maximize. Ties are broken deterministically by scan order.
AssignmentResult solve_assignment(const std::vector<std::vector<double>>& cost,
                                  bool minimize = true);

}  // namespace sepbench

#endif  // SEPBENCH_ASSIGNMENT_HPP_
