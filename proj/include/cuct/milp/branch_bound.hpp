// Copyright 2026 The cuct Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CUCT_MILP_BRANCH_BOUND_HPP_
#define CUCT_MILP_BRANCH_BOUND_HPP_

#include "cuct/milp/model.hpp"

namespace cuct::milp {

struct MilpOptions {
  double time_limit_s = 1800.0;
  double mip_gap = 1e-6;
  long node_limit = 200000000;
};

struct MilpStats {
  long nodes = 0;
  double runtime_s = 0.0;
  double best_bound = 0.0;
};

// Depth-first branch-and-bound on the binary variables, warm-starting the
// dual simplex across nodes. Deterministic: most-fractional branching with
// index tie-breaks, nearest-integer child explored first.
Solution solve_milp(const Model& model, const MilpOptions& options = {},
                    MilpStats* stats = nullptr);

}  // namespace cuct::milp

#endif  // CUCT_MILP_BRANCH_BOUND_HPP_
