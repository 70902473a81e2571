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

#ifndef CUCT_MILP_BACKEND_HPP_
#define CUCT_MILP_BACKEND_HPP_

#include <memory>
#include <string>
#include <vector>

#include "cuct/milp/model.hpp"

namespace cuct::milp {

struct SolveParams {
  double time_limit_s = 1800.0;
  double mip_gap = 1e-6;
};

// Backend contract: consume the frozen model (in memory or via MPS text)
// and return a Solution.
class SolveBackend {
 public:
  virtual ~SolveBackend() = default;
  virtual std::string name() const = 0;
  virtual Solution solve(const Model& model, const SolveParams& params) = 0;
};

// Bundled branch-and-bound over the in-repo dual simplex.
std::unique_ptr<SolveBackend> make_internal_backend();

// File-based adapter: writes the MPS snapshot, runs an external solver
// command, and parses its solution file. The command template comes from
// `command` or, when empty, the CUCT_SOLVER_CMD environment variable; the
// placeholders {mps} and {sol} are substituted with the temporary file
// paths. Expected solution-file format, one item per line:
//   status optimal|feasible|infeasible|time-limit
//   objective <value>
//   <column name> <value>
// Columns absent from the file default to zero.
std::unique_ptr<SolveBackend> make_file_backend(std::string command = "");

void register_backend(std::unique_ptr<SolveBackend> backend);
SolveBackend* find_backend(const std::string& name);
std::vector<std::string> backend_names();

// Dispatches to a registered backend by name ("internal" and "external"
// are registered on first use).
Solution solve(const Model& model, const std::string& backend_name,
               double time_limit_s = 1800.0, double mip_gap = 1e-6);

}  // namespace cuct::milp

#endif  // CUCT_MILP_BACKEND_HPP_
