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

#ifndef CUCT_MILP_MODEL_HPP_
#define CUCT_MILP_MODEL_HPP_

#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace cuct::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { kContinuous, kBinary };

struct VarHandle {
  int id = -1;
  bool valid() const { return id >= 0; }
  friend bool operator==(VarHandle a, VarHandle b) { return a.id == b.id; }
};

enum class Sense { kLe, kEq, kGe };

struct LinearTerm {
  VarHandle var;
  double coeff = 0.0;
};

struct VarInfo {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lo = 0.0;
  double hi = kInf;
};

struct RowInfo {
  std::string name;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
  // Canonical form: sorted by variable id, duplicates merged by summation.
  std::vector<LinearTerm> terms;
};

// In-memory MILP in build/frozen states. Variable and row order is insertion
// order and drives every export, so identical build sequences produce
// byte-identical artifacts.
class Model {
 public:
  explicit Model(std::string name = "model");

  VarHandle add_var(VarKind kind, double lo, double hi, std::string name);
  int add_constraint(std::vector<LinearTerm> terms, Sense sense, double rhs,
                     std::string name);
  void set_objective(bool minimize, std::vector<LinearTerm> terms);
  // Branching hint for MIP backends; higher runs first. Not exported.
  void set_branch_priority(VarHandle var, int priority);
  int branch_priority(int id) const { return priority_.at(id); }
  void freeze();

  bool frozen() const { return frozen_; }
  const std::string& name() const { return name_; }
  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const VarInfo& var(int id) const { return vars_.at(id); }
  const RowInfo& row(int r) const { return rows_.at(r); }
  bool minimize() const { return minimize_; }
  // Objective coefficient per variable id (dense, zero default).
  const std::vector<double>& objective() const { return objective_; }

  VarHandle var_by_name(const std::string& name) const;

 private:
  void check_build_state(const char* op) const;

  std::string name_;
  bool frozen_ = false;
  bool minimize_ = true;
  std::vector<VarInfo> vars_;
  std::vector<RowInfo> rows_;
  std::vector<double> objective_;
  std::vector<int> priority_;
  std::unordered_map<std::string, int> var_names_;
  std::unordered_map<std::string, int> row_names_;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kTimeLimit };

const char* to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = 0.0;
  // Indexed by variable id; populated iff status is optimal or feasible.
  std::vector<double> values;
  double gap = 0.0;  // relative MIP gap actually achieved
  std::string message;

  bool has_values() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kFeasible;
  }
  double value(VarHandle h) const { return values.at(h.id); }
};

}  // namespace cuct::milp

#endif  // CUCT_MILP_MODEL_HPP_
