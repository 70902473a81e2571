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

#include "cuct/milp/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace cuct::milp {

Model::Model(std::string name) : name_(std::move(name)) {}

void Model::check_build_state(const char* op) const {
  if (frozen_) {
    throw std::logic_error(std::string(op) + ": model is frozen");
  }
}

VarHandle Model::add_var(VarKind kind, double lo, double hi, std::string name) {
  check_build_state("add_var");
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw std::invalid_argument("add_var: bad bounds for '" + name + "'");
  }
  if (kind == VarKind::kBinary) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    if (lo > hi) throw std::invalid_argument("add_var: binary bounds empty for '" + name + "'");
  }
  if (name.empty()) throw std::invalid_argument("add_var: empty name");
  if (!var_names_.emplace(name, num_vars()).second) {
    throw std::invalid_argument("add_var: duplicate name '" + name + "'");
  }
  vars_.push_back(VarInfo{std::move(name), kind, lo, hi});
  objective_.push_back(0.0);
  priority_.push_back(0);
  return VarHandle{num_vars() - 1};
}

int Model::add_constraint(std::vector<LinearTerm> terms, Sense sense, double rhs,
                          std::string name) {
  check_build_state("add_constraint");
  if (!std::isfinite(rhs)) {
    throw std::invalid_argument("add_constraint: non-finite rhs in '" + name + "'");
  }
  for (const auto& t : terms) {
    if (!t.var.valid() || t.var.id >= num_vars()) {
      throw std::invalid_argument("add_constraint: unknown variable in '" + name + "'");
    }
    if (!std::isfinite(t.coeff)) {
      throw std::invalid_argument("add_constraint: non-finite coefficient in '" + name + "'");
    }
  }
  // Canonicalize: sort by id, merge duplicates by summation, drop zeros.
  std::sort(terms.begin(), terms.end(),
            [](const LinearTerm& a, const LinearTerm& b) { return a.var.id < b.var.id; });
  std::vector<LinearTerm> merged;
  merged.reserve(terms.size());
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const LinearTerm& t) { return t.coeff == 0.0; });

  if (name.empty()) throw std::invalid_argument("add_constraint: empty name");
  if (!row_names_.emplace(name, num_rows()).second) {
    throw std::invalid_argument("add_constraint: duplicate name '" + name + "'");
  }
  rows_.push_back(RowInfo{std::move(name), sense, rhs, std::move(merged)});
  return num_rows() - 1;
}

void Model::set_objective(bool minimize, std::vector<LinearTerm> terms) {
  check_build_state("set_objective");
  minimize_ = minimize;
  std::fill(objective_.begin(), objective_.end(), 0.0);
  for (const auto& t : terms) {
    if (!t.var.valid() || t.var.id >= num_vars()) {
      throw std::invalid_argument("set_objective: unknown variable");
    }
    if (!std::isfinite(t.coeff)) {
      throw std::invalid_argument("set_objective: non-finite coefficient");
    }
    objective_[t.var.id] += t.coeff;
  }
}

void Model::set_branch_priority(VarHandle var, int priority) {
  check_build_state("set_branch_priority");
  priority_.at(var.id) = priority;
}

void Model::freeze() { frozen_ = true; }

VarHandle Model::var_by_name(const std::string& name) const {
  auto it = var_names_.find(name);
  if (it == var_names_.end()) return VarHandle{};
  return VarHandle{it->second};
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeLimit: return "time-limit";
  }
  return "unknown";
}

}  // namespace cuct::milp
