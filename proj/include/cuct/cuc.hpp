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

#ifndef CUCT_CUC_HPP_
#define CUCT_CUC_HPP_

#include <string>
#include <vector>

#include "cuct/bernstein.hpp"
#include "cuct/milp/model.hpp"
#include "cuct/sysmodel.hpp"

namespace cuct::freq {
struct NadirSurrogate;
}

namespace cuct::cuc {

inline constexpr int kNumCoeffs = 4;  // degree-3 trajectories

// Handles into the model, laid out [b][t*n_units + i] for coefficient
// variables and [t*n_units + i] for binaries.
struct UcVariables {
  int horizon = 0;
  int n_units = 0;

  std::vector<milp::VarHandle> u_, v_, w_;
  std::vector<milp::VarHandle> p_[kNumCoeffs], r_[kNumCoeffs];
  std::vector<milp::VarHandle> su_[kNumCoeffs], sd_[kNumCoeffs];
  std::vector<milp::VarHandle> curt_[kNumCoeffs];  // indexed [t]

  int at(int t, int i) const { return t * n_units + i; }
  milp::VarHandle u(int t, int i) const { return u_[at(t, i)]; }
  milp::VarHandle v(int t, int i) const { return v_[at(t, i)]; }
  milp::VarHandle w(int t, int i) const { return w_[at(t, i)]; }
  milp::VarHandle p(int b, int t, int i) const { return p_[b][at(t, i)]; }
  milp::VarHandle r(int b, int t, int i) const { return r_[b][at(t, i)]; }
  milp::VarHandle su(int b, int t, int i) const { return su_[b][at(t, i)]; }
  milp::VarHandle sd(int b, int t, int i) const { return sd_[b][at(t, i)]; }
  milp::VarHandle curt(int b, int t) const { return curt_[b][t]; }
};

struct BuildOptions {
  double curtailment_penalty = 0.0;  // objective weight per curtailed MWh
  bool reserve_deliverability_cap = false;
  // Lift reserve coefficients to remaining headroom after the solve; keeps
  // the schedule's reserve well defined in modes where it carries no cost.
  bool lift_reserve_to_headroom = true;
};

// Hours a unit must stay in its initial state before the first allowed
// transition.
int initial_on_lock(const sysmodel::UnitSpec& unit);
int initial_off_lock(const sysmodel::UnitSpec& unit);

UcVariables create_variables(milp::Model& model, const sysmodel::CaseInput& c,
                             const sysmodel::ApproximatedProfiles& profiles);

void build_commitment_logic(milp::Model& model, const UcVariables& vars,
                            const sysmodel::CaseInput& c);
void build_min_up_down(milp::Model& model, const UcVariables& vars,
                       const sysmodel::CaseInput& c);
void build_su_sd_trajectories(milp::Model& model, const UcVariables& vars,
                              const sysmodel::CaseInput& c);
void build_continuity(milp::Model& model, const UcVariables& vars,
                      const sysmodel::CaseInput& c);
void build_capacity_reserve(milp::Model& model, const UcVariables& vars,
                            const sysmodel::CaseInput& c, const BuildOptions& opt = {});
void build_ramping(milp::Model& model, const UcVariables& vars,
                   const sysmodel::CaseInput& c);
void build_power_balance(milp::Model& model, const UcVariables& vars,
                         const sysmodel::CaseInput& c,
                         const sysmodel::ApproximatedProfiles& profiles);
void build_objective(milp::Model& model, const UcVariables& vars,
                     const sysmodel::CaseInput& c, const BuildOptions& opt = {});

struct Assembled {
  milp::Model model;
  UcVariables vars;
  sysmodel::ApproximatedProfiles profiles;
};

// Builds the full frozen model for the requested mode. rocof-cuc adds RoCoF
// and QSS rows; cfcuc additionally needs a trained nadir surrogate.
Assembled assemble(const sysmodel::CaseInput& c,
                   const sysmodel::ApproximatedProfiles& profiles,
                   sysmodel::Mode mode,
                   const freq::NadirSurrogate* surrogate = nullptr,
                   const BuildOptions& opt = {});

struct Schedule {
  std::vector<std::string> unit_ids;
  int horizon = 0;
  std::vector<std::vector<int>> committed;  // [t][i]
  std::vector<std::vector<int>> started;
  std::vector<std::vector<int>> stopped;
  // Merged dispatch + SU/SD trajectory per unit, one segment per hour.
  std::vector<bernstein::PiecewiseBernstein> power;
  std::vector<bernstein::PiecewiseBernstein> reserve;
  bernstein::PiecewiseBernstein curtailment;
  double objective = 0.0;
  double energy_cost = 0.0;
  double no_load_cost = 0.0;
  double startup_cost = 0.0;
  milp::SolveStatus status = milp::SolveStatus::kInfeasible;
  double gap = 0.0;
};

// Reads the solution back into trajectories and verifies every Schedule
// invariant (continuity, capacity, nonnegative reserve). Violations raise
// std::runtime_error naming unit, hour, and constraint.
Schedule extract_schedule(const milp::Solution& solution, const UcVariables& vars,
                          const sysmodel::CaseInput& c, const BuildOptions& opt = {});

// Schedule files: CSV of coefficients plus a JSON summary.
void write_schedule_csv(const Schedule& s, const std::string& path);
void write_schedule_json(const Schedule& s, const std::string& path);
Schedule load_schedule(const std::string& csv_path, const std::string& json_path);

}  // namespace cuct::cuc

#endif  // CUCT_CUC_HPP_
