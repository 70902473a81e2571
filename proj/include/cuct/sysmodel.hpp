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

#ifndef CUCT_SYSMODEL_HPP_
#define CUCT_SYSMODEL_HPP_

#include <string>
#include <vector>

#include "cuct/bernstein.hpp"

namespace cuct::sysmodel {

struct InitialStatus {
  bool on = false;
  int hours = 24;          // hours already spent in the current state
  double output_mw = 0.0;  // output entering hour 0; meaningful when on
  friend bool operator==(const InitialStatus&, const InitialStatus&) = default;
};

struct UnitSpec {
  std::string id;
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  double ramp_up_mw_h = 0.0;
  double ramp_down_mw_h = 0.0;  // stored positive
  int min_up_h = 1;
  int min_down_h = 1;
  int su_duration_h = 1;
  int sd_duration_h = 1;
  double inertia_s = 0.0;
  double base_mva = 0.0;
  double marginal_cost = 0.0;  // per MWh
  double no_load_cost = 0.0;   // per committed hour
  double startup_cost = 0.0;
  InitialStatus initial;
  friend bool operator==(const UnitSpec&, const UnitSpec&) = default;
};

enum class Mode { kCuc, kRocofCuc, kCfcuc };

Mode parse_mode(const std::string& text);
const char* to_string(Mode mode);

struct SystemParams {
  double f0_hz = 50.0;
  double damping = 0.01;       // per-unit load damping
  double t_g_s = 3.0;          // reserve delivery time
  double rocof_limit_hz_s = 2.0;
  double qss_limit_hz = 1.5;
  double nadir_limit_hz = 2.5;
  Mode mode = Mode::kCuc;
  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct CaseInput {
  std::string name = "case";
  SystemParams params;
  std::vector<UnitSpec> units;
  int horizon_hours = 24;
  int sample_step_min = 5;
  std::vector<double> demand_mw;  // uniform grid, sample k at minute k*step
  std::vector<double> res_mw;     // aggregate wind+solar on the same grid
  friend bool operator==(const CaseInput&, const CaseInput&) = default;

  int samples_per_hour() const { return 60 / sample_step_min; }
  double demand_min() const;
  double demand_peak() const;
};

// Loads and fully validates a case document. Parse failures carry line
// context; validation failures name the unit and field.
CaseInput load_case(const std::string& path);

// Parses a case from JSON text (same validation as load_case); profile CSV
// references are resolved against base_dir.
CaseInput parse_case(const std::string& json_text, const std::string& base_dir);

// Canonical serialization; load_case(save_case(c)) == c.
std::string serialize_case(const CaseInput& c);
void save_case(const CaseInput& c, const std::string& path);

// Runs every invariant check; throws std::invalid_argument naming the
// offending unit/field on the first violation.
void validate(const CaseInput& c);

struct ApproximatedProfiles {
  bernstein::PiecewiseBernstein demand;
  bernstein::PiecewiseBernstein res;
  std::vector<double> demand_rms;  // per-hour fit residuals
  std::vector<double> res_rms;
};

// Per-hour degree-3 fits with chained value/slope anchors, so both curves
// are c0- and c1-continuous across the whole horizon.
ApproximatedProfiles approximate_profiles(const CaseInput& c);

}  // namespace cuct::sysmodel

#endif  // CUCT_SYSMODEL_HPP_
