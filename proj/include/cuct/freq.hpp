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

#ifndef CUCT_FREQ_HPP_
#define CUCT_FREQ_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cuct/cuc.hpp"
#include "cuct/milp/model.hpp"
#include "cuct/sysmodel.hpp"

namespace cuct::freq {

// Learned linear nadir surrogate: alpha0 + alpha1*lost + alpha2*inertia +
// alpha3*reserve <= threshold.
struct NadirSurrogate {
  double alpha0 = 0.0;  // Hz
  double alpha1 = 0.0;  // Hz per MW lost
  double alpha2 = 0.0;  // Hz per MW*s inertia
  double alpha3 = 0.0;  // Hz per MW reserve
  double threshold_hz = 0.0;
};

// One instant of a candidate outage: the lost unit's output, the surviving
// units' responsive reserve and aggregate inertia, and the system demand.
struct OutageContext {
  double lost_mw = 0.0;
  double reserve_mw = 0.0;
  double inertia_mws = 0.0;  // sum of H_i * M_i over committed survivors
  double demand_mw = 0.0;
};

// Post-outage frequency nadir from the swing-equation closed form,
//   f0 * Tg * p^2 / (4 r H - D Tg f0 demand p).
// A non-positive denominator means reserve/inertia cannot arrest the
// decline within Tg; that is reported as nullopt ("insecure") rather than
// a number.
std::optional<double> nadir_exact(const OutageContext& ctx,
                                  const sysmodel::SystemParams& params);

// Per-coefficient diagonal product approximation of the nadir: square and
// cross terms keep only matching-index coefficient products, so each entry
// is the closed form applied to the b-th coefficients. Exact whenever the
// inputs are constant, and at tau in {0,1} by endpoint interpolation.
std::array<std::optional<double>, 4> nadir_coefficient_approx(
    const std::array<double, 4>& lost_coeffs, const std::array<double, 4>& reserve_coeffs,
    double inertia_mws, const std::array<double, 4>& demand_coeffs,
    const sysmodel::SystemParams& params);

// Independent oracle: integrates the one-machine swing equation
//   (2 H / f0) d(df)/dt = -p + min(t/Tg, 1) r - D demand df / f0
// with fixed-step RK4 (1 ms, 60 s horizon) and returns max |df|.
double ode_nadir_oracle(double lost_mw, double reserve_mw, double inertia_mws,
                        double demand_mw, const sysmodel::SystemParams& params);

// MILP rows. RoCoF bounds each unit's power coefficients by the surviving
// inertia; QSS requires surviving reserve to cover the loss net of load
// damping; the nadir rows apply the learned surrogate per coefficient,
// big-M deactivated while the candidate unit is offline.
void build_rocof_constraints(milp::Model& model, const cuc::UcVariables& vars,
                             const sysmodel::CaseInput& c);
void build_qss_constraints(milp::Model& model, const cuc::UcVariables& vars,
                           const sysmodel::CaseInput& c,
                           const sysmodel::ApproximatedProfiles& profiles);
void build_nadir_constraints(milp::Model& model, const cuc::UcVariables& vars,
                             const sysmodel::CaseInput& c, const NadirSurrogate& surrogate);

struct MinuteNadir {
  int minute = 0;
  int worst_unit = -1;           // index into schedule unit list, -1 if none online
  double nadir_hz = 0.0;         // +inf when insecure
  bool insecure = false;
};

struct NadirSweep {
  std::vector<MinuteNadir> minutes;
  int minutes_above(double threshold_hz) const;
  std::vector<double> per_hour_worst(int horizon) const;
};

// Evaluates the exact nadir on the minute grid (60 instants per hour) for
// every online unit as outage candidate.
NadirSweep sweep_exact_nadir(const cuc::Schedule& schedule, const sysmodel::CaseInput& c,
                             const sysmodel::ApproximatedProfiles& profiles);

int minutes_above(const cuc::Schedule& schedule, const sysmodel::CaseInput& c,
                  const sysmodel::ApproximatedProfiles& profiles, double threshold_hz);

void write_metric_json(const NadirSweep& sweep, double threshold_hz, int horizon,
                       const std::string& path);
void write_metric_csv(const NadirSweep& sweep, const std::string& path);

}  // namespace cuct::freq

#endif  // CUCT_FREQ_HPP_
