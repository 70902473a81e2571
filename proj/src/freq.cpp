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

#include "cuct/freq.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace cuct::freq {

using milp::LinearTerm;
using milp::Model;
using milp::Sense;
using sysmodel::CaseInput;
using sysmodel::SystemParams;

namespace {

std::string tag(const char* base, int a, int b, int c) {
  return std::string(base) + "_" + std::to_string(a) + "_" + std::to_string(b) + "_" +
         std::to_string(c);
}

double closed_form(double lost, double reserve, double inertia, double demand,
                   const SystemParams& p, bool* insecure) {
  const double numerator = p.f0_hz * p.t_g_s * lost * lost;
  const double denominator =
      4.0 * reserve * inertia - p.damping * p.t_g_s * p.f0_hz * demand * lost;
  if (lost <= 0.0) {
    *insecure = false;
    return 0.0;
  }
  if (denominator <= 0.0) {
    *insecure = true;
    return std::numeric_limits<double>::infinity();
  }
  *insecure = false;
  return numerator / denominator;
}

}  // namespace

std::optional<double> nadir_exact(const OutageContext& ctx, const SystemParams& params) {
  bool insecure = false;
  const double nadir =
      closed_form(ctx.lost_mw, ctx.reserve_mw, ctx.inertia_mws, ctx.demand_mw, params, &insecure);
  if (insecure) return std::nullopt;
  return nadir;
}

std::array<std::optional<double>, 4> nadir_coefficient_approx(
    const std::array<double, 4>& lost_coeffs, const std::array<double, 4>& reserve_coeffs,
    double inertia_mws, const std::array<double, 4>& demand_coeffs,
    const SystemParams& params) {
  std::array<std::optional<double>, 4> out;
  for (int b = 0; b < 4; ++b) {
    bool insecure = false;
    const double nadir = closed_form(lost_coeffs[b], reserve_coeffs[b], inertia_mws,
                                     demand_coeffs[b], params, &insecure);
    out[b] = insecure ? std::nullopt : std::optional<double>(nadir);
  }
  return out;
}

double ode_nadir_oracle(double lost_mw, double reserve_mw, double inertia_mws,
                        double demand_mw, const SystemParams& params) {
  if (inertia_mws <= 0.0) {
    throw std::invalid_argument("ode_nadir_oracle: inertia must be positive");
  }
  const double dt = 1e-3;
  const double horizon_s = 60.0;
  // (2 H / f0) d(df)/dt = -p + min(t/Tg, 1) r - D demand df / f0
  const double gain = params.f0_hz / (2.0 * inertia_mws);
  auto rhs = [&](double t, double df) {
    const double ramp = std::min(t / params.t_g_s, 1.0);
    return gain * (-lost_mw + ramp * reserve_mw - params.damping * demand_mw * df / params.f0_hz);
  };
  double df = 0.0;
  double worst = 0.0;
  const int steps = static_cast<int>(horizon_s / dt);
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    const double k1 = rhs(t, df);
    const double k2 = rhs(t + dt / 2, df + dt / 2 * k1);
    const double k3 = rhs(t + dt / 2, df + dt / 2 * k2);
    const double k4 = rhs(t + dt, df + dt * k3);
    df += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    // The nadir is the deepest under-frequency excursion. The idealized
    // reserve ramp keeps injecting after the dip is arrested, so the later
    // upward swing is an artifact, not part of the metric.
    worst = std::max(worst, -df);
  }
  return worst;
}

void build_rocof_constraints(Model& model, const cuc::UcVariables& vars, const CaseInput& c) {
  const double kappa = 2.0 * c.params.rocof_limit_hz_s / c.params.f0_hz;
  for (int b = 0; b < cuc::kNumCoeffs; ++b) {
    for (int t = 0; t < vars.horizon; ++t) {
      for (int l = 0; l < vars.n_units; ++l) {
        std::vector<LinearTerm> terms = {{vars.p(b, t, l), 1.0}};
        for (int i = 0; i < vars.n_units; ++i) {
          if (i == l) continue;
          terms.push_back({vars.u(t, i), -kappa * c.units[i].inertia_s * c.units[i].base_mva});
        }
        model.add_constraint(std::move(terms), Sense::kLe, 0.0, tag("rocof", b, t, l));
      }
    }
  }
}

void build_qss_constraints(Model& model, const cuc::UcVariables& vars, const CaseInput& c,
                           const sysmodel::ApproximatedProfiles& profiles) {
  for (int b = 0; b < cuc::kNumCoeffs; ++b) {
    for (int t = 0; t < vars.horizon; ++t) {
      const double demand_coeff = profiles.demand.segments[t].coeffs[b];
      const double rhs = -c.params.damping * demand_coeff * c.params.qss_limit_hz;
      for (int l = 0; l < vars.n_units; ++l) {
        std::vector<LinearTerm> terms = {{vars.p(b, t, l), -1.0}};
        for (int i = 0; i < vars.n_units; ++i) {
          if (i == l) continue;
          terms.push_back({vars.r(b, t, i), 1.0});
        }
        model.add_constraint(std::move(terms), Sense::kGe, rhs, tag("qss", b, t, l));
      }
    }
  }
}

void build_nadir_constraints(Model& model, const cuc::UcVariables& vars, const CaseInput& c,
                             const NadirSurrogate& surrogate) {
  // Row: a1*p_l + a2*sum_{i!=l} HM_i u_i + a3*sum_{i!=l} r_i + M u_l
  //      <= threshold - a0 + M, inactive while u_l = 0. With u_l = 0 the
  //      lost-power term is already gated to zero by the capacity rows, so
  //      the slack only has to absorb the intercept plus any positive
  //      inertia/reserve coefficients.
  double total_hm = 0.0;
  double total_pmax = 0.0;
  for (const auto& unit : c.units) {
    total_hm += unit.inertia_s * unit.base_mva;
    total_pmax += unit.p_max_mw;
  }
  const double idle_lhs_max = surrogate.alpha0 +
                              std::max(0.0, surrogate.alpha2) * total_hm +
                              std::max(0.0, surrogate.alpha3) * total_pmax;
  const double big_m = std::max(0.0, idle_lhs_max - surrogate.threshold_hz) + 1e-6;

  for (int b = 0; b < cuc::kNumCoeffs; ++b) {
    for (int t = 0; t < vars.horizon; ++t) {
      for (int l = 0; l < vars.n_units; ++l) {
        std::vector<LinearTerm> terms = {{vars.p(b, t, l), surrogate.alpha1},
                                         {vars.u(t, l), big_m}};
        for (int i = 0; i < vars.n_units; ++i) {
          if (i == l) continue;
          terms.push_back(
              {vars.u(t, i), surrogate.alpha2 * c.units[i].inertia_s * c.units[i].base_mva});
          terms.push_back({vars.r(b, t, i), surrogate.alpha3});
        }
        const double rhs = surrogate.threshold_hz - surrogate.alpha0 + big_m;
        model.add_constraint(std::move(terms), Sense::kLe, rhs, tag("nadir", b, t, l));
      }
    }
  }
}

int NadirSweep::minutes_above(double threshold_hz) const {
  int count = 0;
  for (const auto& m : minutes) {
    if (m.worst_unit >= 0 && (m.insecure || m.nadir_hz > threshold_hz)) ++count;
  }
  return count;
}

std::vector<double> NadirSweep::per_hour_worst(int horizon) const {
  std::vector<double> out(horizon, 0.0);
  for (const auto& m : minutes) {
    const int t = m.minute / 60;
    if (t < horizon && m.worst_unit >= 0) {
      out[t] = std::max(out[t], m.insecure ? std::numeric_limits<double>::infinity()
                                           : m.nadir_hz);
    }
  }
  return out;
}

NadirSweep sweep_exact_nadir(const cuc::Schedule& schedule, const CaseInput& c,
                             const sysmodel::ApproximatedProfiles& profiles) {
  if (schedule.unit_ids.size() != c.units.size()) {
    throw std::invalid_argument("sweep_exact_nadir: schedule/case unit count mismatch");
  }
  for (size_t i = 0; i < c.units.size(); ++i) {
    if (schedule.unit_ids[i] != c.units[i].id) {
      throw std::invalid_argument("sweep_exact_nadir: schedule unit '" + schedule.unit_ids[i] +
                                  "' does not match case unit '" + c.units[i].id + "'");
    }
  }

  NadirSweep sweep;
  const int I = static_cast<int>(c.units.size());
  for (int t = 0; t < schedule.horizon; ++t) {
    std::vector<double> hm(I);
    for (int i = 0; i < I; ++i) {
      hm[i] = schedule.committed[t][i] ? c.units[i].inertia_s * c.units[i].base_mva : 0.0;
    }
    const double hm_total = [&] {
      double acc = 0.0;
      for (double v : hm) acc += v;
      return acc;
    }();

    for (int minute = 0; minute < 60; ++minute) {
      const double tau = minute / 60.0;
      MinuteNadir entry;
      entry.minute = t * 60 + minute;
      const double demand = bernstein::eval(profiles.demand.segments[t], tau);
      double reserve_total = 0.0;
      for (int i = 0; i < I; ++i) {
        if (schedule.committed[t][i]) {
          reserve_total += bernstein::eval(schedule.reserve[i].segments[t], tau);
        }
      }
      for (int l = 0; l < I; ++l) {
        if (!schedule.committed[t][l]) continue;
        OutageContext ctx;
        ctx.lost_mw = bernstein::eval(schedule.power[l].segments[t], tau);
        ctx.reserve_mw = reserve_total - bernstein::eval(schedule.reserve[l].segments[t], tau);
        ctx.inertia_mws = hm_total - hm[l];
        ctx.demand_mw = demand;
        const auto nadir = nadir_exact(ctx, c.params);
        const bool insecure = !nadir.has_value();
        const double value = insecure ? std::numeric_limits<double>::infinity() : *nadir;
        const bool worse = entry.worst_unit < 0 || (insecure && !entry.insecure) ||
                           (insecure == entry.insecure && value > entry.nadir_hz);
        if (worse) {
          entry.worst_unit = l;
          entry.nadir_hz = value;
          entry.insecure = insecure;
        }
      }
      sweep.minutes.push_back(entry);
    }
  }
  return sweep;
}

int minutes_above(const cuc::Schedule& schedule, const CaseInput& c,
                  const sysmodel::ApproximatedProfiles& profiles, double threshold_hz) {
  return sweep_exact_nadir(schedule, c, profiles).minutes_above(threshold_hz);
}

void write_metric_json(const NadirSweep& sweep, double threshold_hz, int horizon,
                       const std::string& path) {
  nlohmann::json doc;
  doc["threshold_hz"] = threshold_hz;
  doc["minutes_above"] = sweep.minutes_above(threshold_hz);
  nlohmann::json per_hour = nlohmann::json::array();
  for (double worst : sweep.per_hour_worst(horizon)) {
    if (std::isinf(worst)) per_hour.push_back("insecure");
    else per_hour.push_back(worst);
  }
  doc["per_hour_worst_nadir"] = per_hour;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metric json '" + path + "'");
  out << doc.dump(2) << "\n";
}

void write_metric_csv(const NadirSweep& sweep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metric csv '" + path + "'");
  out << "minute,worst_unit,nadir_hz\n";
  char buf[40];
  for (const auto& m : sweep.minutes) {
    if (m.worst_unit < 0) {
      out << m.minute << ",none,0\n";
    } else if (m.insecure) {
      out << m.minute << ',' << m.worst_unit << ",inf\n";
    } else {
      std::snprintf(buf, sizeof(buf), "%.9g", m.nadir_hz);
      out << m.minute << ',' << m.worst_unit << ',' << buf << '\n';
    }
  }
}

}  // namespace cuct::freq
