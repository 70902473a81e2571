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

#include "cuct/cuc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cuct/freq.hpp"

namespace cuct::cuc {

using milp::LinearTerm;
using milp::Model;
using milp::Sense;
using milp::VarHandle;
using milp::VarKind;
using sysmodel::CaseInput;
using sysmodel::Mode;
using sysmodel::UnitSpec;

namespace {

std::string tag(const char* base, int a) { return std::string(base) + "_" + std::to_string(a); }
std::string tag(const char* base, int a, int b) {
  return std::string(base) + "_" + std::to_string(a) + "_" + std::to_string(b);
}
std::string tag(const char* base, int a, int b, int c) {
  return std::string(base) + "_" + std::to_string(a) + "_" + std::to_string(b) + "_" +
         std::to_string(c);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

int initial_on_lock(const UnitSpec& unit) {
  return unit.initial.on ? std::max(0, unit.min_up_h - unit.initial.hours) : 0;
}

int initial_off_lock(const UnitSpec& unit) {
  return unit.initial.on ? 0 : std::max(0, unit.min_down_h - unit.initial.hours);
}

UcVariables create_variables(Model& model, const CaseInput& c,
                             const sysmodel::ApproximatedProfiles& profiles) {
  UcVariables vars;
  vars.horizon = c.horizon_hours;
  vars.n_units = static_cast<int>(c.units.size());
  const int T = vars.horizon;
  const int I = vars.n_units;

  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < I; ++i) {
      const UnitSpec& unit = c.units[i];
      double u_lo = 0.0, u_hi = 1.0;
      if (t < initial_on_lock(unit)) u_lo = 1.0;
      if (t < initial_off_lock(unit)) u_hi = 0.0;
      vars.u_.push_back(model.add_var(VarKind::kBinary, u_lo, u_hi, tag("u", t, i)));
      // Commitment drives the model; startup/shutdown flags follow from the
      // logic rows once u is integral, so branch on u first.
      model.set_branch_priority(vars.u_.back(), 1);
      // A startup at t needs its whole synchronization window inside the
      // horizon, so the first allowed startup hour is su_duration_h.
      const double v_hi = t < unit.su_duration_h ? 0.0 : 1.0;
      vars.v_.push_back(model.add_var(VarKind::kBinary, 0.0, v_hi, tag("v", t, i)));
      vars.w_.push_back(model.add_var(VarKind::kBinary, 0.0, 1.0, tag("w", t, i)));
    }
  }
  for (int b = 0; b < kNumCoeffs; ++b) {
    for (int t = 0; t < T; ++t) {
      for (int i = 0; i < I; ++i) {
        const UnitSpec& unit = c.units[i];
        vars.p_[b].push_back(
            model.add_var(VarKind::kContinuous, 0.0, unit.p_max_mw, tag("p", b, t, i)));
        vars.r_[b].push_back(
            model.add_var(VarKind::kContinuous, 0.0, unit.p_max_mw, tag("r", b, t, i)));
        vars.su_[b].push_back(
            model.add_var(VarKind::kContinuous, 0.0, unit.p_min_mw, tag("su", b, t, i)));
        vars.sd_[b].push_back(
            model.add_var(VarKind::kContinuous, 0.0, unit.p_min_mw, tag("sd", b, t, i)));
      }
    }
  }
  for (int b = 0; b < kNumCoeffs; ++b) {
    for (int t = 0; t < T; ++t) {
      const double res_coeff = profiles.res.segments[t].coeffs[b];
      vars.curt_[b].push_back(model.add_var(VarKind::kContinuous, 0.0,
                                            std::max(0.0, res_coeff), tag("curt", b, t)));
    }
  }
  return vars;
}

void build_commitment_logic(Model& model, const UcVariables& vars, const CaseInput& c) {
  for (int t = 0; t < vars.horizon; ++t) {
    for (int i = 0; i < vars.n_units; ++i) {
      std::vector<LinearTerm> terms = {{vars.u(t, i), 1.0},
                                       {vars.v(t, i), -1.0},
                                       {vars.w(t, i), 1.0}};
      double rhs = 0.0;
      if (t == 0) {
        rhs = c.units[i].initial.on ? 1.0 : 0.0;
      } else {
        terms.push_back({vars.u(t - 1, i), -1.0});
      }
      model.add_constraint(std::move(terms), Sense::kEq, rhs, tag("logic", t, i));
      model.add_constraint({{vars.v(t, i), 1.0}, {vars.w(t, i), 1.0}}, Sense::kLe, 1.0,
                           tag("excl", t, i));
    }
  }
}

void build_min_up_down(Model& model, const UcVariables& vars, const CaseInput& c) {
  for (int t = 0; t < vars.horizon; ++t) {
    for (int i = 0; i < vars.n_units; ++i) {
      const UnitSpec& unit = c.units[i];
      std::vector<LinearTerm> up;
      for (int s = std::max(0, t - unit.min_up_h + 1); s <= t; ++s) {
        up.push_back({vars.v(s, i), 1.0});
      }
      up.push_back({vars.u(t, i), -1.0});
      model.add_constraint(std::move(up), Sense::kLe, 0.0, tag("minup", t, i));

      std::vector<LinearTerm> down;
      for (int s = std::max(0, t - unit.min_down_h + 1); s <= t; ++s) {
        down.push_back({vars.w(s, i), 1.0});
      }
      down.push_back({vars.u(t, i), 1.0});
      model.add_constraint(std::move(down), Sense::kLe, 1.0, tag("mindn", t, i));
    }
  }
}

void build_su_sd_trajectories(Model& model, const UcVariables& vars, const CaseInput& c) {
  const int T = vars.horizon;
  for (int h = 0; h < T; ++h) {
    for (int i = 0; i < vars.n_units; ++i) {
      const UnitSpec& unit = c.units[i];
      const double pmin = unit.p_min_mw;

      // Startup window occupancy of hour h: a startup at h+1 .. h+SU
      // places h inside its synchronization ramp.
      std::vector<LinearTerm> occ_su;
      for (int k = 1; k <= unit.su_duration_h; ++k) {
        if (h + k < T) occ_su.push_back({vars.v(h + k, i), -pmin});
      }
      for (int b = 0; b < kNumCoeffs; ++b) {
        std::vector<LinearTerm> gate = occ_su;
        gate.push_back({vars.su(b, h, i), 1.0});
        model.add_constraint(std::move(gate), Sense::kLe, 0.0, tag("suga", b, h, i));
      }
      // First window hour starts from zero output.
      std::vector<LinearTerm> start = {{vars.su(0, h, i), 1.0}};
      for (int k = 1; k <= unit.su_duration_h - 1; ++k) {
        if (h + k < T) start.push_back({vars.v(h + k, i), -pmin});
      }
      model.add_constraint(std::move(start), Sense::kLe, 0.0, tag("sufs", h, i));
      // Last window hour ends at minimum output.
      if (h + 1 < T) {
        model.add_constraint({{vars.su(3, h, i), 1.0}, {vars.v(h + 1, i), -pmin}},
                             Sense::kGe, 0.0, tag("sue", h, i));
      }
      for (int b = 1; b < kNumCoeffs; ++b) {
        model.add_constraint({{vars.su(b, h, i), 3.0}, {vars.su(b - 1, h, i), -3.0}},
                             Sense::kLe, unit.ramp_up_mw_h, tag("surup", b, h, i));
        model.add_constraint({{vars.su(b, h, i), 3.0}, {vars.su(b - 1, h, i), -3.0}},
                             Sense::kGe, -unit.ramp_down_mw_h, tag("surdn", b, h, i));
      }

      // Shutdown window occupancy: a shutdown at h-SD+1 .. h covers h.
      std::vector<LinearTerm> occ_sd;
      for (int k = 0; k <= unit.sd_duration_h - 1; ++k) {
        if (h - k >= 0) occ_sd.push_back({vars.w(h - k, i), -pmin});
      }
      for (int b = 0; b < kNumCoeffs; ++b) {
        std::vector<LinearTerm> gate = occ_sd;
        gate.push_back({vars.sd(b, h, i), 1.0});
        model.add_constraint(std::move(gate), Sense::kLe, 0.0, tag("sdga", b, h, i));
      }
      // First window hour starts at minimum output.
      model.add_constraint({{vars.sd(0, h, i), 1.0}, {vars.w(h, i), -pmin}}, Sense::kGe,
                           0.0, tag("sdfs", h, i));
      // Last window hour ends at zero.
      std::vector<LinearTerm> end = {{vars.sd(3, h, i), 1.0}};
      for (int k = 0; k <= unit.sd_duration_h - 2; ++k) {
        if (h - k >= 0) end.push_back({vars.w(h - k, i), -pmin});
      }
      model.add_constraint(std::move(end), Sense::kLe, 0.0, tag("sdend", h, i));
      for (int b = 1; b < kNumCoeffs; ++b) {
        model.add_constraint({{vars.sd(b, h, i), 3.0}, {vars.sd(b - 1, h, i), -3.0}},
                             Sense::kLe, unit.ramp_up_mw_h, tag("sdrup", b, h, i));
        model.add_constraint({{vars.sd(b, h, i), 3.0}, {vars.sd(b - 1, h, i), -3.0}},
                             Sense::kGe, -unit.ramp_down_mw_h, tag("sdrdn", b, h, i));
      }
    }
  }
}

void build_continuity(Model& model, const UcVariables& vars, const CaseInput& c) {
  auto merged = [&](int b, int t, int i, double coeff, std::vector<LinearTerm>& out) {
    out.push_back({vars.p(b, t, i), coeff});
    out.push_back({vars.su(b, t, i), coeff});
    out.push_back({vars.sd(b, t, i), coeff});
  };
  for (int i = 0; i < vars.n_units; ++i) {
    if (c.units[i].initial.on) {
      std::vector<LinearTerm> anchor;
      merged(0, 0, i, 1.0, anchor);
      model.add_constraint(std::move(anchor), Sense::kEq, c.units[i].initial.output_mw,
                           tag("c0i", i));
    }
    for (int t = 1; t < vars.horizon; ++t) {
      std::vector<LinearTerm> c0;
      merged(0, t, i, 1.0, c0);
      merged(3, t - 1, i, -1.0, c0);
      model.add_constraint(std::move(c0), Sense::kEq, 0.0, tag("c0", t, i));

      std::vector<LinearTerm> c1;
      merged(1, t, i, 1.0, c1);
      merged(0, t, i, -1.0, c1);
      merged(3, t - 1, i, -1.0, c1);
      merged(2, t - 1, i, 1.0, c1);
      model.add_constraint(std::move(c1), Sense::kEq, 0.0, tag("c1", t, i));
    }
  }
}

void build_capacity_reserve(Model& model, const UcVariables& vars, const CaseInput& c,
                            const BuildOptions& opt) {
  for (int b = 0; b < kNumCoeffs; ++b) {
    for (int t = 0; t < vars.horizon; ++t) {
      for (int i = 0; i < vars.n_units; ++i) {
        const UnitSpec& unit = c.units[i];
        model.add_constraint({{vars.p(b, t, i), 1.0}, {vars.u(t, i), -unit.p_min_mw}},
                             Sense::kGe, 0.0, tag("caplo", b, t, i));
        model.add_constraint({{vars.p(b, t, i), 1.0},
                              {vars.r(b, t, i), 1.0},
                              {vars.u(t, i), -unit.p_max_mw}},
                             Sense::kLe, 0.0, tag("caphi", b, t, i));
        // Hour-start power of a freshly started unit is pinned at p_min by
        // the SU anchor, and hour-end power before a shutdown likewise;
        // stating that on the binaries tightens the relaxation.
        if (b == 0) {
          model.add_constraint({{vars.p(0, t, i), 1.0},
                                {vars.u(t, i), -unit.p_max_mw},
                                {vars.v(t, i), unit.p_max_mw - unit.p_min_mw}},
                               Sense::kLe, 0.0, tag("captv", 0, t, i));
        }
        if (b == 3 && t + 1 < vars.horizon) {
          model.add_constraint({{vars.p(3, t, i), 1.0},
                                {vars.u(t, i), -unit.p_max_mw},
                                {vars.w(t + 1, i), unit.p_max_mw - unit.p_min_mw}},
                               Sense::kLe, 0.0, tag("captw", 3, t, i));
        }
        if (opt.reserve_deliverability_cap) {
          const double cap = unit.ramp_up_mw_h * (c.params.t_g_s / 3600.0);
          model.add_constraint({{vars.r(b, t, i), 1.0}}, Sense::kLe, cap,
                               tag("rcap", b, t, i));
        }
      }
    }
  }
}

void build_ramping(Model& model, const UcVariables& vars, const CaseInput& c) {
  for (int t = 0; t < vars.horizon; ++t) {
    for (int i = 0; i < vars.n_units; ++i) {
      const UnitSpec& unit = c.units[i];
      for (int b = 1; b < kNumCoeffs; ++b) {
        model.add_constraint({{vars.p(b, t, i), 3.0}, {vars.p(b - 1, t, i), -3.0}},
                             Sense::kLe, unit.ramp_up_mw_h, tag("rmpup", b, t, i));
        model.add_constraint({{vars.p(b, t, i), 3.0}, {vars.p(b - 1, t, i), -3.0}},
                             Sense::kGe, -unit.ramp_down_mw_h, tag("rmpdn", b, t, i));
      }
    }
  }
}

void build_power_balance(Model& model, const UcVariables& vars, const CaseInput& c,
                         const sysmodel::ApproximatedProfiles& profiles) {
  (void)c;
  for (int b = 0; b < kNumCoeffs; ++b) {
    for (int t = 0; t < vars.horizon; ++t) {
      std::vector<LinearTerm> terms;
      for (int i = 0; i < vars.n_units; ++i) {
        terms.push_back({vars.p(b, t, i), 1.0});
        terms.push_back({vars.su(b, t, i), 1.0});
        terms.push_back({vars.sd(b, t, i), 1.0});
      }
      terms.push_back({vars.curt(b, t), -1.0});
      const double rhs =
          profiles.demand.segments[t].coeffs[b] - profiles.res.segments[t].coeffs[b];
      model.add_constraint(std::move(terms), Sense::kEq, rhs, tag("bal", b, t));
    }
  }
}

void build_objective(Model& model, const UcVariables& vars, const CaseInput& c,
                     const BuildOptions& opt) {
  std::vector<LinearTerm> obj;
  for (int t = 0; t < vars.horizon; ++t) {
    for (int i = 0; i < vars.n_units; ++i) {
      const UnitSpec& unit = c.units[i];
      if (unit.startup_cost > 0) obj.push_back({vars.v(t, i), unit.startup_cost});
      if (unit.no_load_cost > 0) obj.push_back({vars.u(t, i), unit.no_load_cost});
      // Exact hourly energy of a degree-3 segment is (sum of coeffs)/4.
      const double energy_price = unit.marginal_cost / 4.0;
      for (int b = 0; b < kNumCoeffs; ++b) {
        obj.push_back({vars.p(b, t, i), energy_price});
        obj.push_back({vars.su(b, t, i), energy_price});
        obj.push_back({vars.sd(b, t, i), energy_price});
      }
    }
    if (opt.curtailment_penalty > 0) {
      for (int b = 0; b < kNumCoeffs; ++b) {
        obj.push_back({vars.curt(b, t), opt.curtailment_penalty / 4.0});
      }
    }
  }
  model.set_objective(true, std::move(obj));
}

Assembled assemble(const CaseInput& c, const sysmodel::ApproximatedProfiles& profiles,
                   Mode mode, const freq::NadirSurrogate* surrogate,
                   const BuildOptions& opt) {
  if (mode == Mode::kCfcuc && surrogate == nullptr) {
    throw std::invalid_argument("assemble: cfcuc mode needs a trained nadir surrogate");
  }
  Assembled out{Model(c.name + "_" + sysmodel::to_string(mode)), UcVariables{}, profiles};
  out.vars = create_variables(out.model, c, profiles);
  build_commitment_logic(out.model, out.vars, c);
  build_min_up_down(out.model, out.vars, c);
  build_su_sd_trajectories(out.model, out.vars, c);
  build_continuity(out.model, out.vars, c);
  build_capacity_reserve(out.model, out.vars, c, opt);
  build_ramping(out.model, out.vars, c);
  build_power_balance(out.model, out.vars, c, profiles);
  build_objective(out.model, out.vars, c, opt);
  if (mode == Mode::kRocofCuc || mode == Mode::kCfcuc) {
    freq::build_rocof_constraints(out.model, out.vars, c);
    freq::build_qss_constraints(out.model, out.vars, c, profiles);
  }
  if (mode == Mode::kCfcuc) {
    freq::build_nadir_constraints(out.model, out.vars, c, *surrogate);
  }
  out.model.freeze();
  return out;
}

namespace {

[[noreturn]] void schedule_error(const std::string& unit, int hour, const std::string& what) {
  throw std::runtime_error("schedule invariant: unit '" + unit + "' hour " +
                           std::to_string(hour) + ": " + what);
}

}  // namespace

Schedule extract_schedule(const milp::Solution& solution, const UcVariables& vars,
                          const CaseInput& c, const BuildOptions& opt) {
  if (!solution.has_values()) {
    throw std::invalid_argument("extract_schedule: solution has no values (" +
                                std::string(milp::to_string(solution.status)) + ")");
  }
  const int T = vars.horizon;
  const int I = vars.n_units;
  Schedule s;
  s.horizon = T;
  s.status = solution.status;
  s.gap = solution.gap;
  s.objective = solution.objective;
  for (const auto& unit : c.units) s.unit_ids.push_back(unit.id);

  s.committed.assign(T, std::vector<int>(I, 0));
  s.started.assign(T, std::vector<int>(I, 0));
  s.stopped.assign(T, std::vector<int>(I, 0));
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < I; ++i) {
      s.committed[t][i] = solution.value(vars.u(t, i)) > 0.5 ? 1 : 0;
      s.started[t][i] = solution.value(vars.v(t, i)) > 0.5 ? 1 : 0;
      s.stopped[t][i] = solution.value(vars.w(t, i)) > 0.5 ? 1 : 0;
    }
  }

  s.power.resize(I);
  s.reserve.resize(I);
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      std::vector<double> merged(kNumCoeffs), res(kNumCoeffs);
      for (int b = 0; b < kNumCoeffs; ++b) {
        merged[b] = solution.value(vars.p(b, t, i)) + solution.value(vars.su(b, t, i)) +
                    solution.value(vars.sd(b, t, i));
        res[b] = solution.value(vars.r(b, t, i));
        if (opt.lift_reserve_to_headroom) {
          double headroom = s.committed[t][i]
                                ? c.units[i].p_max_mw - solution.value(vars.p(b, t, i))
                                : 0.0;
          if (opt.reserve_deliverability_cap) {
            headroom = std::min(headroom,
                                c.units[i].ramp_up_mw_h * (c.params.t_g_s / 3600.0));
          }
          res[b] = std::max(res[b], std::max(0.0, headroom));
        }
      }
      s.power[i].segments.emplace_back(t, std::move(merged));
      s.reserve[i].segments.emplace_back(t, std::move(res));
    }
  }
  for (int t = 0; t < T; ++t) {
    std::vector<double> curt(kNumCoeffs);
    for (int b = 0; b < kNumCoeffs; ++b) curt[b] = solution.value(vars.curt(b, t));
    s.curtailment.segments.emplace_back(t, std::move(curt));
  }

  // Invariant sweep.
  constexpr double kTol = 1e-6;
  for (int i = 0; i < I; ++i) {
    const UnitSpec& unit = c.units[i];
    if (unit.initial.on) {
      const double start = s.power[i].segments[0].coeffs[0];
      if (std::fabs(start - unit.initial.output_mw) > kTol) {
        schedule_error(unit.id, 0, "hour-0 output " + fmt(start) + " != initial " +
                                       fmt(unit.initial.output_mw));
      }
    }
    if (s.power[i].max_c0_residual() > kTol) {
      schedule_error(unit.id, -1, "c0 continuity residual " + fmt(s.power[i].max_c0_residual()));
    }
    if (s.power[i].max_c1_residual() > kTol) {
      schedule_error(unit.id, -1, "c1 continuity residual " + fmt(s.power[i].max_c1_residual()));
    }
    for (int t = 0; t < T; ++t) {
      for (int b = 0; b < kNumCoeffs; ++b) {
        const double power = s.power[i].segments[t].coeffs[b];
        const double reserve = s.reserve[i].segments[t].coeffs[b];
        if (power < -kTol || power > unit.p_max_mw + kTol) {
          schedule_error(unit.id, t, "power coefficient " + fmt(power) + " outside [0, p_max]");
        }
        if (s.committed[t][i] && power < unit.p_min_mw - kTol) {
          schedule_error(unit.id, t, "committed power coefficient below p_min");
        }
        if (reserve < -kTol) schedule_error(unit.id, t, "negative reserve");
        if (s.committed[t][i] && power + reserve > unit.p_max_mw + kTol) {
          schedule_error(unit.id, t, "power + reserve above p_max");
        }
      }
    }
  }

  // Cost breakdown re-derived from the trajectories.
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < I; ++i) {
      const UnitSpec& unit = c.units[i];
      s.energy_cost += unit.marginal_cost * bernstein::integral(s.power[i].segments[t]);
      if (s.committed[t][i]) s.no_load_cost += unit.no_load_cost;
      if (s.started[t][i]) s.startup_cost += unit.startup_cost;
    }
  }
  return s;
}

void write_schedule_csv(const Schedule& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schedule csv '" + path + "'");
  out << "unit,hour,b,coeff_mw,reserve_mw\n";
  for (size_t i = 0; i < s.unit_ids.size(); ++i) {
    for (int t = 0; t < s.horizon; ++t) {
      for (int b = 0; b < kNumCoeffs; ++b) {
        out << s.unit_ids[i] << ',' << t << ',' << b << ','
            << fmt(s.power[i].segments[t].coeffs[b]) << ','
            << fmt(s.reserve[i].segments[t].coeffs[b]) << '\n';
      }
    }
  }
}

void write_schedule_json(const Schedule& s, const std::string& path) {
  nlohmann::json doc;
  doc["status"] = milp::to_string(s.status);
  doc["gap"] = s.gap;
  doc["objective_eur"] = s.objective;
  doc["cost_breakdown"] = {{"energy_eur", s.energy_cost},
                           {"no_load_eur", s.no_load_cost},
                           {"startup_eur", s.startup_cost}};
  doc["horizon_hours"] = s.horizon;
  doc["units"] = s.unit_ids;
  doc["commitment"] = s.committed;
  doc["started"] = s.started;
  doc["stopped"] = s.stopped;
  nlohmann::json curt = nlohmann::json::array();
  for (const auto& seg : s.curtailment.segments) curt.push_back(seg.coeffs);
  doc["curtailment"] = curt;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schedule json '" + path + "'");
  out << doc.dump(2) << "\n";
}

Schedule load_schedule(const std::string& csv_path, const std::string& json_path) {
  Schedule s;
  {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error("cannot open schedule json '" + json_path + "'");
    nlohmann::json doc = nlohmann::json::parse(in);
    const std::string status = doc.at("status").get<std::string>();
    if (status == "optimal") s.status = milp::SolveStatus::kOptimal;
    else if (status == "feasible") s.status = milp::SolveStatus::kFeasible;
    else throw std::runtime_error("schedule json has non-solution status '" + status + "'");
    s.gap = doc.value("gap", 0.0);
    s.objective = doc.at("objective_eur").get<double>();
    s.energy_cost = doc.at("cost_breakdown").at("energy_eur").get<double>();
    s.no_load_cost = doc.at("cost_breakdown").at("no_load_eur").get<double>();
    s.startup_cost = doc.at("cost_breakdown").at("startup_eur").get<double>();
    s.horizon = doc.at("horizon_hours").get<int>();
    s.unit_ids = doc.at("units").get<std::vector<std::string>>();
    s.committed = doc.at("commitment").get<std::vector<std::vector<int>>>();
    s.started = doc.at("started").get<std::vector<std::vector<int>>>();
    s.stopped = doc.at("stopped").get<std::vector<std::vector<int>>>();
    int t = 0;
    for (const auto& coeffs : doc.at("curtailment")) {
      s.curtailment.segments.emplace_back(t++, coeffs.get<std::vector<double>>());
    }
  }

  s.power.assign(s.unit_ids.size(), {});
  s.reserve.assign(s.unit_ids.size(), {});
  std::vector<std::vector<std::vector<double>>> power(
      s.unit_ids.size(), std::vector<std::vector<double>>(s.horizon, std::vector<double>(4, 0.0)));
  auto reserve = power;

  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open schedule csv '" + csv_path + "'");
  std::string line;
  std::getline(in, line);
  if (line != "unit,hour,b,coeff_mw,reserve_mw") {
    throw std::runtime_error("schedule csv '" + csv_path + "': unexpected header");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string unit, cell;
    std::getline(fields, unit, ',');
    const auto unit_at = std::find(s.unit_ids.begin(), s.unit_ids.end(), unit);
    if (unit_at == s.unit_ids.end()) {
      throw std::runtime_error("schedule csv line " + std::to_string(line_no) +
                               ": unit '" + unit + "' not in summary json");
    }
    const size_t i = unit_at - s.unit_ids.begin();
    std::getline(fields, cell, ',');
    const int t = std::stoi(cell);
    std::getline(fields, cell, ',');
    const int b = std::stoi(cell);
    if (t < 0 || t >= s.horizon || b < 0 || b >= kNumCoeffs) {
      throw std::runtime_error("schedule csv line " + std::to_string(line_no) +
                               ": index out of range");
    }
    std::getline(fields, cell, ',');
    power[i][t][b] = std::stod(cell);
    std::getline(fields, cell, ',');
    reserve[i][t][b] = std::stod(cell);
  }
  for (size_t i = 0; i < s.unit_ids.size(); ++i) {
    for (int t = 0; t < s.horizon; ++t) {
      s.power[i].segments.emplace_back(t, std::move(power[i][t]));
      s.reserve[i].segments.emplace_back(t, std::move(reserve[i][t]));
    }
  }
  return s;
}

}  // namespace cuct::cuc
