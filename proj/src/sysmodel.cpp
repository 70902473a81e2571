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

#include "cuct/sysmodel.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cuct::sysmodel {

using nlohmann::json;

Mode parse_mode(const std::string& text) {
  if (text == "cuc") return Mode::kCuc;
  if (text == "rocof-cuc") return Mode::kRocofCuc;
  if (text == "cfcuc") return Mode::kCfcuc;
  throw std::invalid_argument("unknown mode '" + text + "' (cuc|rocof-cuc|cfcuc)");
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::kCuc: return "cuc";
    case Mode::kRocofCuc: return "rocof-cuc";
    case Mode::kCfcuc: return "cfcuc";
  }
  return "?";
}

double CaseInput::demand_min() const {
  return *std::min_element(demand_mw.begin(), demand_mw.end());
}

double CaseInput::demand_peak() const {
  return *std::max_element(demand_mw.begin(), demand_mw.end());
}

namespace {

[[noreturn]] void unit_error(const UnitSpec& u, const std::string& what) {
  throw std::invalid_argument("unit '" + u.id + "': " + what);
}

std::vector<double> load_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty profile file '" + path + "'");
  // Header is fixed: minute,value_mw
  if (line.rfind("minute,value_mw", 0) != 0) {
    throw std::runtime_error("profile '" + path + "': expected header 'minute,value_mw'");
  }
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("profile '" + path + "' line " + std::to_string(line_no) +
                               ": missing comma");
    }
    try {
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::runtime_error("profile '" + path + "' line " + std::to_string(line_no) +
                               ": bad value");
    }
  }
  return values;
}

std::vector<double> read_profile(const json& node, const std::string& base_dir,
                                 const char* which) {
  if (node.is_array()) {
    return node.get<std::vector<double>>();
  }
  if (node.is_object() && node.contains("csv")) {
    const auto file = std::filesystem::path(base_dir) / node.at("csv").get<std::string>();
    return load_profile_csv(file.string());
  }
  throw std::invalid_argument(std::string("profiles.") + which +
                              ": expected inline array or {\"csv\": path}");
}

int json_line_of_offset(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') ++line;
  }
  return line;
}

}  // namespace

void validate(const CaseInput& c) {
  const auto& p = c.params;
  if (c.horizon_hours < 1) throw std::invalid_argument("horizon_hours must be >= 1");
  if (p.f0_hz <= 0) throw std::invalid_argument("params.f0_hz must be > 0");
  if (p.damping < 0 || p.damping > 1) throw std::invalid_argument("params.damping must be in [0,1]");
  if (p.t_g_s <= 0) throw std::invalid_argument("params.t_g_s must be > 0");
  if (p.rocof_limit_hz_s <= 0) throw std::invalid_argument("params.rocof_limit_hz_per_s must be > 0");
  if (p.qss_limit_hz <= 0) throw std::invalid_argument("params.qss_limit_hz must be > 0");
  if (p.nadir_limit_hz <= 0) throw std::invalid_argument("params.nadir_limit_hz must be > 0");

  if (c.units.empty()) throw std::invalid_argument("case has no units");
  for (const auto& u : c.units) {
    if (u.id.empty()) throw std::invalid_argument("unit with empty id");
    if (!(u.p_min_mw > 0)) unit_error(u, "p_min_mw must be > 0");
    if (u.p_min_mw > u.p_max_mw) unit_error(u, "p_min_mw exceeds p_max_mw");
    if (!(u.ramp_up_mw_h > 0)) unit_error(u, "ramp_up_mw_h must be > 0");
    if (!(u.ramp_down_mw_h > 0)) unit_error(u, "ramp_down_mw_h must be > 0");
    if (u.min_up_h < 1) unit_error(u, "min_up_h must be >= 1");
    if (u.min_down_h < 1) unit_error(u, "min_down_h must be >= 1");
    if (u.su_duration_h < 1) unit_error(u, "su_duration_h must be >= 1");
    if (u.sd_duration_h < 1) unit_error(u, "sd_duration_h must be >= 1");
    if (u.min_down_h < u.su_duration_h + u.sd_duration_h) {
      unit_error(u, "min_down_h must cover su_duration_h + sd_duration_h");
    }
    if (u.inertia_s < 0) unit_error(u, "inertia_s must be >= 0");
    if (!(u.base_mva > 0)) unit_error(u, "base_mva must be > 0");
    if (u.marginal_cost < 0) unit_error(u, "marginal_cost must be >= 0");
    if (u.no_load_cost < 0) unit_error(u, "no_load_cost must be >= 0");
    if (u.startup_cost < 0) unit_error(u, "startup_cost must be >= 0");
    if (u.initial.hours < 0) unit_error(u, "initial.hours must be >= 0");
    if (u.initial.on) {
      if (u.initial.output_mw < u.p_min_mw - 1e-9 || u.initial.output_mw > u.p_max_mw + 1e-9) {
        unit_error(u, "initial.output_mw outside [p_min_mw, p_max_mw]");
      }
    }
  }
  for (size_t a = 0; a < c.units.size(); ++a) {
    for (size_t b = a + 1; b < c.units.size(); ++b) {
      if (c.units[a].id == c.units[b].id) {
        throw std::invalid_argument("duplicate unit id '" + c.units[a].id + "'");
      }
    }
  }

  if (60 % c.sample_step_min != 0 || c.samples_per_hour() < 4) {
    throw std::invalid_argument("sample_step_min must divide 60 with >= 4 samples per hour");
  }
  const size_t per_hour = static_cast<size_t>(c.samples_per_hour());
  const size_t need = per_hour * c.horizon_hours;
  if (c.demand_mw.size() != need && c.demand_mw.size() != need + 1) {
    throw std::invalid_argument("demand profile has " + std::to_string(c.demand_mw.size()) +
                                " samples; horizon needs " + std::to_string(need) + " or " +
                                std::to_string(need + 1));
  }
  if (c.res_mw.size() != c.demand_mw.size()) {
    throw std::invalid_argument("res profile sample count differs from demand");
  }
  for (size_t k = 0; k < c.demand_mw.size(); ++k) {
    if (!(c.demand_mw[k] > 0)) {
      throw std::invalid_argument("demand must be > 0 (sample " + std::to_string(k) + ")");
    }
    if (c.res_mw[k] < 0) {
      throw std::invalid_argument("res must be >= 0 (sample " + std::to_string(k) + ")");
    }
  }
}

CaseInput parse_case(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("case parse error at line " +
                             std::to_string(json_line_of_offset(json_text, e.byte)) + ": " +
                             e.what());
  }

  CaseInput c;
  try {
    c.name = doc.value("name", std::string("case"));
    c.horizon_hours = doc.at("horizon_hours").get<int>();
    const json& p = doc.at("params");
    c.params.f0_hz = p.value("f0_hz", 50.0);
    c.params.damping = p.value("damping", 0.01);
    c.params.t_g_s = p.value("t_g_s", 3.0);
    c.params.rocof_limit_hz_s = p.value("rocof_limit_hz_per_s", 2.0);
    c.params.qss_limit_hz = p.value("qss_limit_hz", 1.5);
    c.params.nadir_limit_hz = p.value("nadir_limit_hz", 2.5);
    c.params.mode = parse_mode(p.value("mode", std::string("cuc")));

    for (const json& ju : doc.at("units")) {
      UnitSpec u;
      u.id = ju.at("id").get<std::string>();
      u.p_min_mw = ju.at("p_min_mw").get<double>();
      u.p_max_mw = ju.at("p_max_mw").get<double>();
      u.ramp_up_mw_h = ju.at("ramp_up_mw_per_h").get<double>();
      u.ramp_down_mw_h = ju.at("ramp_down_mw_per_h").get<double>();
      u.min_up_h = ju.at("min_up_h").get<int>();
      u.min_down_h = ju.at("min_down_h").get<int>();
      u.su_duration_h = ju.value("su_duration_h", 1);
      u.sd_duration_h = ju.value("sd_duration_h", 1);
      u.inertia_s = ju.at("inertia_s").get<double>();
      u.base_mva = ju.at("base_mva").get<double>();
      u.marginal_cost = ju.at("marginal_cost_eur_mwh").get<double>();
      u.no_load_cost = ju.value("no_load_cost_eur_h", 0.0);
      u.startup_cost = ju.value("startup_cost_eur", 0.0);
      if (ju.contains("initial")) {
        const json& init = ju.at("initial");
        u.initial.on = init.value("on", false);
        u.initial.hours = init.value("hours", 24);
        u.initial.output_mw = init.value("output_mw", 0.0);
      }
      c.units.push_back(std::move(u));
    }

    const json& profiles = doc.at("profiles");
    c.sample_step_min = profiles.value("step_min", 5);
    c.demand_mw = read_profile(profiles.at("demand"), base_dir, "demand");
    c.res_mw = read_profile(profiles.at("res"), base_dir, "res");
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("case schema error: ") + e.what());
  }

  validate(c);
  return c;
}

CaseInput load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open case file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_case(buffer.str(), std::filesystem::path(path).parent_path().string());
}

std::string serialize_case(const CaseInput& c) {
  json doc;
  doc["name"] = c.name;
  doc["horizon_hours"] = c.horizon_hours;
  doc["params"] = {
      {"f0_hz", c.params.f0_hz},
      {"damping", c.params.damping},
      {"t_g_s", c.params.t_g_s},
      {"rocof_limit_hz_per_s", c.params.rocof_limit_hz_s},
      {"qss_limit_hz", c.params.qss_limit_hz},
      {"nadir_limit_hz", c.params.nadir_limit_hz},
      {"mode", to_string(c.params.mode)},
  };
  doc["units"] = json::array();
  for (const auto& u : c.units) {
    json ju = {
        {"id", u.id},
        {"p_min_mw", u.p_min_mw},
        {"p_max_mw", u.p_max_mw},
        {"ramp_up_mw_per_h", u.ramp_up_mw_h},
        {"ramp_down_mw_per_h", u.ramp_down_mw_h},
        {"min_up_h", u.min_up_h},
        {"min_down_h", u.min_down_h},
        {"su_duration_h", u.su_duration_h},
        {"sd_duration_h", u.sd_duration_h},
        {"inertia_s", u.inertia_s},
        {"base_mva", u.base_mva},
        {"marginal_cost_eur_mwh", u.marginal_cost},
        {"no_load_cost_eur_h", u.no_load_cost},
        {"startup_cost_eur", u.startup_cost},
        {"initial",
         {{"on", u.initial.on}, {"hours", u.initial.hours}, {"output_mw", u.initial.output_mw}}},
    };
    doc["units"].push_back(std::move(ju));
  }
  doc["profiles"] = {
      {"step_min", c.sample_step_min},
      {"demand", c.demand_mw},
      {"res", c.res_mw},
  };
  return doc.dump(2) + "\n";
}

void save_case(const CaseInput& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write case file '" + path + "'");
  out << serialize_case(c);
}

namespace {

bernstein::PiecewiseBernstein fit_chained(const std::vector<double>& samples,
                                          int per_hour, int horizon,
                                          std::vector<double>& rms_out) {
  bernstein::PiecewiseBernstein curve;
  rms_out.clear();
  for (int t = 0; t < horizon; ++t) {
    std::vector<std::pair<double, double>> pts;
    bool have_end_sample = false;
    for (int k = 0; k <= per_hour; ++k) {
      const size_t idx = static_cast<size_t>(t) * per_hour + k;
      if (idx >= samples.size()) break;
      pts.emplace_back(static_cast<double>(k) / per_hour, samples[idx]);
      if (k == per_hour) have_end_sample = true;
    }
    // Both endpoint values are pinned to the boundary samples; only the
    // slope chains from hour to hour, which keeps the recursion stable.
    bernstein::FitAnchors anchors;
    if (t > 0) {
      const auto& prev = curve.segments.back().coeffs;
      anchors.value0 = prev[3];
      anchors.slope0 = 3.0 * (prev[3] - prev[2]);
    } else {
      anchors.value0 = pts.front().second;
    }
    if (have_end_sample) anchors.value1 = pts.back().second;
    auto fit = bernstein::fit_segment(pts, 3, anchors, t);
    rms_out.push_back(fit.rms_residual);
    curve.segments.push_back(std::move(fit.segment));
  }
  return curve;
}

}  // namespace

ApproximatedProfiles approximate_profiles(const CaseInput& c) {
  validate(c);
  ApproximatedProfiles out;
  out.demand = fit_chained(c.demand_mw, c.samples_per_hour(), c.horizon_hours, out.demand_rms);
  out.res = fit_chained(c.res_mw, c.samples_per_hour(), c.horizon_hours, out.res_rms);
  return out;
}

}  // namespace cuct::sysmodel
