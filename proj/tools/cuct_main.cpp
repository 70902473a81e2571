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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cuct/cuc.hpp"
#include "cuct/freq.hpp"
#include "cuct/milp/backend.hpp"
#include "cuct/milp/mps.hpp"
#include "cuct/nadirlearn.hpp"
#include "cuct/sysmodel.hpp"

namespace {

namespace fs = std::filesystem;
using namespace cuct;

struct CommonOpts {
  std::string case_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

double round2(double v) { return std::round(v * 100.0) / 100.0; }

void ensure_out(const std::string& dir) { fs::create_directories(dir); }

nadirlearn::NadirModel train_model(const sysmodel::CaseInput& c, double threshold_hz,
                                   int samples, std::uint64_t seed, const std::string& out_dir,
                                   bool write_files) {
  auto dataset = nadirlearn::generate_dataset(c, samples, seed);
  auto model = nadirlearn::fit_linear(dataset, threshold_hz);
  if (model.score < 0.9) {
    std::cerr << "warning: held-out surrogate score " << model.score << " below 0.9\n";
  }
  if (write_files) {
    nadirlearn::write_dataset_csv(dataset, out_dir + "/dataset.csv");
    nadirlearn::write_model_json(model, out_dir + "/model.json");
  }
  return model;
}

int cmd_train(const CommonOpts& common, double nadir_limit, int samples) {
  auto c = sysmodel::load_case(common.case_path);
  ensure_out(common.out_dir);
  auto model = train_model(c, nadir_limit, samples, common.seed, common.out_dir, true);
  std::cout << "trained surrogate: alpha=(" << model.alpha0 << ", " << model.alpha1 << ", "
            << model.alpha2 << ", " << model.alpha3 << ") threshold=" << model.threshold_hz
            << " Hz score=" << model.score << "\n";
  return 0;
}

int cmd_solve(const CommonOpts& common, const std::string& mode_name, double nadir_limit,
              const std::string& model_path, bool train_on_the_fly, int samples,
              const std::string& backend, double time_limit, double gap) {
  auto c = sysmodel::load_case(common.case_path);
  const auto mode = sysmodel::parse_mode(mode_name);
  ensure_out(common.out_dir);

  std::optional<nadirlearn::NadirModel> model;
  if (mode == sysmodel::Mode::kCfcuc) {
    if (!model_path.empty()) {
      model = nadirlearn::load_model_json(model_path);
      if (std::fabs(model->threshold_hz - nadir_limit) > 1e-9) {
        std::cerr << "warning: model threshold " << model->threshold_hz
                  << " Hz differs from --nadir-limit " << nadir_limit << " Hz\n";
        model->threshold_hz = nadir_limit;
      }
    } else if (train_on_the_fly) {
      model = train_model(c, nadir_limit, samples, common.seed, common.out_dir, true);
    } else {
      std::cerr << "error: cfcuc needs --model or --train\n";
      return 2;
    }
  }

  auto profiles = sysmodel::approximate_profiles(c);
  freq::NadirSurrogate surrogate;
  if (model) surrogate = model->surrogate();
  auto assembled = cuc::assemble(c, profiles, mode, model ? &surrogate : nullptr);

  {
    std::ofstream mps(common.out_dir + "/model.mps");
    mps << milp::export_mps(assembled.model);
  }

  const auto t0 = std::chrono::steady_clock::now();
  milp::Solution solution;
  try {
    solution = milp::solve(assembled.model, backend, time_limit, gap);
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  }
  const double runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!solution.has_values()) {
    std::cerr << "solve ended without a usable schedule: "
              << milp::to_string(solution.status)
              << (solution.message.empty() ? "" : (" (" + solution.message + ")")) << "\n";
    return 4;
  }

  const auto schedule = cuc::extract_schedule(solution, assembled.vars, c);
  cuc::write_schedule_csv(schedule, common.out_dir + "/schedule.csv");
  cuc::write_schedule_json(schedule, common.out_dir + "/schedule.json");

  const auto sweep = freq::sweep_exact_nadir(schedule, c, profiles);
  freq::write_metric_json(sweep, 2.5, schedule.horizon, common.out_dir + "/nadir_metrics.json");
  freq::write_metric_csv(sweep, common.out_dir + "/nadir_minutes.csv");

  nlohmann::json summary;
  summary["mode"] = mode_name;
  summary["objective_eur"] = solution.objective;
  summary["objective_keur"] = round2(solution.objective / 1000.0);
  summary["runtime_s"] = runtime_s;
  summary["minutes_above_2p5hz"] = sweep.minutes_above(2.5);
  summary["status"] = milp::to_string(solution.status);
  summary["gap"] = solution.gap;
  if (model) summary["score"] = model->score;
  if (mode == sysmodel::Mode::kCfcuc) summary["nadir_limit_hz"] = nadir_limit;
  {
    std::ofstream out(common.out_dir + "/summary.json");
    out << summary.dump(2) << "\n";
  }
  std::cout << summary.dump(2) << "\n";
  return solution.status == milp::SolveStatus::kOptimal ||
                 solution.status == milp::SolveStatus::kFeasible
             ? 0
             : 4;
}

int cmd_evaluate(const CommonOpts& common, const std::string& schedule_dir,
                 std::vector<double> thresholds) {
  auto c = sysmodel::load_case(common.case_path);
  auto profiles = sysmodel::approximate_profiles(c);
  const auto schedule =
      cuc::load_schedule(schedule_dir + "/schedule.csv", schedule_dir + "/schedule.json");
  ensure_out(common.out_dir);

  const auto sweep = freq::sweep_exact_nadir(schedule, c, profiles);
  freq::write_metric_csv(sweep, common.out_dir + "/nadir_minutes.csv");
  nlohmann::json report;
  report["thresholds"] = nlohmann::json::array();
  for (double threshold : thresholds) {
    char tag[32];
    std::snprintf(tag, sizeof(tag), "%g", threshold);
    freq::write_metric_json(sweep, threshold, schedule.horizon,
                            common.out_dir + "/metrics_" + tag + "hz.json");
    report["thresholds"].push_back(
        {{"threshold_hz", threshold}, {"minutes_above", sweep.minutes_above(threshold)}});
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_mps_solve(const std::string& mps_path, const std::string& sol_path, double time_limit,
                  double gap) {
  std::ifstream in(mps_path);
  if (!in) {
    std::cerr << "cannot open '" << mps_path << "'\n";
    return 2;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto model = milp::parse_mps(buffer.str());
  const auto solution = milp::solve(model, "internal", time_limit, gap);
  std::ofstream out(sol_path);
  out << "status " << milp::to_string(solution.status) << "\n";
  if (solution.has_values()) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", solution.objective);
    out << "objective " << buf << "\n";
    for (int j = 0; j < model.num_vars(); ++j) {
      if (solution.values[j] == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", solution.values[j]);
      out << model.var(j).name << " " << buf << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-time unit commitment toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string mode_name = "cuc";
  std::string backend = "internal";
  std::string model_path;
  std::string schedule_dir;
  bool train_on_the_fly = false;
  double nadir_limit = 2.5;
  double time_limit = 1800.0;
  double gap = 1e-6;
  int samples = 12000;
  std::vector<double> thresholds = {2.5};
  std::string mps_path, sol_path;

  auto add_common = [&](CLI::App* cmd, bool needs_case = true) {
    if (needs_case) cmd->add_option("--case", common.case_path, "case file")->required();
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--seed", common.seed, "random seed");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve a case in a chosen mode");
  add_common(solve);
  solve->add_option("--mode", mode_name, "cuc | rocof-cuc | cfcuc");
  solve->add_option("--nadir-limit", nadir_limit, "frequency nadir limit, Hz");
  solve->add_option("--model", model_path, "trained nadir model json (cfcuc)");
  solve->add_flag("--train", train_on_the_fly, "train the nadir surrogate on the fly");
  solve->add_option("--samples", samples, "dataset size when training");
  solve->add_option("--backend", backend, "solver backend name");
  solve->add_option("--time-limit", time_limit, "solver time limit, seconds");
  solve->add_option("--gap", gap, "relative MIP gap");

  CLI::App* train = app.add_subcommand("train", "train the nadir surrogate");
  add_common(train);
  train->add_option("--nadir-limit", nadir_limit, "frequency nadir limit, Hz");
  train->add_option("--samples", samples, "dataset size");

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a solved schedule");
  add_common(evaluate);
  evaluate->add_option("--schedule", schedule_dir, "directory with schedule.csv/json")
      ->required();
  evaluate->add_option("--threshold", thresholds, "nadir thresholds, Hz");

  CLI::App* mps_solve = app.add_subcommand("mps-solve", "solve an MPS file (external-solver stand-in)");
  mps_solve->add_option("mps", mps_path, "input MPS file")->required();
  mps_solve->add_option("sol", sol_path, "output solution file")->required();
  mps_solve->add_option("--time-limit", time_limit, "time limit, seconds");
  mps_solve->add_option("--gap", gap, "relative MIP gap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      return cmd_solve(common, mode_name, nadir_limit, model_path, train_on_the_fly, samples,
                       backend, time_limit, gap);
    }
    if (train->parsed()) return cmd_train(common, nadir_limit, samples);
    if (evaluate->parsed()) return cmd_evaluate(common, schedule_dir, thresholds);
    if (mps_solve->parsed()) return cmd_mps_solve(mps_path, sol_path, time_limit, gap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
