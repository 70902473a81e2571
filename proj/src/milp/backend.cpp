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

#include "cuct/milp/backend.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cuct/milp/branch_bound.hpp"
#include "cuct/milp/mps.hpp"

namespace cuct::milp {

namespace {

class InternalBackend final : public SolveBackend {
 public:
  std::string name() const override { return "internal"; }
  Solution solve(const Model& model, const SolveParams& params) override {
    MilpOptions options;
    options.time_limit_s = params.time_limit_s;
    options.mip_gap = params.mip_gap;
    return solve_milp(model, options);
  }
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class FileBackend final : public SolveBackend {
 public:
  explicit FileBackend(std::string command) : command_(std::move(command)) {}

  std::string name() const override { return "external"; }

  Solution solve(const Model& model, const SolveParams& params) override {
    (void)params;  // limits are the external solver's own configuration
    std::string command = command_;
    if (command.empty()) {
      const char* env = std::getenv("CUCT_SOLVER_CMD");
      if (env == nullptr || *env == '\0') {
        throw std::runtime_error(
            "external backend: no command (set CUCT_SOLVER_CMD with {mps} and {sol})");
      }
      command = env;
    }

    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path();
    const std::string tag = "cuct_" + std::to_string(::getpid()) + "_" +
                            std::to_string(counter.fetch_add(1));
    const auto mps_path = dir / (tag + ".mps");
    const auto sol_path = dir / (tag + ".sol");
    const auto log_path = dir / (tag + ".log");

    {
      std::ofstream out(mps_path);
      out << export_mps(model);
    }
    substitute(command, "{mps}", mps_path.string());
    substitute(command, "{sol}", sol_path.string());
    const int rc = std::system((command + " > " + log_path.string() + " 2>&1").c_str());
    if (rc != 0) {
      throw std::runtime_error("external solver failed (exit " + std::to_string(rc) +
                               "): " + slurp(log_path));
    }
    Solution solution = parse_solution_file(sol_path, model);
    std::error_code ec;
    std::filesystem::remove(mps_path, ec);
    std::filesystem::remove(sol_path, ec);
    std::filesystem::remove(log_path, ec);
    return solution;
  }

 private:
  static void substitute(std::string& text, const std::string& key,
                         const std::string& value) {
    for (size_t at = text.find(key); at != std::string::npos; at = text.find(key)) {
      text.replace(at, key.size(), value);
    }
  }

  static Solution parse_solution_file(const std::filesystem::path& path,
                                      const Model& model) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("external backend: no solution file " + path.string());
    Solution solution;
    solution.values.assign(model.num_vars(), 0.0);
    bool have_status = false;
    std::string key;
    while (in >> key) {
      if (key == "status") {
        std::string status;
        in >> status;
        have_status = true;
        if (status == "optimal") solution.status = SolveStatus::kOptimal;
        else if (status == "feasible") solution.status = SolveStatus::kFeasible;
        else if (status == "infeasible") solution.status = SolveStatus::kInfeasible;
        else if (status == "time-limit") solution.status = SolveStatus::kTimeLimit;
        else throw std::runtime_error("external backend: unknown status '" + status + "'");
      } else if (key == "objective") {
        in >> solution.objective;
      } else if (key == "gap") {
        in >> solution.gap;
      } else {
        double value = 0.0;
        if (!(in >> value)) {
          throw std::runtime_error("external backend: bad solution line at '" + key + "'");
        }
        const VarHandle handle = model.var_by_name(key);
        if (!handle.valid()) {
          throw std::runtime_error("external backend: unknown column '" + key + "'");
        }
        solution.values[handle.id] = value;
      }
    }
    if (!have_status) throw std::runtime_error("external backend: missing status line");
    if (!solution.has_values()) solution.values.clear();
    return solution;
  }

  std::string command_;
};

std::vector<std::unique_ptr<SolveBackend>>& registry() {
  static std::vector<std::unique_ptr<SolveBackend>> backends;
  return backends;
}

void ensure_defaults() {
  if (registry().empty()) {
    registry().push_back(make_internal_backend());
    registry().push_back(make_file_backend());
  }
}

}  // namespace

std::unique_ptr<SolveBackend> make_internal_backend() {
  return std::make_unique<InternalBackend>();
}

std::unique_ptr<SolveBackend> make_file_backend(std::string command) {
  return std::make_unique<FileBackend>(std::move(command));
}

void register_backend(std::unique_ptr<SolveBackend> backend) {
  ensure_defaults();
  registry().push_back(std::move(backend));
}

SolveBackend* find_backend(const std::string& name) {
  ensure_defaults();
  for (auto& backend : registry()) {
    if (backend->name() == name) return backend.get();
  }
  return nullptr;
}

std::vector<std::string> backend_names() {
  ensure_defaults();
  std::vector<std::string> names;
  for (auto& backend : registry()) names.push_back(backend->name());
  return names;
}

Solution solve(const Model& model, const std::string& backend_name,
               double time_limit_s, double mip_gap) {
  SolveBackend* backend = find_backend(backend_name);
  if (backend == nullptr) {
    std::string known;
    for (const auto& n : backend_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown backend '" + backend_name +
                                "' (registered: " + known + ")");
  }
  if (!model.frozen()) throw std::logic_error("solve: model not frozen");
  SolveParams params{time_limit_s, mip_gap};
  return backend->solve(model, params);
}

}  // namespace cuct::milp
