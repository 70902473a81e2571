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

#include "cuct/milp/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "cuct/milp/simplex.hpp"

namespace cuct::milp {

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
  int parent = -1;
  int var = -1;          // branching variable fixed at this node (-1 for root)
  double fix = 0.0;      // value it is fixed to
  double bound = -kInf;  // parent LP objective, a valid lower bound
};

struct Frac {
  int var = -1;
  double value = 0.0;
};

}  // namespace

Solution solve_milp(const Model& model, const MilpOptions& options, MilpStats* stats) {
  if (!model.frozen()) throw std::logic_error("solve_milp: model not frozen");
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const bool trace = std::getenv("CUCT_MILP_TRACE") != nullptr;

  const double sense = model.minimize() ? 1.0 : -1.0;
  LpData lp_data = LpData::from_model(model);
  DualSimplex lp(std::move(lp_data));

  std::vector<int> binaries;
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.var(j);
    if (v.kind == VarKind::kBinary && v.lo < v.hi) binaries.push_back(j);
  }

  // Priority-then-fractionality choice on the current LP point.
  auto pick_fractional = [&]() -> Frac {
    Frac best;
    int best_priority = 0;
    double best_frac = kIntTol;
    for (int j : binaries) {
      const double x = lp.value(j);
      const double frac = std::fabs(x - std::round(x));
      if (frac <= kIntTol) continue;
      const int priority = model.branch_priority(j);
      if (best.var < 0 || priority > best_priority ||
          (priority == best_priority && frac > best_frac)) {
        best = Frac{j, x};
        best_priority = priority;
        best_frac = frac;
      }
    }
    return best;
  };

  bool have_incumbent = false;
  double incumbent = kInf;
  std::vector<double> incumbent_values;
  auto take_incumbent = [&](double objective) {
    if (objective < incumbent) {
      incumbent = objective;
      have_incumbent = true;
      incumbent_values.resize(model.num_vars());
      for (int j = 0; j < model.num_vars(); ++j) incumbent_values[j] = lp.value(j);
    }
  };

  auto cutoff = [&] {
    if (!have_incumbent) return kInf;
    return incumbent - std::max(1e-9, options.mip_gap * std::fabs(incumbent));
  };

  // Diving heuristic: round the branching variable to its nearest integer,
  // flip on infeasibility, repeat. UC relaxations are close to integral, so
  // this usually lands a feasible point within a few dozen warm re-solves.
  auto dive = [&] {
    for (size_t depth = 0; depth <= binaries.size(); ++depth) {
      const Frac frac = pick_fractional();
      if (frac.var < 0) {
        take_incumbent(lp.objective());
        return;
      }
      const double near = std::round(frac.value) >= 1.0 ? 1.0 : 0.0;
      lp.set_bounds(frac.var, near, near);
      if (lp.solve().status != LpStatus::kOptimal) {
        lp.set_bounds(frac.var, 1.0 - near, 1.0 - near);
        if (lp.solve().status != LpStatus::kOptimal) return;
      }
      if (have_incumbent && lp.objective() >= cutoff()) return;
    }
  };

  std::vector<Node> arena;
  arena.push_back(Node{});
  // Backtracking heap: lowest parent bound first, newest on ties.
  auto heap_less = [&](long a, long b) {
    if (arena[a].bound != arena[b].bound) return arena[a].bound > arena[b].bound;
    return a < b;
  };
  std::vector<long> open;
  open.push_back(0);

  long nodes = 0;
  bool timed_out = false;
  long plunge_next = -1;
  std::vector<std::pair<int, double>> path;
  double last_trace = 0.0;

  while (plunge_next >= 0 || !open.empty()) {
    if (elapsed() > options.time_limit_s || nodes >= options.node_limit) {
      timed_out = true;
      break;
    }
    long node_id;
    if (plunge_next >= 0) {
      node_id = plunge_next;
      plunge_next = -1;
      // The plunge child's bounds differ from the current LP state by one
      // fix, so the warm start is maximally effective.
      lp.set_bounds(arena[node_id].var, arena[node_id].fix, arena[node_id].fix);
    } else {
      std::pop_heap(open.begin(), open.end(), heap_less);
      node_id = open.back();
      open.pop_back();
      if (arena[node_id].bound >= cutoff()) continue;
      path.clear();
      for (long walk = node_id; walk > 0; walk = arena[walk].parent) {
        path.emplace_back(arena[walk].var, arena[walk].fix);
      }
      lp.reset_bounds();
      for (const auto& [var, fix] : path) lp.set_bounds(var, fix, fix);
    }
    if (arena[node_id].bound >= cutoff()) continue;

    ++nodes;
    const LpResult res = lp.solve();
    if (res.status == LpStatus::kInfeasible) continue;
    if (res.objective >= cutoff()) continue;

    const Frac frac = pick_fractional();
    if (frac.var < 0) {
      take_incumbent(res.objective);
      continue;
    }

    if (nodes == 1) {
      dive();
      lp.reset_bounds();
      const LpResult again = lp.solve();
      if (again.status != LpStatus::kOptimal) continue;
    }

    if (trace && elapsed() > last_trace + 2.0) {
      last_trace = elapsed();
      double heap_bound = kInf;
      for (long id : open) heap_bound = std::min(heap_bound, arena[id].bound);
      std::fprintf(stderr, "[bb] t=%.1fs nodes=%ld open=%zu node_obj=%.4f heap_bound=%s incumbent=%s\n",
                   elapsed(), nodes, open.size(), res.objective,
                   heap_bound == kInf ? "-" : std::to_string(heap_bound).c_str(),
                   have_incumbent ? std::to_string(incumbent).c_str() : "-");
    }

    const double near = std::round(frac.value) >= 1.0 ? 1.0 : 0.0;
    arena.push_back(Node{static_cast<int>(node_id), frac.var, 1.0 - near, res.objective});
    open.push_back(static_cast<long>(arena.size()) - 1);
    std::push_heap(open.begin(), open.end(), heap_less);
    arena.push_back(Node{static_cast<int>(node_id), frac.var, near, res.objective});
    plunge_next = static_cast<long>(arena.size()) - 1;
  }

  // Global lower bound over the remaining open nodes.
  double best_open_bound = kInf;
  for (long id : open) best_open_bound = std::min(best_open_bound, arena[id].bound);
  if (plunge_next >= 0) best_open_bound = std::min(best_open_bound, arena[plunge_next].bound);
  if (open.empty() && plunge_next < 0) best_open_bound = have_incumbent ? incumbent : kInf;

  Solution out;
  if (have_incumbent) {
    out.objective = sense * incumbent;
    out.values = std::move(incumbent_values);
    const double span = std::fabs(incumbent) > 1e-12 ? std::fabs(incumbent) : 1.0;
    out.gap = timed_out ? std::max(0.0, (incumbent - best_open_bound) / span) : 0.0;
    out.status = timed_out && out.gap > options.mip_gap ? SolveStatus::kFeasible
                                                        : SolveStatus::kOptimal;
  } else if (timed_out) {
    out.status = SolveStatus::kTimeLimit;
    out.message = "time or node limit reached without a feasible point";
  } else {
    out.status = SolveStatus::kInfeasible;
  }
  if (stats) {
    stats->nodes = nodes;
    stats->runtime_s = elapsed();
    stats->best_bound = best_open_bound == kInf ? out.objective : sense * best_open_bound;
  }
  return out;
}

}  // namespace cuct::milp
