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

#include "cuct/milp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace cuct::milp {

namespace {
constexpr double kFeasTol = 1e-7;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-7;
constexpr int kRefactorInterval = 60;

// Deterministic per-column jitter in (0.5, 1.5); breaks dual-degenerate
// ratio ties so the dual objective makes strict progress.
double jitter(int j) {
  unsigned long long z = 0x9E3779B97F4A7C15ULL * (j + 1);
  z ^= z >> 29;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 32;
  return 0.5 + static_cast<double>(z % 1000000) / 1000000.0;
}
}  // namespace

LpData LpData::from_model(const Model& model) {
  LpData lp;
  lp.n = model.num_vars();
  lp.m = model.num_rows();
  lp.cost.resize(lp.n);
  lp.lo.resize(lp.n);
  lp.hi.resize(lp.n);
  const double sign = model.minimize() ? 1.0 : -1.0;
  for (int j = 0; j < lp.n; ++j) {
    lp.cost[j] = sign * model.objective()[j];
    lp.lo[j] = model.var(j).lo;
    lp.hi[j] = model.var(j).hi;
  }
  lp.row_lo.resize(lp.m);
  lp.row_hi.resize(lp.m);
  std::vector<int> col_count(lp.n, 0);
  int nnz = 0;
  for (int r = 0; r < lp.m; ++r) {
    const auto& row = model.row(r);
    lp.row_lo[r] = row.sense == Sense::kLe ? -kInf : row.rhs;
    lp.row_hi[r] = row.sense == Sense::kGe ? kInf : row.rhs;
    for (const auto& t : row.terms) {
      ++col_count[t.var.id];
      ++nnz;
    }
  }
  lp.col_start.assign(lp.n + 1, 0);
  for (int j = 0; j < lp.n; ++j) lp.col_start[j + 1] = lp.col_start[j] + col_count[j];
  lp.row_idx.resize(nnz);
  lp.value.resize(nnz);
  std::vector<int> fill = lp.col_start;
  for (int r = 0; r < lp.m; ++r) {
    for (const auto& t : model.row(r).terms) {
      const int at = fill[t.var.id]++;
      lp.row_idx[at] = r;
      lp.value[at] = t.coeff;
    }
  }
  return lp;
}

DualSimplex::DualSimplex(LpData data)
    : data_(std::move(data)), cur_lo_(data_.lo), cur_hi_(data_.hi) {
  const int N = total();
  basis_pos_.assign(N, -1);
  state_.assign(N, VarState::kLower);
  value_.assign(N, 0.0);
  reduced_.assign(N, 0.0);
  pert_cost_.resize(data_.n);
  for (int j = 0; j < data_.n; ++j) {
    pert_cost_[j] = data_.cost[j] + 1e-9 * (1.0 + std::fabs(data_.cost[j])) * jitter(j);
  }
}

void DualSimplex::set_bounds(int structural, double lo, double hi) {
  cur_lo_[structural] = lo;
  cur_hi_[structural] = hi;
}

void DualSimplex::reset_bounds() {
  cur_lo_ = data_.lo;
  cur_hi_ = data_.hi;
}

void DualSimplex::cold_basis() {
  const int N = total();
  basic_.resize(data_.m);
  for (int r = 0; r < data_.m; ++r) {
    basic_[r] = data_.n + r;
    basis_pos_[data_.n + r] = r;
    state_[data_.n + r] = VarState::kBasic;
  }
  for (int j = 0; j < data_.n; ++j) {
    basis_pos_[j] = -1;
    state_[j] = VarState::kLower;
  }
  (void)N;
  factor_valid_ = false;
}

void DualSimplex::load_column(int j, std::vector<double>& dense_rows) const {
  if (j < data_.n) {
    for (int k = data_.col_start[j]; k < data_.col_start[j + 1]; ++k) {
      dense_rows[data_.row_idx[k]] += data_.value[k];
    }
  } else {
    dense_rows[j - data_.n] -= 1.0;
  }
}

double DualSimplex::column_dot(int j, const std::vector<double>& rho) const {
  if (j >= data_.n) return -rho[j - data_.n];
  double acc = 0.0;
  for (int k = data_.col_start[j]; k < data_.col_start[j + 1]; ++k) {
    acc += data_.value[k] * rho[data_.row_idx[k]];
  }
  return acc;
}

bool DualSimplex::refactorize() {
  const int m = data_.m;
  piv_row_.assign(m, -1);
  l_cols_.assign(m, {});
  u_cols_.assign(m, {});
  u_diag_.assign(m, 0.0);
  etas_.clear();

  // Eliminate sparse basis columns first; column order inside the factor is
  // free as long as the position permutation is tracked for the solves.
  elim_pos_.resize(m);
  for (int k = 0; k < m; ++k) elim_pos_[k] = k;
  auto col_nnz = [&](int k) {
    const int var = basic_[k];
    return var < data_.n ? data_.col_start[var + 1] - data_.col_start[var] : 1;
  };
  std::stable_sort(elim_pos_.begin(), elim_pos_.end(),
                   [&](int a, int b) { return col_nnz(a) < col_nnz(b); });
  pos_elim_.assign(m, -1);
  for (int e = 0; e < m; ++e) pos_elim_[elim_pos_[e]] = e;

  std::vector<int> row_pos(m, -1);
  std::vector<double> work(m, 0.0);
  std::vector<char> in_touched(m, 0);
  std::vector<int> touched;
  touched.reserve(64);
  auto touch = [&](int row) {
    if (!in_touched[row]) {
      in_touched[row] = 1;
      touched.push_back(row);
    }
  };

  for (int k = 0; k < m; ++k) {
    // Load basis column (in elimination order) and apply prior eliminations.
    const int var = basic_[elim_pos_[k]];
    if (var < data_.n) {
      for (int e = data_.col_start[var]; e < data_.col_start[var + 1]; ++e) {
        work[data_.row_idx[e]] += data_.value[e];
        touch(data_.row_idx[e]);
      }
    } else {
      work[var - data_.n] -= 1.0;
      touch(var - data_.n);
    }
    for (int j = 0; j < k; ++j) {
      const double t = work[piv_row_[j]];
      if (t == 0.0) continue;
      u_cols_[k].emplace_back(j, t);
      for (const auto& [row, lv] : l_cols_[j]) {
        touch(row);
        work[row] -= lv * t;
      }
    }
    // Partial pivoting over rows not yet pivoted.
    int best_row = -1;
    double best_mag = kPivotTol;
    for (int row : touched) {
      if (row_pos[row] >= 0) continue;
      const double mag = std::fabs(work[row]);
      if (mag > best_mag || (best_row >= 0 && mag == best_mag && row < best_row)) {
        best_mag = mag;
        best_row = row;
      }
    }
    if (best_row < 0) return false;  // singular basis
    const double pivot = work[best_row];
    piv_row_[k] = best_row;
    row_pos[best_row] = k;
    u_diag_[k] = pivot;
    for (int row : touched) {
      if (row_pos[row] >= 0 || work[row] == 0.0) continue;
      l_cols_[k].emplace_back(row, work[row] / pivot);
    }
    for (int row : touched) {
      work[row] = 0.0;
      in_touched[row] = 0;
    }
    touched.clear();
  }
  factor_valid_ = true;
  return true;
}

// Solves B x = b. Input dense by row index; output dense by basis position.
void DualSimplex::ftran(std::vector<double>& work_rows, std::vector<double>& out_pos) const {
  const int m = data_.m;
  scratch_.assign(m, 0.0);
  for (int j = 0; j < m; ++j) {
    const double t = work_rows[piv_row_[j]];
    scratch_[j] = t;
    if (t == 0.0) continue;
    for (const auto& [row, lv] : l_cols_[j]) work_rows[row] -= lv * t;
  }
  for (int k = m - 1; k >= 0; --k) {
    const double xk = scratch_[k] / u_diag_[k];
    scratch_[k] = xk;
    if (xk == 0.0) continue;
    for (const auto& [j, uv] : u_cols_[k]) scratch_[j] -= uv * xk;
  }
  out_pos.assign(m, 0.0);
  for (int e = 0; e < m; ++e) out_pos[elim_pos_[e]] = scratch_[e];
  for (const auto& eta : etas_) {
    const double t = out_pos[eta.pos] / eta.pivot;
    if (t != 0.0) {
      for (const auto& [k, wv] : eta.entries) out_pos[k] -= wv * t;
    }
    out_pos[eta.pos] = t;
  }
}

// Solves B' z = r. Input dense by basis position; output dense by row index.
void DualSimplex::btran(std::vector<double>& work_pos, std::vector<double>& out_rows) const {
  const int m = data_.m;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = work_pos[it->pos];
    for (const auto& [k, wv] : it->entries) acc -= wv * work_pos[k];
    work_pos[it->pos] = acc / it->pivot;
  }
  scratch_.resize(m);
  for (int e = 0; e < m; ++e) scratch_[e] = work_pos[elim_pos_[e]];
  // U' y = r (forward over elimination order).
  for (int k = 0; k < m; ++k) {
    double acc = scratch_[k];
    for (const auto& [j, uv] : u_cols_[k]) acc -= uv * scratch_[j];
    scratch_[k] = acc / u_diag_[k];
  }
  // L' z = y (backward; z indexed by row).
  out_rows.assign(m, 0.0);
  for (int j = m - 1; j >= 0; --j) {
    double acc = scratch_[j];
    for (const auto& [row, lv] : l_cols_[j]) acc -= lv * out_rows[row];
    out_rows[piv_row_[j]] = acc;
  }
}

void DualSimplex::compute_reduced_costs() {
  const int m = data_.m;
  std::vector<double> cb(m);
  for (int k = 0; k < m; ++k) cb[k] = var_cost(basic_[k]);
  std::vector<double> y;
  btran(cb, y);
  for (int j = 0; j < total(); ++j) {
    reduced_[j] = basis_pos_[j] >= 0 ? 0.0 : var_cost(j) - column_dot(j, y);
  }
}

bool DualSimplex::repair_dual_feasibility() {
  for (int j = 0; j < total(); ++j) {
    if (basis_pos_[j] >= 0) continue;
    const double lo = var_lo(j);
    const double hi = var_hi(j);
    if (lo == hi) {
      state_[j] = VarState::kLower;
      continue;
    }
    if (reduced_[j] < -kDualTol) {
      if (hi == kInf) {
        // One-sided box: a hair of dual drift is tolerable, a corrupted
        // basis is rebuilt from scratch by the caller.
        if (reduced_[j] < -1e-6) return false;
      } else {
        state_[j] = VarState::kUpper;
      }
    } else if (reduced_[j] > kDualTol) {
      if (lo == -kInf) {
        if (reduced_[j] > 1e-6) return false;
      } else {
        state_[j] = VarState::kLower;
      }
    } else if (state_[j] == VarState::kLower && lo == -kInf) {
      state_[j] = VarState::kUpper;
    } else if (state_[j] == VarState::kUpper && hi == kInf) {
      state_[j] = VarState::kLower;
    }
  }
  return true;
}

void DualSimplex::compute_basic_values() {
  const int m = data_.m;
  std::vector<double> rhs(m, 0.0);
  for (int j = 0; j < total(); ++j) {
    if (basis_pos_[j] >= 0) continue;
    value_[j] = state_[j] == VarState::kUpper ? var_hi(j) : var_lo(j);
    if (value_[j] == 0.0) continue;
    if (j < data_.n) {
      for (int k = data_.col_start[j]; k < data_.col_start[j + 1]; ++k) {
        rhs[data_.row_idx[k]] -= data_.value[k] * value_[j];
      }
    } else {
      rhs[j - data_.n] += value_[j];
    }
  }
  std::vector<double> xb;
  ftran(rhs, xb);
  for (int k = 0; k < m; ++k) value_[basic_[k]] = xb[k];
}

double DualSimplex::objective() const {
  double acc = 0.0;
  for (int j = 0; j < data_.n; ++j) acc += data_.cost[j] * value_[j];
  return acc;
}

LpResult DualSimplex::solve() {
  LpResult result;
  if (basic_.empty()) cold_basis();
  auto refresh = [&] {
    if (!refactorize()) {
      cold_basis();
      if (!refactorize()) throw std::runtime_error("simplex: singular all-logical basis");
    }
    compute_reduced_costs();
    if (!repair_dual_feasibility()) {
      // Basis numerically corrupted; restart from the all-logical basis,
      // which is always dual feasible for these finite-box models.
      if (std::getenv("CUCT_SIMPLEX_TRACE")) std::fprintf(stderr, "[cold-restart]\n");
      cold_basis();
      if (!refactorize()) throw std::runtime_error("simplex: singular all-logical basis");
      compute_reduced_costs();
      if (!repair_dual_feasibility()) {
        throw std::runtime_error("simplex: dual-infeasible even from the logical basis");
      }
    }
    compute_basic_values();
  };
  refresh();

  const int m = data_.m;
  const long iter_limit = 200L * (data_.n + m) + 20000;
  int since_refactor = 0;
  long stall = 0;
  long pivots_since_refresh = 0;
  cold_confirmed_ = false;
  std::vector<double> e_r(m), rho, col(m, 0.0), w;
  std::vector<double> alpha(total());

  for (long iter = 0;; ++iter) {
    if (iter > iter_limit) throw std::runtime_error("simplex: iteration limit exceeded");

    // Leaving variable: most infeasible basic.
    int r = -1;
    double worst = kFeasTol;
    for (int k = 0; k < m; ++k) {
      const int var = basic_[k];
      const double v = value_[var];
      const double over = v - var_hi(var);
      const double under = var_lo(var) - v;
      const double viol = over > under ? over : under;
      if (viol > worst) {
        worst = viol;
        r = k;
      }
    }
    if (r < 0) {
      result.status = LpStatus::kOptimal;
      result.objective = objective();
      result.iterations = static_cast<int>(iter);
      return result;
    }

    const int leaving = basic_[r];
    const double delta = value_[leaving] > var_hi(leaving)
                             ? value_[leaving] - var_hi(leaving)
                             : value_[leaving] - var_lo(leaving);
    const double sigma = delta > 0.0 ? 1.0 : -1.0;

    std::fill(e_r.begin(), e_r.end(), 0.0);
    e_r[r] = 1.0;
    btran(e_r, rho);

    // Entering candidate: minimize |d_j / alpha_j| over admissible columns.
    const bool bland = stall > 4L * (data_.n + m);
    for (int j = 0; j < total(); ++j) {
      alpha[j] = basis_pos_[j] >= 0 ? 0.0 : column_dot(j, rho);
    }
    int q = -1;
    double best_ratio = 0.0;
    auto scan = [&](double pivot_tol) {
      q = -1;
      double best_alpha = 0.0;
      for (int j = 0; j < total(); ++j) {
        if (basis_pos_[j] >= 0 || var_lo(j) == var_hi(j)) continue;
        const double at = sigma * alpha[j];
        const bool ok = (state_[j] == VarState::kLower && at > pivot_tol) ||
                        (state_[j] == VarState::kUpper && at < -pivot_tol);
        if (!ok) continue;
        const double ratio = reduced_[j] / at;
        if (q < 0) {
          q = j;
          best_ratio = ratio;
          best_alpha = std::fabs(alpha[j]);
          continue;
        }
        if (bland) continue;  // first admissible index wins
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && std::fabs(alpha[j]) > best_alpha)) {
          q = j;
          best_ratio = ratio;
          best_alpha = std::fabs(alpha[j]);
        }
      }
    };
    scan(kPivotTol);
    if (std::getenv("CUCT_SIMPLEX_TRACE") && iter % 200 == 0) {
      std::fprintf(stderr, "iter=%ld row=%d leaving=%d delta=%.3e d_q=%.3e nfeas=%.3e\n",
                   iter, r, leaving, delta, q >= 0 ? reduced_[q] : -1.0, worst);
    }
    if (q < 0) {
      if (pivots_since_refresh > 0) {
        // Rule out stale factors and drifted values before declaring
        // primal infeasibility; a fresh state must reproduce the claim.
        refresh();
        since_refactor = 0;
        pivots_since_refresh = 0;
        continue;
      }
      result.status = LpStatus::kInfeasible;
      result.objective = 0.0;
      result.iterations = static_cast<int>(iter);
      return result;
    }
    stall = best_ratio > 1e-12 ? 0 : stall + 1;

    std::fill(col.begin(), col.end(), 0.0);
    load_column(q, col);
    ftran(col, w);
    if (std::fabs(w[r] - alpha[q]) > 1e-7 * std::max(1.0, std::fabs(alpha[q]))) {
      refresh();
      since_refactor = 0;
      pivots_since_refresh = 0;
      continue;
    }

    const double theta_d = reduced_[q] / alpha[q];
    const double step = delta / alpha[q];

    for (int k = 0; k < m; ++k) {
      if (w[k] != 0.0) value_[basic_[k]] -= w[k] * step;
    }
    value_[q] = (state_[q] == VarState::kUpper ? var_hi(q) : var_lo(q)) + step;
    value_[leaving] = delta > 0.0 ? var_hi(leaving) : var_lo(leaving);

    for (int j = 0; j < total(); ++j) {
      if (basis_pos_[j] < 0 && alpha[j] != 0.0) reduced_[j] -= theta_d * alpha[j];
    }
    reduced_[leaving] = -theta_d;
    reduced_[q] = 0.0;

    basis_pos_[q] = r;
    basic_[r] = q;
    basis_pos_[leaving] = -1;
    state_[q] = VarState::kBasic;
    state_[leaving] = delta > 0.0 ? VarState::kUpper : VarState::kLower;

    Eta eta;
    eta.pos = r;
    eta.pivot = w[r];
    for (int k = 0; k < m; ++k) {
      if (k != r && w[k] != 0.0) eta.entries.emplace_back(k, w[k]);
    }
    etas_.push_back(std::move(eta));
    ++pivots_since_refresh;
    cold_confirmed_ = false;

    if (++since_refactor >= kRefactorInterval) {
      refresh();
      since_refactor = 0;
      pivots_since_refresh = 0;
    }
  }
}

}  // namespace cuct::milp
