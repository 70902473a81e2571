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

#ifndef CUCT_MILP_SIMPLEX_HPP_
#define CUCT_MILP_SIMPLEX_HPP_

#include <vector>

#include "cuct/milp/model.hpp"

namespace cuct::milp {

// LP in computational form: minimize cost'x subject to
// row_lo <= A x <= row_hi and lo <= x <= hi.
struct LpData {
  int n = 0;  // structural columns
  int m = 0;  // rows
  std::vector<int> col_start;  // CSC, size n+1
  std::vector<int> row_idx;
  std::vector<double> value;
  std::vector<double> cost;          // size n
  std::vector<double> lo, hi;        // size n
  std::vector<double> row_lo, row_hi;  // size m

  static LpData from_model(const Model& model);
};

enum class LpStatus { kOptimal, kInfeasible };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  int iterations = 0;
};

// Bounded-variable dual simplex. Every LP it sees starts (or warm-starts)
// dual feasible: nonbasic variables sit on the bound matching the sign of
// their reduced cost, which always exists here because structural boxes are
// finite. The basis is carried across solve() calls, so branch-and-bound
// re-solves after a bound change cost only a handful of pivots.
class DualSimplex {
 public:
  explicit DualSimplex(LpData data);

  void set_bounds(int structural, double lo, double hi);
  void reset_bounds();  // restore the bounds LpData was built with

  LpResult solve();

  double value(int structural) const { return value_[structural]; }
  double objective() const;

 private:
  struct Eta {
    int pos;
    double pivot;
    std::vector<std::pair<int, double>> entries;  // excludes pos
  };

  enum class VarState : unsigned char { kLower, kUpper, kBasic };

  int total() const { return data_.n + data_.m; }
  double var_lo(int j) const { return j < data_.n ? cur_lo_[j] : data_.row_lo[j - data_.n]; }
  double var_hi(int j) const { return j < data_.n ? cur_hi_[j] : data_.row_hi[j - data_.n]; }
  double var_cost(int j) const { return j < data_.n ? data_.cost[j] : 0.0; }

  void cold_basis();
  bool refactorize();
  void ftran(std::vector<double>& work_rows, std::vector<double>& out_pos) const;
  void btran(std::vector<double>& work_pos, std::vector<double>& out_rows) const;
  void load_column(int j, std::vector<double>& dense_rows) const;
  double column_dot(int j, const std::vector<double>& rho) const;
  void compute_reduced_costs();
  bool repair_dual_feasibility();
  void compute_basic_values();

  LpData data_;
  std::vector<double> cur_lo_, cur_hi_;
  std::vector<double> pert_cost_;

  std::vector<int> basic_;          // position -> variable
  std::vector<int> basis_pos_;      // variable -> position or -1
  std::vector<VarState> state_;     // per variable
  std::vector<double> value_;       // per variable
  std::vector<double> reduced_;     // per variable (0 for basic)

  // Base LU of the basis matrix plus product-form eta updates. The factor
  // eliminates columns in its own sparsity-friendly order; elim_pos_ maps
  // elimination step -> basis position.
  std::vector<int> elim_pos_, pos_elim_;
  mutable std::vector<double> scratch_;
  std::vector<int> piv_row_;                                   // elim step -> row
  std::vector<std::vector<std::pair<int, double>>> l_cols_;    // by row index
  std::vector<std::vector<std::pair<int, double>>> u_cols_;    // by position
  std::vector<double> u_diag_;
  std::vector<Eta> etas_;
  bool factor_valid_ = false;
  bool cold_confirmed_ = false;
};

}  // namespace cuct::milp

#endif  // CUCT_MILP_SIMPLEX_HPP_
