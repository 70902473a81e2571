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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <array>
#include <random>

#include "cuct/milp/backend.hpp"
#include "cuct/milp/branch_bound.hpp"
#include "cuct/milp/model.hpp"
#include "cuct/milp/mps.hpp"
#include "cuct/milp/simplex.hpp"

using namespace cuct::milp;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + ((rng() >> 11) * 0x1.0p-53) * (hi - lo);
}

}  // namespace

TEST_CASE("model build basics") {
  Model m("demo");
  auto x = m.add_var(VarKind::kBinary, 0, 1, "x");
  CHECK(m.num_vars() == 1);
  CHECK(x.id == 0);

  // Duplicate variables in a constraint merge by summation.
  auto y = m.add_var(VarKind::kContinuous, 0, 10, "y");
  int r = m.add_constraint({{y, 1.0}, {x, 2.0}, {y, 3.0}}, Sense::kLe, 5.0, "c0");
  const auto& row = m.row(r);
  REQUIRE(row.terms.size() == 2);
  CHECK(row.terms[0].var.id == x.id);
  CHECK(row.terms[0].coeff == 2.0);
  CHECK(row.terms[1].coeff == 4.0);

  CHECK_THROWS_AS(m.add_constraint({{x, std::nan("")}}, Sense::kLe, 1.0, "bad"),
                  std::invalid_argument);
  CHECK_THROWS_AS(m.add_var(VarKind::kContinuous, 1.0, 0.0, "z"), std::invalid_argument);
  CHECK_THROWS_AS(m.add_var(VarKind::kContinuous, 0.0, 1.0, "x"), std::invalid_argument);

  m.freeze();
  CHECK_THROWS_AS(m.add_var(VarKind::kContinuous, 0, 1, "late"), std::logic_error);
  CHECK_THROWS_AS(m.add_constraint({{x, 1.0}}, Sense::kLe, 1.0, "late_row"),
                  std::logic_error);
}

TEST_CASE("mps export determinism and round trip") {
  auto build = [] {
    Model m("tiny");
    auto x = m.add_var(VarKind::kContinuous, 0, 10, "x");
    m.add_constraint({{x, 1.0}}, Sense::kGe, 1.0, "floor");
    m.set_objective(true, {{x, 1.0}});
    m.freeze();
    return m;
  };
  const Model a = build();
  const Model b = build();
  const std::string text_a = export_mps(a);
  const std::string text_b = export_mps(b);
  CHECK(text_a == text_b);  // byte-identical

  const Model back = parse_mps(text_a);
  const Solution s = solve(back, "internal");
  CHECK(s.status == SolveStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lp corner cases") {
  SUBCASE("infeasible box") {
    Model m("inf");
    auto x = m.add_var(VarKind::kContinuous, 0, 0, "x");
    m.add_constraint({{x, 1.0}}, Sense::kGe, 1.0, "ge1");
    m.set_objective(true, {{x, 1.0}});
    m.freeze();
    CHECK(solve(m, "internal").status == SolveStatus::kInfeasible);
  }
  SUBCASE("pure lp optimal with zero gap") {
    Model m("lp");
    auto x = m.add_var(VarKind::kContinuous, 0, 4, "x");
    auto y = m.add_var(VarKind::kContinuous, 0, 4, "y");
    m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::kGe, 5.0, "cover");
    m.set_objective(true, {{x, 1.0}, {y, 2.0}});
    m.freeze();
    const Solution s = solve(m, "internal");
    REQUIRE(s.status == SolveStatus::kOptimal);
    CHECK(s.gap == 0.0);
    CHECK(s.objective == doctest::Approx(6.0));  // x=4, y=1
    CHECK(s.value(x) == doctest::Approx(4.0));
    CHECK(s.value(y) == doctest::Approx(1.0));
  }
  SUBCASE("equality rows and negative costs at finite upper bounds") {
    Model m("eq");
    auto x = m.add_var(VarKind::kContinuous, 0, 7, "x");
    auto y = m.add_var(VarKind::kContinuous, 0, 7, "y");
    m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::kEq, 6.0, "sum");
    m.set_objective(true, {{x, -3.0}, {y, 1.0}});
    m.freeze();
    const Solution s = solve(m, "internal");
    REQUIRE(s.status == SolveStatus::kOptimal);
    CHECK(s.objective == doctest::Approx(-18.0 + 0.0));  // x=6, y=0
  }
}

TEST_CASE("random dense LPs agree with vertex enumeration") {
  // 3 bounded variables, 4 inequality rows: enumerate all basic points by
  // brute force over active-set triples and compare objectives.
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3, rows = 4;
    std::vector<std::vector<double>> a(rows, std::vector<double>(n));
    std::vector<double> rhs(rows), cost(n);
    for (auto& row : a) {
      for (double& v : row) v = uniform(rng, -2.0, 2.0);
    }
    for (double& v : rhs) v = uniform(rng, 0.5, 4.0);
    for (double& v : cost) v = uniform(rng, -1.5, 1.5);
    const double box = 3.0;

    Model m("rand");
    std::vector<VarHandle> xs;
    for (int j = 0; j < n; ++j) {
      xs.push_back(m.add_var(VarKind::kContinuous, 0.0, box, "x" + std::to_string(j)));
    }
    for (int r = 0; r < rows; ++r) {
      std::vector<LinearTerm> terms;
      for (int j = 0; j < n; ++j) terms.push_back({xs[j], a[r][j]});
      m.add_constraint(std::move(terms), Sense::kLe, rhs[r], "r" + std::to_string(r));
    }
    std::vector<LinearTerm> obj;
    for (int j = 0; j < n; ++j) obj.push_back({xs[j], cost[j]});
    m.set_objective(true, obj);
    m.freeze();
    const Solution s = solve(m, "internal");
    REQUIRE(s.status == SolveStatus::kOptimal);

    // Oracle: exact vertex enumeration. Stack the 4 rows and 6 bound
    // hyperplanes, intersect every triple (3x3 Cramer solve), keep feasible
    // points, take the best objective. The LP optimum lies at one of them.
    std::vector<std::array<double, 4>> planes;  // a0 a1 a2 rhs, equality a.x = rhs
    for (int r = 0; r < rows; ++r) planes.push_back({a[r][0], a[r][1], a[r][2], rhs[r]});
    for (int j = 0; j < n; ++j) {
      std::array<double, 4> lo{0, 0, 0, 0}, hi{0, 0, 0, 0};
      lo[j] = 1.0;
      hi[j] = 1.0;
      hi[3] = box;
      planes.push_back(lo);
      planes.push_back(hi);
    }
    auto feasible = [&](const std::array<double, 3>& p) {
      for (int r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += a[r][j] * p[j];
        if (acc > rhs[r] + 1e-7) return false;
      }
      for (int j = 0; j < n; ++j) {
        if (p[j] < -1e-7 || p[j] > box + 1e-7) return false;
      }
      return true;
    };
    auto det3 = [](const std::array<std::array<double, 3>, 3>& m) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    double best = kInf;
    const int np = static_cast<int>(planes.size());
    for (int i = 0; i < np; ++i)
      for (int j = i + 1; j < np; ++j)
        for (int k = j + 1; k < np; ++k) {
          std::array<std::array<double, 3>, 3> mat{{
              {planes[i][0], planes[i][1], planes[i][2]},
              {planes[j][0], planes[j][1], planes[j][2]},
              {planes[k][0], planes[k][1], planes[k][2]},
          }};
          const double d = det3(mat);
          if (std::fabs(d) < 1e-9) continue;
          std::array<double, 3> point{};
          for (int col = 0; col < 3; ++col) {
            auto m2 = mat;
            m2[0][col] = planes[i][3];
            m2[1][col] = planes[j][3];
            m2[2][col] = planes[k][3];
            point[col] = det3(m2) / d;
          }
          if (!feasible(point)) continue;
          const double val = cost[0] * point[0] + cost[1] * point[1] + cost[2] * point[2];
          best = std::min(best, val);
        }
    REQUIRE(best < kInf);
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-7));
    CHECK(feasible({s.value(xs[0]), s.value(xs[1]), s.value(xs[2])}));
  }
}

TEST_CASE("small MILPs agree with exhaustive enumeration") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 30; ++trial) {
    const int nb = 6;
    std::vector<double> weight(nb), profit(nb);
    for (int j = 0; j < nb; ++j) {
      weight[j] = uniform(rng, 1.0, 5.0);
      profit[j] = uniform(rng, 1.0, 6.0);
    }
    const double cap = uniform(rng, 4.0, 12.0);

    Model m("knap");
    std::vector<VarHandle> xs;
    std::vector<LinearTerm> wrow, obj;
    for (int j = 0; j < nb; ++j) {
      xs.push_back(m.add_var(VarKind::kBinary, 0, 1, "b" + std::to_string(j)));
      wrow.push_back({xs[j], weight[j]});
      obj.push_back({xs[j], -profit[j]});  // maximize profit as min of negative
    }
    m.add_constraint(wrow, Sense::kLe, cap, "capacity");
    m.set_objective(true, obj);
    m.freeze();
    const Solution s = solve(m, "internal");
    REQUIRE(s.status == SolveStatus::kOptimal);

    double best = 0.0;
    for (int mask = 0; mask < (1 << nb); ++mask) {
      double w = 0.0, p = 0.0;
      for (int j = 0; j < nb; ++j) {
        if (mask & (1 << j)) {
          w += weight[j];
          p += profit[j];
        }
      }
      if (w <= cap) best = std::max(best, p);
    }
    CHECK(s.objective == doctest::Approx(-best).epsilon(1e-9));
  }
}

TEST_CASE("maximize sense round trips through the solver") {
  Model m("max");
  auto x = m.add_var(VarKind::kContinuous, 0, 3, "x");
  m.set_objective(false, {{x, 2.0}});
  m.freeze();
  const Solution s = solve(m, "internal");
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(6.0));
}

TEST_CASE("external file backend via mock solver script") {
  // The mock external solver is a shell script that answers a fixed model;
  // this exercises MPS hand-off, command substitution, and sol parsing.
  Model m("ext");
  auto x = m.add_var(VarKind::kContinuous, 0, 10, "x");
  m.add_constraint({{x, 1.0}}, Sense::kGe, 2.0, "floor");
  m.set_objective(true, {{x, 1.0}});
  m.freeze();

  const std::string script = "/tmp/cuct_mock_solver.sh";
  {
    std::ofstream out(script);
    out << "#!/bin/sh\n"
           "grep -q ENDATA \"$1\" || exit 3\n"
           "printf 'status optimal\\nobjective 2\\nx 2\\n' > \"$2\"\n";
  }
  REQUIRE(std::system(("chmod +x " + script).c_str()) == 0);

  auto backend = make_file_backend(script + " {mps} {sol}");
  const Solution s = backend->solve(m, SolveParams{});
  CHECK(s.status == SolveStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(2.0));
  CHECK(s.value(x) == doctest::Approx(2.0));

  auto broken = make_file_backend("false # {mps} {sol}");
  CHECK_THROWS_AS(broken->solve(m, SolveParams{}), std::runtime_error);
}

TEST_CASE("unknown backend is rejected with the registry listing") {
  Model m("none");
  m.add_var(VarKind::kContinuous, 0, 1, "x");
  m.freeze();
  CHECK_THROWS_AS(solve(m, "no-such-backend"), std::invalid_argument);
  CHECK(find_backend("internal") != nullptr);
  CHECK(find_backend("external") != nullptr);
}
