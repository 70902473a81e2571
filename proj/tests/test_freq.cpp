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
#include <cstdio>
#include <fstream>
#include <random>

#include "cuct/bernstein.hpp"
#include "cuct/freq.hpp"

using namespace cuct;
using freq::OutageContext;
using sysmodel::SystemParams;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + ((rng() >> 11) * 0x1.0p-53) * (hi - lo);
}

SystemParams island_params() {
  SystemParams p;
  p.f0_hz = 50.0;
  p.damping = 0.01;
  p.t_g_s = 3.0;
  return p;
}

// Two constant-output units built so the worst credible outage reproduces
// the 3750/1700 closed-form value: losing unit A (5 MW) leaves 100 MWs of
// inertia and 5 MW of reserve on unit B.
struct ConstantCase {
  sysmodel::CaseInput c;
  cuc::Schedule schedule;
  sysmodel::ApproximatedProfiles profiles;
};

ConstantCase constant_two_unit_case(int horizon = 2) {
  ConstantCase out;
  auto& c = out.c;
  c.name = "const2";
  c.horizon_hours = horizon;
  c.sample_step_min = 5;
  sysmodel::UnitSpec a;
  a.id = "A";
  a.p_min_mw = 1.0;
  a.p_max_mw = 40.0;
  a.ramp_up_mw_h = 50.0;
  a.ramp_down_mw_h = 50.0;
  a.min_up_h = 1;
  a.min_down_h = 2;
  a.inertia_s = 40.0;
  a.base_mva = 100.0;  // 4000 MWs: losing B barely moves the frequency
  a.marginal_cost = 50.0;
  a.initial.on = true;
  a.initial.hours = 24;
  a.initial.output_mw = 5.0;
  sysmodel::UnitSpec b = a;
  b.id = "B";
  b.p_max_mw = 35.0;
  b.inertia_s = 10.0;
  b.base_mva = 10.0;  // 100 MWs behind unit A's outage
  b.initial.output_mw = 30.0;
  c.units = {a, b};
  c.demand_mw.assign(static_cast<size_t>(12) * horizon + 1, 40.0);
  c.res_mw.assign(c.demand_mw.size(), 5.0);
  out.profiles = sysmodel::approximate_profiles(c);

  auto& s = out.schedule;
  s.unit_ids = {"A", "B"};
  s.horizon = horizon;
  s.committed.assign(horizon, {1, 1});
  s.started.assign(horizon, {0, 0});
  s.stopped.assign(horizon, {0, 0});
  s.power.resize(2);
  s.reserve.resize(2);
  for (int t = 0; t < horizon; ++t) {
    s.power[0].segments.emplace_back(t, std::vector<double>(4, 5.0));
    s.power[1].segments.emplace_back(t, std::vector<double>(4, 30.0));
    s.reserve[0].segments.emplace_back(t, std::vector<double>(4, 35.0));
    s.reserve[1].segments.emplace_back(t, std::vector<double>(4, 5.0));
    s.curtailment.segments.emplace_back(t, std::vector<double>(4, 0.0));
  }
  s.status = milp::SolveStatus::kOptimal;
  return out;
}

}  // namespace

TEST_CASE("closed-form nadir hand values") {
  SystemParams p = island_params();
  OutageContext ctx{5.0, 5.0, 100.0, 40.0};
  auto nadir = freq::nadir_exact(ctx, p);
  REQUIRE(nadir.has_value());
  CHECK(*nadir == doctest::Approx(3750.0 / 1700.0).epsilon(1e-12));

  p.damping = 0.0;
  nadir = freq::nadir_exact(ctx, p);
  REQUIRE(nadir.has_value());
  CHECK(*nadir == doctest::Approx(1.875).epsilon(1e-12));

  ctx.lost_mw = 0.0;
  CHECK(*freq::nadir_exact(ctx, p) == 0.0);

  // Reserve/inertia too weak to arrest the decline within Tg.
  p.damping = 0.01;
  OutageContext weak{10.0, 0.1, 5.0, 40.0};
  CHECK(!freq::nadir_exact(weak, p).has_value());
}

TEST_CASE("swing-equation oracle matches the undamped closed form") {
  SystemParams p = island_params();
  p.damping = 0.0;
  CHECK(freq::ode_nadir_oracle(0.0, 5.0, 100.0, 40.0, p) == 0.0);
  const double nadir = freq::ode_nadir_oracle(5.0, 5.0, 100.0, 40.0, p);
  CHECK(std::fabs(nadir - 1.875) <= 1e-3);

  std::mt19937_64 rng(33);
  for (int k = 0; k < 100; ++k) {
    const double lost = uniform(rng, 0.5, 10.0);
    const double reserve = uniform(rng, lost, 2.0 * lost);
    const double inertia = uniform(rng, 20.0, 500.0);
    const double closed = p.f0_hz * p.t_g_s * lost * lost / (4.0 * reserve * inertia);
    const double simulated = freq::ode_nadir_oracle(lost, reserve, inertia, 30.0, p);
    CHECK(std::fabs(simulated - closed) <= 1e-3);
  }
}

TEST_CASE("damping only opposes the deviation") {
  SystemParams undamped = island_params();
  undamped.damping = 0.0;
  SystemParams damped = island_params();
  std::mt19937_64 rng(34);
  for (int k = 0; k < 25; ++k) {
    const double lost = uniform(rng, 0.5, 8.0);
    const double reserve = uniform(rng, lost, 2.0 * lost);
    const double inertia = uniform(rng, 30.0, 300.0);
    const double demand = uniform(rng, 15.0, 40.0);
    const double with_d = freq::ode_nadir_oracle(lost, reserve, inertia, demand, damped);
    const double without = freq::ode_nadir_oracle(lost, reserve, inertia, demand, undamped);
    CHECK(with_d <= without + 1e-9);
  }
}

TEST_CASE("oracle is monotone in lost power, inertia, and reserve") {
  SystemParams p = island_params();
  double prev = 0.0;
  for (double lost : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    const double nadir = freq::ode_nadir_oracle(lost, 6.0, 120.0, 30.0, p);
    CHECK(nadir >= prev);
    prev = nadir;
  }
  prev = 1e9;
  for (double inertia : {50.0, 100.0, 200.0, 400.0}) {
    const double nadir = freq::ode_nadir_oracle(4.0, 6.0, inertia, 30.0, p);
    CHECK(nadir <= prev);
    prev = nadir;
  }
  prev = 1e9;
  for (double reserve : {4.5, 6.0, 8.0, 12.0}) {
    const double nadir = freq::ode_nadir_oracle(4.0, reserve, 120.0, 30.0, p);
    CHECK(nadir <= prev);
    prev = nadir;
  }
  CHECK_THROWS_AS(freq::ode_nadir_oracle(1.0, 1.0, 0.0, 30.0, p), std::invalid_argument);
}

TEST_CASE("diagonal approximation is exact for constants and at endpoints") {
  SystemParams p = island_params();

  const std::array<double, 4> lost{5, 5, 5, 5}, reserve{5, 5, 5, 5}, demand{40, 40, 40, 40};
  const auto constant = freq::nadir_coefficient_approx(lost, reserve, 100.0, demand, p);
  for (const auto& coeff : constant) {
    REQUIRE(coeff.has_value());
    CHECK(*coeff == doctest::Approx(3750.0 / 1700.0).epsilon(1e-12));
  }

  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<double, 4> cp{}, cr{}, cd{};
    for (int b = 0; b < 4; ++b) {
      cp[b] = uniform(rng, 1.0, 8.0);
      cr[b] = uniform(rng, cp[b], 2.5 * cp[b]);
      cd[b] = uniform(rng, 15.0, 40.0);
    }
    const double inertia = uniform(rng, 60.0, 400.0);
    const auto approx = freq::nadir_coefficient_approx(cp, cr, inertia, cd, p);
    for (const double tau : {0.0, 1.0}) {
      const int b = tau == 0.0 ? 0 : 3;
      OutageContext ctx{cp[b], cr[b], inertia, cd[b]};
      const auto exact = freq::nadir_exact(ctx, p);
      REQUIRE(exact.has_value());
      REQUIRE(approx[b].has_value());
      CHECK(std::fabs(*approx[b] - *exact) <= 1e-12);
    }
  }
}

TEST_CASE("order-6 exact construction brackets the diagonal approximation") {
  // Build the exact nadir as a ratio of degree-6 polynomials with the
  // Bernstein algebra and cross-check it against direct pointwise
  // evaluation; then measure the diagonal approximation against it.
  SystemParams p = island_params();
  using bernstein::BernsteinSegment;

  const BernsteinSegment lost(0, {4.0, 5.0, 6.5, 6.0});
  const BernsteinSegment reserve(0, {9.0, 8.0, 9.5, 11.0});
  const BernsteinSegment demand(0, {24.0, 26.0, 27.0, 25.0});
  const double inertia = 120.0;

  const auto numerator = [&] {
    auto square = bernstein::multiply(lost, lost);
    BernsteinSegment scaled = square;
    for (double& coeff : scaled.coeffs) coeff *= p.f0_hz * p.t_g_s;
    return scaled;
  }();
  const auto denominator = [&] {
    auto first = bernstein::elevate(reserve, 6);
    for (double& coeff : first.coeffs) coeff *= 4.0 * inertia;
    auto cross = bernstein::multiply(demand, lost);
    for (double& coeff : cross.coeffs) coeff *= p.damping * p.t_g_s * p.f0_hz;
    return bernstein::sub(first, cross);
  }();

  std::array<double, 4> cp{}, cr{}, cd{};
  for (int b = 0; b < 4; ++b) {
    cp[b] = lost.coeffs[b];
    cr[b] = reserve.coeffs[b];
    cd[b] = demand.coeffs[b];
  }
  const auto approx = freq::nadir_coefficient_approx(cp, cr, inertia, cd, p);
  BernsteinSegment approx_seg(0, {*approx[0], *approx[1], *approx[2], *approx[3]});

  double max_ratio_err = 0.0, max_approx_err = 0.0, max_exact = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double tau = k / 1000.0;
    OutageContext ctx{bernstein::eval(lost, tau), bernstein::eval(reserve, tau), inertia,
                      bernstein::eval(demand, tau)};
    const auto direct = freq::nadir_exact(ctx, p);
    REQUIRE(direct.has_value());
    const double via_ratio =
        bernstein::eval(numerator, tau) / bernstein::eval(denominator, tau);
    max_ratio_err = std::max(max_ratio_err, std::fabs(via_ratio - *direct));
    max_approx_err =
        std::max(max_approx_err, std::fabs(bernstein::eval(approx_seg, tau) - *direct));
    max_exact = std::max(max_exact, *direct);
  }
  CHECK(max_ratio_err <= 1e-9);          // construction is the same function
  CHECK(max_approx_err <= 0.10 * max_exact);  // fig-4-style close agreement
  // Endpoints coincide by interpolation.
  OutageContext end{cp[3], cr[3], inertia, cd[3]};
  CHECK(std::fabs(bernstein::eval(approx_seg, 1.0) - *freq::nadir_exact(end, p)) <= 1e-12);
}

TEST_CASE("rocof bound arithmetic") {
  // f0=50, limit 2 Hz/s, surviving inertia 60 MWs -> 4.8 MW cap.
  const double kappa = 2.0 * 2.0 / 50.0;
  CHECK(kappa * 60.0 == doctest::Approx(4.8));
}

TEST_CASE("qss arithmetic") {
  // reserves 5, lost 5.2, D=0.01, demand 40, limit 1.5 -> rhs 4.6 <= 5.
  const double rhs = 5.2 - 0.01 * 40.0 * 1.5;
  CHECK(rhs == doctest::Approx(4.6));
  CHECK(rhs <= 5.0);
}

TEST_CASE("minute sweep on the constant two-unit case") {
  auto fixture = constant_two_unit_case();
  const auto sweep = freq::sweep_exact_nadir(fixture.schedule, fixture.c, fixture.profiles);
  REQUIRE(static_cast<int>(sweep.minutes.size()) == fixture.schedule.horizon * 60);

  // Unit A's outage dominates: 3750/1700 = 2.2059 Hz at every minute.
  for (const auto& minute : sweep.minutes) {
    CHECK(minute.worst_unit == 0);
    CHECK(!minute.insecure);
    CHECK(minute.nadir_hz == doctest::Approx(3750.0 / 1700.0).epsilon(1e-9));
  }
  CHECK(sweep.minutes_above(2.5) == 0);
  CHECK(sweep.minutes_above(2.0) == fixture.schedule.horizon * 60);

  const auto worst = sweep.per_hour_worst(fixture.schedule.horizon);
  for (double value : worst) CHECK(value == doctest::Approx(3750.0 / 1700.0));
}

TEST_CASE("sweep flags lone-unit minutes as insecure and skips empty hours") {
  auto fixture = constant_two_unit_case();
  // Hour 1: only unit A online; its outage cannot be arrested (no inertia).
  fixture.schedule.committed[1] = {1, 0};
  for (int b = 0; b < 4; ++b) {
    fixture.schedule.power[0].segments[1].coeffs[b] = 35.0;
    fixture.schedule.power[1].segments[1].coeffs[b] = 0.0;
    fixture.schedule.reserve[1].segments[1].coeffs[b] = 0.0;
  }
  const auto sweep = freq::sweep_exact_nadir(fixture.schedule, fixture.c, fixture.profiles);
  CHECK(sweep.minutes_above(1000.0) == 60);  // insecure minutes exceed any threshold

  // All-off schedule has no outage candidates at all.
  auto empty = constant_two_unit_case();
  for (int t = 0; t < empty.schedule.horizon; ++t) empty.schedule.committed[t] = {0, 0};
  CHECK(freq::sweep_exact_nadir(empty.schedule, empty.c, empty.profiles).minutes_above(0.0) == 0);
}

TEST_CASE("sweep rejects mismatched unit ids") {
  auto fixture = constant_two_unit_case();
  fixture.schedule.unit_ids[1] = "Z";
  CHECK_THROWS_AS(freq::sweep_exact_nadir(fixture.schedule, fixture.c, fixture.profiles),
                  std::invalid_argument);
}

TEST_CASE("metric report files") {
  auto fixture = constant_two_unit_case();
  const auto sweep = freq::sweep_exact_nadir(fixture.schedule, fixture.c, fixture.profiles);
  freq::write_metric_json(sweep, 2.5, fixture.schedule.horizon, "/tmp/cuct_metric.json");
  freq::write_metric_csv(sweep, "/tmp/cuct_metric.csv");

  std::ifstream json_in("/tmp/cuct_metric.json");
  std::string text((std::istreambuf_iterator<char>(json_in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"threshold_hz\": 2.5") != std::string::npos);
  CHECK(text.find("\"minutes_above\": 0") != std::string::npos);
  CHECK(text.find("per_hour_worst_nadir") != std::string::npos);

  std::ifstream csv_in("/tmp/cuct_metric.csv");
  std::string header;
  std::getline(csv_in, header);
  CHECK(header == "minute,worst_unit,nadir_hz");
  int rows = 0;
  for (std::string line; std::getline(csv_in, line);) ++rows;
  CHECK(rows == fixture.schedule.horizon * 60);
  std::remove("/tmp/cuct_metric.json");
  std::remove("/tmp/cuct_metric.csv");
}
