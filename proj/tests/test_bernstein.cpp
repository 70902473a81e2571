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
#include <random>
#include <vector>

#include "cuct/bernstein.hpp"

using namespace cuct::bernstein;

namespace {

// Deterministic uniform draw; avoids the implementation-defined
// std::uniform_real_distribution.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = (rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

BernsteinSegment random_segment(std::mt19937_64& rng, int degree, int hour = 0,
                                double lo = -10.0, double hi = 10.0) {
  std::vector<double> c(degree + 1);
  for (double& v : c) v = uniform(rng, lo, hi);
  return BernsteinSegment(hour, std::move(c));
}

// Composite Simpson quadrature, independent of the Bernstein integral identity.
double simpson(const BernsteinSegment& seg, int intervals = 2000) {
  double acc = eval(seg, 0.0) + eval(seg, 1.0);
  for (int k = 1; k < intervals; ++k) {
    acc += (k % 2 == 1 ? 4.0 : 2.0) * eval(seg, static_cast<double>(k) / intervals);
  }
  return acc / (3.0 * intervals);
}

}  // namespace

TEST_CASE("basis endpoint and midpoint identities") {
  CHECK(basis_eval(0, 3, 0.0) == 1.0);
  CHECK(basis_eval(1, 3, 0.5) == doctest::Approx(0.375).epsilon(1e-15));
  double sum = 0.0;
  for (int b = 0; b <= 3; ++b) sum += basis_eval(b, 3, 0.7);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(basis_eval(4, 3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(basis_eval(-1, 3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(basis_eval(0, 3, 1.5), std::invalid_argument);
}

TEST_CASE("partition of unity up to degree 8") {
  std::mt19937_64 rng(11);
  for (int n = 0; n <= 8; ++n) {
    for (int s = 0; s < 200; ++s) {
      const double tau = uniform(rng, 0.0, 1.0);
      double sum = 0.0;
      for (int b = 0; b <= n; ++b) sum += basis_eval(b, n, tau);
      CHECK(std::fabs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("eval basics") {
  const BernsteinSegment constant(0, {4.25, 4.25, 4.25, 4.25});
  CHECK(eval(constant, 0.3) == doctest::Approx(4.25).epsilon(1e-15));

  const BernsteinSegment linear(0, {0, 1, 2, 3});  // 3*tau in Bernstein form
  CHECK(eval(linear, 0.5) == doctest::Approx(1.5).epsilon(1e-15));

  const BernsteinSegment ragged(0, {1, 5, 2, 4});
  CHECK(eval(ragged, 0.0) == 1.0);  // exact endpoint interpolation
  CHECK(eval(ragged, 1.0) == 4.0);

  CHECK_THROWS_AS(eval(ragged, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(eval(ragged, 1.1), std::invalid_argument);
}

TEST_CASE("segment construction rejects bad coefficients") {
  CHECK_THROWS_AS(BernsteinSegment(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(BernsteinSegment(0, {1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("derivative") {
  const BernsteinSegment linear(0, {0, 1, 2, 3});
  const auto d = derivative(linear);
  REQUIRE(d.degree() == 2);
  CHECK(d.coeffs == std::vector<double>{3, 3, 3});

  const auto dz = derivative(BernsteinSegment(0, {7, 7, 7, 7}));
  CHECK(dz.coeffs == std::vector<double>{0, 0, 0});

  const auto d0 = derivative(BernsteinSegment(0, {5.0}));
  CHECK(d0.degree() == 0);
  CHECK(d0.coeffs[0] == 0.0);
}

TEST_CASE("derivative matches central finite differences") {
  std::mt19937_64 rng(12);
  const double h = 1e-5;
  for (int s = 0; s < 50; ++s) {
    const auto seg = random_segment(rng, 3);
    const auto d = derivative(seg);
    for (int k = 0; k < 20; ++k) {
      const double tau = uniform(rng, 2 * h, 1.0 - 2 * h);
      const double fd = (eval(seg, tau + h) - eval(seg, tau - h)) / (2 * h);
      const double exact = eval(d, tau);
      const double scale = std::max(1.0, std::fabs(exact));
      CHECK(std::fabs(fd - exact) / scale <= 1e-6);
    }
  }
}

TEST_CASE("elevation") {
  const auto up = elevate(BernsteinSegment(0, {0, 1}), 2);
  CHECK(up.coeffs == std::vector<double>{0, 0.5, 1});

  const auto cc = elevate(BernsteinSegment(0, {2.5, 2.5}), 2);
  CHECK(cc.coeffs == std::vector<double>{2.5, 2.5, 2.5});

  CHECK_THROWS_AS(elevate(BernsteinSegment(0, {0, 1, 2}), 1), std::invalid_argument);

  std::mt19937_64 rng(13);
  for (int s = 0; s < 50; ++s) {
    const auto seg = random_segment(rng, 3);
    const auto high = elevate(seg, 6);
    for (int k = 0; k < 100; ++k) {
      const double tau = uniform(rng, 0.0, 1.0);
      CHECK(std::fabs(eval(high, tau) - eval(seg, tau)) <= 1e-9);
    }
  }
}

TEST_CASE("multiplication") {
  const auto sq = multiply(BernsteinSegment(0, {0, 1}), BernsteinSegment(0, {0, 1}));
  CHECK(sq.coeffs == std::vector<double>{0, 0, 1});  // tau^2

  std::mt19937_64 rng(14);
  const auto p = random_segment(rng, 3);
  const BernsteinSegment c(0, {3.0, 3.0, 3.0, 3.0});
  const auto scaled = multiply(c, p);
  for (int k = 0; k < 100; ++k) {
    const double tau = uniform(rng, 0.0, 1.0);
    CHECK(eval(scaled, tau) == doctest::Approx(3.0 * eval(p, tau)).epsilon(1e-12));
  }

  for (int s = 0; s < 50; ++s) {
    const auto a = random_segment(rng, 3);
    const auto b = random_segment(rng, 3);
    const auto prod = multiply(a, b);
    REQUIRE(prod.degree() == 6);
    for (int k = 0; k < 100; ++k) {
      const double tau = uniform(rng, 0.0, 1.0);
      CHECK(std::fabs(eval(prod, tau) - eval(a, tau) * eval(b, tau)) <= 1e-9);
    }
  }

  CHECK_THROWS_AS(multiply(BernsteinSegment(0, {1, 2}), BernsteinSegment(1, {1, 2})),
                  std::invalid_argument);
}

TEST_CASE("add and sub") {
  const auto s = add(BernsteinSegment(0, {1, 2, 3, 4}), BernsteinSegment(0, {1, 1, 1, 1}));
  CHECK(s.coeffs == std::vector<double>{2, 3, 4, 5});

  std::mt19937_64 rng(15);
  const auto p = random_segment(rng, 3);
  const auto zero = sub(p, p);
  for (double c : zero.coeffs) CHECK(c == 0.0);

  // tau + tau^2, degrees equalized by elevation.
  const auto mixed = add(BernsteinSegment(0, {0, 1}), BernsteinSegment(0, {0, 0, 1}));
  REQUIRE(mixed.degree() == 2);
  CHECK(mixed.coeffs[0] == doctest::Approx(0.0));
  CHECK(mixed.coeffs[1] == doctest::Approx(0.5));
  CHECK(mixed.coeffs[2] == doctest::Approx(2.0));
  for (int k = 0; k <= 10; ++k) {
    const double tau = k / 10.0;
    CHECK(eval(mixed, tau) == doctest::Approx(tau + tau * tau).epsilon(1e-14));
  }

  CHECK_THROWS_AS(add(BernsteinSegment(0, {1}), BernsteinSegment(2, {1})),
                  std::invalid_argument);
}

TEST_CASE("coefficient bounds and convex hull") {
  const BernsteinSegment ragged(0, {1, 5, 2, 4});
  CHECK(coeff_bounds(ragged) == std::pair<double, double>{1, 5});
  CHECK(coeff_bounds(BernsteinSegment(0, {2, 2, 2, 2})) ==
        std::pair<double, double>{2, 2});
  CHECK(coeff_bounds(BernsteinSegment(0, {0, 1, 2, 3})) ==
        std::pair<double, double>{0, 3});

  std::mt19937_64 rng(16);
  for (int s = 0; s < 1000; ++s) {
    const int degree = 1 + static_cast<int>(rng() % 6);
    const auto seg = random_segment(rng, degree);
    const auto [lo, hi] = coeff_bounds(seg);
    for (int k = 0; k < 1000; ++k) {
      const double v = eval(seg, uniform(rng, 0.0, 1.0));
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
  }
}

TEST_CASE("integral identity") {
  CHECK(integral(BernsteinSegment(0, {2, 4, 4, 2})) == doctest::Approx(3.0));
  CHECK(integral(BernsteinSegment(0, {0, 0, 0, 0})) == 0.0);
  CHECK(integral(BernsteinSegment(0, {0, 0, 0, 4})) == doctest::Approx(1.0));

  std::mt19937_64 rng(17);
  for (int s = 0; s < 100; ++s) {
    const auto seg = random_segment(rng, 1 + static_cast<int>(rng() % 6));
    CHECK(integral(seg) == doctest::Approx(simpson(seg)).epsilon(1e-8));
  }
}

TEST_CASE("fit of exactly representable curves") {
  std::vector<std::pair<double, double>> cubic;
  for (int k = 0; k <= 12; ++k) {
    const double tau = k / 12.0;
    cubic.emplace_back(tau, 3.0 * tau * tau * tau);
  }
  const auto fit = fit_segment(cubic, 3);
  CHECK(fit.max_residual <= 1e-9);
  CHECK(fit.segment.coeffs[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.segment.coeffs[3] == doctest::Approx(3.0).epsilon(1e-9));

  std::vector<std::pair<double, double>> flat;
  for (int k = 0; k <= 12; ++k) flat.emplace_back(k / 12.0, 30.0);
  const auto cfit = fit_segment(flat, 3);
  for (double c : cfit.segment.coeffs) CHECK(c == doctest::Approx(30.0).epsilon(1e-9));
}

TEST_CASE("fit of sin(pi tau) at 5-min spacing vs independent dense solve") {
  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k <= 12; ++k) {
    const double tau = k / 12.0;
    samples.emplace_back(tau, std::sin(M_PI * tau));
  }
  const auto fit = fit_segment(samples, 3);
  // A single cubic over the whole half-sine arch carries ~2.9% residual;
  // the sub-0.3% regime needs the per-hour slicing exercised below.
  CHECK(fit.max_residual < 0.03);

  // Independent oracle: unconstrained normal equations assembled from the
  // monomial expansion of the Bernstein basis, solved by Gauss-Jordan.
  // beta_{b,3} = C(3,b) tau^b (1-tau)^(3-b) expanded into powers of tau.
  auto basis_monomial = [](int b, double tau) {
    switch (b) {
      case 0: return (1 - tau) * (1 - tau) * (1 - tau);
      case 1: return 3 * tau * (1 - tau) * (1 - tau);
      case 2: return 3 * tau * tau * (1 - tau);
      default: return tau * tau * tau;
    }
  };
  double ata[4][4] = {};
  double atb[4] = {};
  for (const auto& [tau, y] : samples) {
    for (int r = 0; r < 4; ++r) {
      atb[r] += basis_monomial(r, tau) * y;
      for (int c = 0; c < 4; ++c) ata[r][c] += basis_monomial(r, tau) * basis_monomial(c, tau);
    }
  }
  // Gauss-Jordan without pivot reordering (well-conditioned 4x4).
  for (int col = 0; col < 4; ++col) {
    const double piv = ata[col][col];
    for (int k = 0; k < 4; ++k) ata[col][k] /= piv;
    atb[col] /= piv;
    for (int row = 0; row < 4; ++row) {
      if (row == col) continue;
      const double f = ata[row][col];
      for (int k = 0; k < 4; ++k) ata[row][k] -= f * ata[col][k];
      atb[row] -= f * atb[col];
    }
  }
  for (int b = 0; b < 4; ++b) {
    CHECK(fit.segment.coeffs[b] == doctest::Approx(atb[b]).epsilon(1e-6));
  }
}

TEST_CASE("per-hour slices of a daily sinusoid fit far below 0.3%") {
  // 24-hour sinusoid sampled every 5 minutes, fit one cubic per hour.
  const double amplitude = 10.0;
  for (int hour = 0; hour < 24; ++hour) {
    std::vector<std::pair<double, double>> samples;
    for (int k = 0; k <= 12; ++k) {
      const double g = hour + k / 12.0;
      samples.emplace_back(k / 12.0, 25.0 + amplitude * std::sin(2 * M_PI * g / 24.0));
    }
    const auto fit = fit_segment(samples, 3, {}, hour);
    CHECK(fit.max_residual < 0.003 * amplitude);
  }
}

TEST_CASE("fit honors anchors") {
  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k <= 12; ++k) {
    const double tau = k / 12.0;
    samples.emplace_back(tau, 2.0 + tau * tau);
  }
  FitAnchors anchors;
  anchors.value0 = 2.0;
  anchors.slope0 = 0.0;
  const auto fit = fit_segment(samples, 3, anchors);
  CHECK(fit.segment.coeffs[0] == 2.0);
  const auto d = derivative(fit.segment);
  CHECK(eval(d, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.max_residual <= 1e-9);  // 2 + tau^2 is cubic-representable
}

TEST_CASE("fit error paths") {
  std::vector<std::pair<double, double>> two = {{0.0, 1.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(fit_segment(two, 3), std::invalid_argument);

  // All samples at one tau: normal matrix is singular beyond the ridge.
  std::vector<std::pair<double, double>> stacked(8, {0.5, 1.0});
  CHECK_THROWS(fit_segment(stacked, 3));
}

TEST_CASE("piecewise continuity residuals") {
  PiecewiseBernstein pw;
  pw.segments.push_back(BernsteinSegment(0, {0, 1, 2, 3}));
  pw.segments.push_back(BernsteinSegment(1, {3, 4, 5, 6}));
  CHECK(pw.max_c0_residual() == 0.0);
  CHECK(pw.max_c1_residual() == 0.0);
  CHECK(pw.eval_at(0.5) == doctest::Approx(1.5));
  CHECK(pw.eval_at(1.5) == doctest::Approx(4.5));
  CHECK(pw.eval_at(2.0) == doctest::Approx(6.0));

  pw.segments.push_back(BernsteinSegment(2, {6.5, 6.5, 6.5, 6.5}));
  CHECK(pw.max_c0_residual() == doctest::Approx(0.5));
}
