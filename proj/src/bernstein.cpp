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

#include "cuct/bernstein.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cuct::bernstein {

namespace {

constexpr int kMaxBinomialN = 40;

constexpr auto kPascal = [] {
  std::array<std::array<double, kMaxBinomialN + 1>, kMaxBinomialN + 1> c{};
  for (int n = 0; n <= kMaxBinomialN; ++n) {
    c[n][0] = 1.0;
    for (int b = 1; b <= n; ++b) {
      c[n][b] = c[n - 1][b - 1] + (b <= n - 1 ? c[n - 1][b] : 0.0);
    }
  }
  return c;
}();

void check_same_hour(const BernsteinSegment& p, const BernsteinSegment& q,
                     const char* op) {
  if (p.hour != q.hour) {
    throw std::invalid_argument(std::string(op) + ": segments on different hours (" +
                                std::to_string(p.hour) + " vs " +
                                std::to_string(q.hour) + ")");
  }
}

}  // namespace

BernsteinSegment::BernsteinSegment(int hour_index, std::vector<double> control_values)
    : hour(hour_index), coeffs(std::move(control_values)) {
  if (coeffs.empty()) {
    throw std::invalid_argument("BernsteinSegment: empty coefficient list");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("BernsteinSegment: non-finite coefficient");
    }
  }
}

double binomial(int n, int b) {
  if (n < 0 || b < 0 || b > n || n > kMaxBinomialN) {
    throw std::invalid_argument("binomial: out of range (n=" + std::to_string(n) +
                                ", b=" + std::to_string(b) + ")");
  }
  return kPascal[n][b];
}

double basis_eval(int b, int n, double tau) {
  if (b < 0 || b > n) {
    throw std::invalid_argument("basis_eval: index b=" + std::to_string(b) +
                                " outside 0.." + std::to_string(n));
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("basis_eval: tau=" + std::to_string(tau) +
                                " outside [0,1]");
  }
  return binomial(n, b) * std::pow(tau, b) * std::pow(1.0 - tau, n - b);
}

double eval(const BernsteinSegment& seg, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("eval: tau=" + std::to_string(tau) +
                                " outside [0,1]");
  }
  std::vector<double> work = seg.coeffs;
  for (int level = seg.degree(); level >= 1; --level) {
    for (int b = 0; b < level; ++b) {
      work[b] += tau * (work[b + 1] - work[b]);
    }
  }
  return work[0];
}

BernsteinSegment derivative(const BernsteinSegment& seg) {
  const int n = seg.degree();
  if (n == 0) {
    return BernsteinSegment(seg.hour, {0.0});
  }
  std::vector<double> d(n);
  for (int b = 0; b < n; ++b) {
    d[b] = n * (seg.coeffs[b + 1] - seg.coeffs[b]);
  }
  return BernsteinSegment(seg.hour, std::move(d));
}

BernsteinSegment elevate(const BernsteinSegment& seg, int target_degree) {
  const int n = seg.degree();
  if (target_degree < n) {
    throw std::invalid_argument("elevate: target degree " +
                                std::to_string(target_degree) +
                                " below current degree " + std::to_string(n));
  }
  std::vector<double> c = seg.coeffs;
  for (int cur = n; cur < target_degree; ++cur) {
    std::vector<double> up(cur + 2);
    up[0] = c[0];
    up[cur + 1] = c[cur];
    for (int b = 1; b <= cur; ++b) {
      const double w = static_cast<double>(b) / (cur + 1);
      up[b] = w * c[b - 1] + (1.0 - w) * c[b];
    }
    c = std::move(up);
  }
  return BernsteinSegment(seg.hour, std::move(c));
}

BernsteinSegment multiply(const BernsteinSegment& p, const BernsteinSegment& q) {
  check_same_hour(p, q, "multiply");
  const int n = p.degree();
  const int m = q.degree();
  std::vector<double> c(n + m + 1, 0.0);
  for (int k = 0; k <= n + m; ++k) {
    double acc = 0.0;
    const int j_lo = std::max(0, k - m);
    const int j_hi = std::min(n, k);
    for (int j = j_lo; j <= j_hi; ++j) {
      acc += binomial(n, j) * binomial(m, k - j) / binomial(n + m, k) *
             p.coeffs[j] * q.coeffs[k - j];
    }
    c[k] = acc;
  }
  return BernsteinSegment(p.hour, std::move(c));
}

namespace {

BernsteinSegment combine(const BernsteinSegment& p, const BernsteinSegment& q,
                         double sign, const char* op) {
  check_same_hour(p, q, op);
  const int n = std::max(p.degree(), q.degree());
  const BernsteinSegment pe = elevate(p, n);
  const BernsteinSegment qe = elevate(q, n);
  std::vector<double> c(n + 1);
  for (int b = 0; b <= n; ++b) {
    c[b] = pe.coeffs[b] + sign * qe.coeffs[b];
  }
  return BernsteinSegment(p.hour, std::move(c));
}

}  // namespace

BernsteinSegment add(const BernsteinSegment& p, const BernsteinSegment& q) {
  return combine(p, q, 1.0, "add");
}

BernsteinSegment sub(const BernsteinSegment& p, const BernsteinSegment& q) {
  return combine(p, q, -1.0, "sub");
}

std::pair<double, double> coeff_bounds(const BernsteinSegment& seg) {
  const auto [lo, hi] = std::minmax_element(seg.coeffs.begin(), seg.coeffs.end());
  return {*lo, *hi};
}

double integral(const BernsteinSegment& seg) {
  double sum = 0.0;
  for (double c : seg.coeffs) sum += c;
  return sum / static_cast<double>(seg.coeffs.size());
}

namespace {

// Gaussian elimination with partial pivoting on a small dense system.
std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                std::vector<double> rhs, const char* context) {
  const int p = static_cast<int>(rhs.size());
  for (int col = 0; col < p; ++col) {
    int pivot = col;
    for (int row = col + 1; row < p; ++row) {
      if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
    }
    if (std::fabs(a[pivot][col]) < 1e-14) {
      throw std::runtime_error(std::string(context) + ": rank-deficient system");
    }
    std::swap(a[col], a[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int row = col + 1; row < p; ++row) {
      const double f = a[row][col] / a[col][col];
      if (f == 0.0) continue;
      for (int k = col; k < p; ++k) a[row][k] -= f * a[col][k];
      rhs[row] -= f * rhs[col];
    }
  }
  std::vector<double> x(p);
  for (int row = p - 1; row >= 0; --row) {
    double acc = rhs[row];
    for (int k = row + 1; k < p; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

}  // namespace

FitResult fit_segment(const std::vector<std::pair<double, double>>& samples,
                      int degree, const FitAnchors& anchors, int hour) {
  if (degree < 0) throw std::invalid_argument("fit_segment: negative degree");
  if (anchors.slope0 && !anchors.value0) {
    throw std::invalid_argument("fit_segment: slope anchor requires value anchor");
  }
  const int n = degree;
  const int n_coeffs = n + 1;

  // Anchors fix coefficient 0 (value), coefficient 1 (value + slope/n),
  // and coefficient n (end value).
  std::vector<double> fixed(n_coeffs, 0.0);
  std::vector<bool> is_fixed(n_coeffs, false);
  if (anchors.value0) {
    fixed[0] = *anchors.value0;
    is_fixed[0] = true;
    if (anchors.slope0) {
      if (n == 0) throw std::invalid_argument("fit_segment: slope anchor on degree 0");
      fixed[1] = fixed[0] + *anchors.slope0 / n;
      is_fixed[1] = true;
    }
  }
  if (anchors.value1) {
    if (is_fixed[n]) throw std::invalid_argument("fit_segment: conflicting end anchors");
    fixed[n] = *anchors.value1;
    is_fixed[n] = true;
  }
  std::vector<int> free_idx;
  for (int b = 0; b < n_coeffs; ++b) {
    if (!is_fixed[b]) free_idx.push_back(b);
  }
  const int p = static_cast<int>(free_idx.size());
  if (static_cast<int>(samples.size()) < p) {
    throw std::invalid_argument("fit_segment: underdetermined (" +
                                std::to_string(samples.size()) + " samples for " +
                                std::to_string(p) + " free coefficients)");
  }

  std::vector<std::vector<double>> ata(p, std::vector<double>(p, 0.0));
  std::vector<double> atb(p, 0.0);
  for (const auto& [tau, y] : samples) {
    std::vector<double> row(p);
    double target = y;
    for (int b = 0; b < n_coeffs; ++b) {
      if (is_fixed[b]) target -= fixed[b] * basis_eval(b, n, tau);
    }
    for (int k = 0; k < p; ++k) row[k] = basis_eval(free_idx[k], n, tau);
    for (int r = 0; r < p; ++r) {
      atb[r] += row[r] * target;
      for (int c = 0; c < p; ++c) ata[r][c] += row[r] * row[c];
    }
  }

  // Rank check runs on the undamped matrix; the ridge below only steadies
  // near-singular layouts, it must not hide true deficiency.
  if (p > 0) {
    auto probe = ata;
    double scale = 1e-300;
    for (int r = 0; r < p; ++r) scale = std::max(scale, std::fabs(probe[r][r]));
    for (int col = 0; col < p; ++col) {
      int pivot = col;
      for (int row = col + 1; row < p; ++row) {
        if (std::fabs(probe[row][col]) > std::fabs(probe[pivot][col])) pivot = row;
      }
      if (std::fabs(probe[pivot][col]) < 1e-12 * scale) {
        throw std::runtime_error("fit_segment: rank-deficient sample layout (hour " +
                                 std::to_string(hour) + ")");
      }
      std::swap(probe[col], probe[pivot]);
      for (int row = col + 1; row < p; ++row) {
        const double f = probe[row][col] / probe[col][col];
        for (int k = col; k < p; ++k) probe[row][k] -= f * probe[col][k];
      }
    }
  }
  for (int r = 0; r < p; ++r) ata[r][r] += 1e-10;

  std::vector<double> solution;
  if (p > 0) solution = solve_dense(std::move(ata), std::move(atb), "fit_segment");

  std::vector<double> coeffs(n_coeffs);
  for (int b = 0; b < n_coeffs; ++b) coeffs[b] = fixed[b];
  for (int k = 0; k < p; ++k) coeffs[free_idx[k]] = solution[k];

  FitResult out{BernsteinSegment(hour, std::move(coeffs)), 0.0, 0.0};
  double sq = 0.0;
  for (const auto& [tau, y] : samples) {
    const double r = eval(out.segment, tau) - y;
    out.max_residual = std::max(out.max_residual, std::fabs(r));
    sq += r * r;
  }
  out.rms_residual = samples.empty() ? 0.0 : std::sqrt(sq / samples.size());
  return out;
}

double PiecewiseBernstein::eval_at(double global_time) const {
  if (segments.empty()) throw std::logic_error("PiecewiseBernstein: empty");
  const double base = segments.front().hour;
  double local = global_time - base;
  if (local < 0.0 || local > segments.size()) {
    throw std::invalid_argument("PiecewiseBernstein: time outside horizon");
  }
  int idx = std::min(static_cast<int>(local), horizon() - 1);
  return eval(segments[idx], local - idx);
}

double PiecewiseBernstein::max_c0_residual() const {
  double worst = 0.0;
  for (size_t s = 1; s < segments.size(); ++s) {
    worst = std::max(worst, std::fabs(segments[s].coeffs.front() -
                                      segments[s - 1].coeffs.back()));
  }
  return worst;
}

double PiecewiseBernstein::max_c1_residual() const {
  double worst = 0.0;
  for (size_t s = 1; s < segments.size(); ++s) {
    const auto& prev = segments[s - 1].coeffs;
    const auto& cur = segments[s].coeffs;
    const int np = static_cast<int>(prev.size()) - 1;
    const int nc = static_cast<int>(cur.size()) - 1;
    const double slope_out = np * (prev[np] - prev[np - 1]);
    const double slope_in = nc * (cur[1] - cur[0]);
    worst = std::max(worst, std::fabs(slope_in - slope_out));
  }
  return worst;
}

}  // namespace cuct::bernstein
