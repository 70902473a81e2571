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

#ifndef CUCT_BERNSTEIN_HPP_
#define CUCT_BERNSTEIN_HPP_

#include <optional>
#include <utility>
#include <vector>

namespace cuct::bernstein {

// A degree-n polynomial in Bernstein form on the hourly interval
// [hour, hour+1), parameterized by the local coordinate tau in [0,1].
// Control values carry the units of the quantity they describe (MW for
// power, MW/h for ramps).
struct BernsteinSegment {
  int hour = 0;
  std::vector<double> coeffs;  // size = degree + 1, all finite

  BernsteinSegment() = default;
  BernsteinSegment(int hour_index, std::vector<double> control_values);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Binomial coefficient C(n, b) as a double. Valid for 0 <= b <= n <= 40.
double binomial(int n, int b);

// Bernstein basis function beta_{b,n}(tau) = C(n,b) tau^b (1-tau)^(n-b).
// The n+1 values at any tau sum to one.
double basis_eval(int b, int n, double tau);

// Evaluates the segment at tau in [0,1] by de Casteljau's algorithm, so
// evaluation at tau=0 / tau=1 returns the first / last coefficient exactly.
double eval(const BernsteinSegment& seg, double tau);

// Derivative segment of degree n-1 with coefficients n*(c[b+1]-c[b]).
// Values carry units per hour. A degree-0 input yields the zero segment
// of degree 0.
BernsteinSegment derivative(const BernsteinSegment& seg);

// Degree elevation to target_degree >= degree; pointwise values unchanged.
BernsteinSegment elevate(const BernsteinSegment& seg, int target_degree);

// Product of two segments on the same hour; result degree is n + m.
BernsteinSegment multiply(const BernsteinSegment& p, const BernsteinSegment& q);

// Coefficient-wise sum/difference; the lower-degree operand is elevated
// first. Both must live on the same hour.
BernsteinSegment add(const BernsteinSegment& p, const BernsteinSegment& q);
BernsteinSegment sub(const BernsteinSegment& p, const BernsteinSegment& q);

// (min coefficient, max coefficient). By the convex hull property the
// segment never evaluates outside this interval.
std::pair<double, double> coeff_bounds(const BernsteinSegment& seg);

// Exact integral over the one-hour span: (sum of coefficients) / (n+1).
// MWh when the coefficients are MW.
double integral(const BernsteinSegment& seg);

// Optional endpoint constraints for fit_segment. `value0` pins the value at
// tau=0 (coefficient 0); `slope0` pins the derivative at tau=0, i.e. fixes
// the first coefficient difference; `value1` pins the value at tau=1 (last
// coefficient). Chained per-hour fits use value0/slope0 to carry continuity
// from the previous hour and value1 to stay locked to the boundary sample:
// without the end anchor the value/slope errors compound hour over hour.
struct FitAnchors {
  std::optional<double> value0;
  std::optional<double> slope0;
  std::optional<double> value1;
};

struct FitResult {
  BernsteinSegment segment;
  double max_residual = 0.0;
  double rms_residual = 0.0;
};

// Least-squares fit of sampled (tau, value) pairs in coefficient space.
// Anchored coefficients are eliminated by substitution; the remaining
// normal-equations system gets a ridge damping of 1e-10 to guard
// near-singular sample layouts. Throws std::invalid_argument when the
// system is underdetermined and std::runtime_error when rank-deficient.
FitResult fit_segment(const std::vector<std::pair<double, double>>& samples,
                      int degree, const FitAnchors& anchors = {}, int hour = 0);

// Hour-contiguous piecewise curve, one segment per hour of the horizon.
struct PiecewiseBernstein {
  std::vector<BernsteinSegment> segments;

  int horizon() const { return static_cast<int>(segments.size()); }

  // Evaluates at global time g in [0, horizon); g = hour + tau.
  double eval_at(double global_time) const;

  // Largest |c0| / |c1| continuity residual over interior hour boundaries.
  double max_c0_residual() const;
  double max_c1_residual() const;
};

}  // namespace cuct::bernstein

#endif  // CUCT_BERNSTEIN_HPP_
