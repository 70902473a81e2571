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

#include "cuct/nadirlearn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace cuct::nadirlearn {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + ((rng() >> 11) * 0x1.0p-53) * (hi - lo);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t k) {
  // splitmix64 step keyed by the sample index
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

Dataset generate_dataset(const sysmodel::CaseInput& c, int n_samples, std::uint64_t seed) {
  if (n_samples < 0) throw std::invalid_argument("generate_dataset: negative n_samples");
  Dataset dataset;
  dataset.seed = seed;
  dataset.params = c.params;
  if (n_samples == 0) return dataset;

  const int n_units = static_cast<int>(c.units.size());
  double total_pmax = 0.0;
  for (const auto& unit : c.units) total_pmax += unit.p_max_mw;
  const double demand_lo = c.demand_min();
  const double demand_hi = c.demand_peak();

  constexpr int kMaxRetries = 500;
  for (std::uint64_t draw = 0; static_cast<int>(dataset.points.size()) < n_samples; ++draw) {
    std::mt19937_64 rng(mix(seed, draw));

    std::vector<int> on(n_units, 0);
    double demand = 0.0;
    double pmin_sum = 0.0, pmax_sum = 0.0;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxRetries && !ok; ++attempt) {
      pmin_sum = pmax_sum = 0.0;
      for (int i = 0; i < n_units; ++i) {
        on[i] = uniform(rng, 0.0, 1.0) < c.units[i].p_max_mw / total_pmax ? 1 : 0;
        if (on[i]) {
          pmin_sum += c.units[i].p_min_mw;
          pmax_sum += c.units[i].p_max_mw;
        }
      }
      demand = uniform(rng, demand_lo, demand_hi);
      ok = pmax_sum > 0.0 && demand >= pmin_sum && demand <= pmax_sum;
    }
    if (!ok) {
      throw std::runtime_error(
          "generate_dataset: retry cap hit; demand range incompatible with unit fleet");
    }

    // Randomized loading: waterfill the demand above the minimum outputs
    // with per-unit random weights. A single common loading fraction would
    // tie every dispatch to the demand level and collapse the feature
    // space, which leaves the regression blind off that manifold.
    std::vector<double> power(n_units, 0.0), weight(n_units, 0.0);
    double remaining = demand - pmin_sum;
    for (int i = 0; i < n_units; ++i) {
      if (!on[i]) continue;
      power[i] = c.units[i].p_min_mw;
      weight[i] = 0.05 + uniform(rng, 0.0, 1.0);
    }
    for (int pass = 0; pass < n_units && remaining > 1e-12; ++pass) {
      double total_weight = 0.0;
      for (int i = 0; i < n_units; ++i) {
        if (on[i] && power[i] < c.units[i].p_max_mw) {
          total_weight += weight[i] * (c.units[i].p_max_mw - power[i]);
        }
      }
      if (total_weight <= 0.0) break;
      const double budget = remaining;
      for (int i = 0; i < n_units; ++i) {
        if (!on[i] || power[i] >= c.units[i].p_max_mw) continue;
        const double headroom = c.units[i].p_max_mw - power[i];
        const double add = std::min(headroom, budget * weight[i] * headroom / total_weight);
        power[i] += add;
        remaining -= add;
      }
    }
    for (int i = 0; i < n_units && remaining > 1e-12; ++i) {
      if (!on[i]) continue;
      const double add = std::min(c.units[i].p_max_mw - power[i], remaining);
      power[i] += add;
      remaining -= add;
    }

    std::vector<double> reserve(n_units, 0.0);
    double reserve_sum = 0.0, inertia_sum = 0.0;
    for (int i = 0; i < n_units; ++i) {
      if (!on[i]) continue;
      reserve[i] = uniform(rng, 0.0, 1.0) * (c.units[i].p_max_mw - power[i]);
      reserve_sum += reserve[i];
      inertia_sum += c.units[i].inertia_s * c.units[i].base_mva;
    }

    for (int l = 0; l < n_units && static_cast<int>(dataset.points.size()) < n_samples; ++l) {
      if (!on[l]) continue;
      freq::OutageContext ctx;
      ctx.lost_mw = power[l];
      ctx.reserve_mw = reserve_sum - reserve[l];
      ctx.inertia_mws = inertia_sum - c.units[l].inertia_s * c.units[l].base_mva;
      ctx.demand_mw = demand;
      const auto nadir = freq::nadir_exact(ctx, c.params);
      double label = kLabelCapHz;
      if (nadir.has_value() && *nadir < kLabelCapHz) {
        label = *nadir;
      } else {
        ++dataset.capped;
      }
      dataset.points.push_back(SamplePoint{ctx.lost_mw, ctx.inertia_mws, ctx.reserve_mw,
                                           ctx.demand_mw, label});
    }
  }
  return dataset;
}

namespace {

NadirModel ols_fit(const std::vector<const SamplePoint*>& train, double threshold_hz) {
  double xtx[4][4] = {};
  double xty[4] = {};
  for (const SamplePoint* p : train) {
    const double row[4] = {1.0, p->lost_mw, p->inertia_mws, p->reserve_mw};
    for (int a = 0; a < 4; ++a) {
      xty[a] += row[a] * p->nadir_hz;
      for (int b = 0; b < 4; ++b) xtx[a][b] += row[a] * row[b];
    }
  }
  // Gaussian elimination with partial pivoting.
  double scale = 0.0;
  for (int a = 0; a < 4; ++a) scale = std::max(scale, std::fabs(xtx[a][a]));
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 4; ++row) {
      if (std::fabs(xtx[row][col]) > std::fabs(xtx[pivot][col])) pivot = row;
    }
    if (std::fabs(xtx[pivot][col]) < 1e-10 * std::max(scale, 1.0)) {
      throw std::runtime_error(
          "fit_linear: rank-deficient design; draw more (or more varied) samples");
    }
    std::swap(xtx[col], xtx[pivot]);
    std::swap(xty[col], xty[pivot]);
    for (int row = col + 1; row < 4; ++row) {
      const double f = xtx[row][col] / xtx[col][col];
      for (int k = col; k < 4; ++k) xtx[row][k] -= f * xtx[col][k];
      xty[row] -= f * xty[col];
    }
  }
  double alpha[4];
  for (int row = 3; row >= 0; --row) {
    double acc = xty[row];
    for (int k = row + 1; k < 4; ++k) acc -= xtx[row][k] * alpha[k];
    alpha[row] = acc / xtx[row][row];
  }
  NadirModel model;
  model.alpha0 = alpha[0];
  model.alpha1 = alpha[1];
  model.alpha2 = alpha[2];
  model.alpha3 = alpha[3];
  model.threshold_hz = threshold_hz;
  return model;
}

}  // namespace

NadirModel fit_linear(const Dataset& dataset, double threshold_hz) {
  if (dataset.points.size() < 4) {
    throw std::invalid_argument("fit_linear: need at least 4 points");
  }
  // Stratified 70/30 split keyed by the dataset seed, so degenerate test
  // sets (all one class) cannot occur once both classes exist.
  std::vector<int> secure_idx, insecure_idx;
  for (size_t k = 0; k < dataset.points.size(); ++k) {
    (dataset.points[k].secure(threshold_hz) ? secure_idx : insecure_idx).push_back(k);
  }
  std::mt19937_64 rng(dataset.seed ^ 0xA5A5A5A5DEADBEEFULL);
  auto shuffle = [&rng](std::vector<int>& idx) {
    for (size_t k = idx.size(); k > 1; --k) {
      std::swap(idx[k - 1], idx[rng() % k]);
    }
  };
  shuffle(secure_idx);
  shuffle(insecure_idx);

  std::vector<const SamplePoint*> train;
  std::vector<SamplePoint> test;
  auto split = [&](const std::vector<int>& idx) {
    const size_t cut = static_cast<size_t>(std::floor(0.7 * idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) {
      if (k < cut) {
        // Saturated labels say nothing about the surface shape; they are
        // classified by extrapolation and still count in the score.
        if (dataset.points[idx[k]].nadir_hz < kLabelCapHz) {
          train.push_back(&dataset.points[idx[k]]);
        }
      } else {
        test.push_back(dataset.points[idx[k]]);
      }
    }
  };
  split(secure_idx);
  split(insecure_idx);
  if (train.size() < 4) throw std::invalid_argument("fit_linear: training split too small");

  NadirModel model = ols_fit(train, threshold_hz);
  model.seed = dataset.seed;
  // Calibrate the embedding margin where constrained schedules actually
  // live: QSS-consistent states (surviving reserve covers the loss net of
  // load damping) whose prediction falls in the band any practical
  // threshold rides. States outside QSS are unreachable for the solver.
  std::vector<double> under;
  const auto& sp = dataset.params;
  for (const SamplePoint* p : train) {
    if (p->nadir_hz >= kLabelCapHz) continue;
    const double qss_floor = p->lost_mw - sp.damping * p->demand_mw * sp.qss_limit_hz;
    if (p->reserve_mw < qss_floor) continue;
    const double predicted = model.alpha0 + model.alpha1 * p->lost_mw +
                             model.alpha2 * p->inertia_mws + model.alpha3 * p->reserve_mw;
    if (predicted < 1.0 || predicted > 4.0) continue;
    const double residual = p->nadir_hz - predicted;
    if (residual > 0.0) under.push_back(residual);
  }
  if (!under.empty()) {
    // Max over the sampled band plus a pad: a solver rides the constraint
    // into corners the sample need not cover.
    model.margin_hz = std::min(*std::max_element(under.begin(), under.end()) + 0.1, 1.5);
  }
  model.score = test.empty() ? 1.0 : score(model, test, threshold_hz);
  return model;
}

double score(const NadirModel& model, const std::vector<SamplePoint>& test_set,
             double threshold_hz) {
  if (test_set.empty()) throw std::invalid_argument("score: empty test set");
  long agree = 0;
  for (const auto& p : test_set) {
    const double predicted = model.alpha0 + model.alpha1 * p.lost_mw +
                             model.alpha2 * p.inertia_mws + model.alpha3 * p.reserve_mw;
    if ((predicted <= threshold_hz) == p.secure(threshold_hz)) ++agree;
  }
  return static_cast<double>(agree) / test_set.size();
}

void write_dataset_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset csv '" + path + "'");
  out << "lost_mw,inertia_mws,reserve_mw,demand_mw,nadir_hz\n";
  for (const auto& p : dataset.points) {
    out << fmt(p.lost_mw) << ',' << fmt(p.inertia_mws) << ',' << fmt(p.reserve_mw) << ','
        << fmt(p.demand_mw) << ',' << fmt(p.nadir_hz) << '\n';
  }
}

void write_model_json(const NadirModel& model, const std::string& path) {
  nlohmann::json doc = {
      {"alpha0", model.alpha0},       {"alpha1", model.alpha1},
      {"alpha2", model.alpha2},       {"alpha3", model.alpha3},
      {"threshold_hz", model.threshold_hz},
      {"score", model.score},         {"margin_hz", model.margin_hz},
      {"train_fraction", model.train_fraction},
      {"seed", model.seed},
  };
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model json '" + path + "'");
  out << doc.dump(2) << "\n";
}

NadirModel load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model json '" + path + "'");
  nlohmann::json doc = nlohmann::json::parse(in);
  NadirModel model;
  model.alpha0 = doc.at("alpha0").get<double>();
  model.alpha1 = doc.at("alpha1").get<double>();
  model.alpha2 = doc.at("alpha2").get<double>();
  model.alpha3 = doc.at("alpha3").get<double>();
  model.threshold_hz = doc.at("threshold_hz").get<double>();
  model.score = doc.at("score").get<double>();
  model.margin_hz = doc.value("margin_hz", 0.0);
  model.train_fraction = doc.value("train_fraction", 0.7);
  model.seed = doc.value("seed", 0ULL);
  return model;
}

}  // namespace cuct::nadirlearn
