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

#ifndef CUCT_NADIRLEARN_HPP_
#define CUCT_NADIRLEARN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cuct/freq.hpp"
#include "cuct/sysmodel.hpp"

namespace cuct::nadirlearn {

// Labels saturate here. Near the arrest limit the closed form blows up (and
// past it there is no finite value at all); a bounded target keeps the
// regression anchored to the decision region around practical thresholds.
inline constexpr double kLabelCapHz = 8.0;

struct SamplePoint {
  double lost_mw = 0.0;
  double inertia_mws = 0.0;  // surviving committed inertia
  double reserve_mw = 0.0;   // surviving reserve
  double demand_mw = 0.0;    // used for labeling only, not a feature
  double nadir_hz = 0.0;     // label from the diagonal closed form
  bool secure(double threshold_hz) const { return nadir_hz <= threshold_hz; }
};

struct Dataset {
  std::vector<SamplePoint> points;
  sysmodel::SystemParams params;  // snapshot of the generating case
  std::uint64_t seed = 0;
  long capped = 0;  // labels saturated at kLabelCapHz (incl. unarrested draws)
};

// Synthetic operating points: random commitment (each unit on with
// probability equal to its share of total capacity), a demand level drawn
// between the profile's min and peak, proportional loading of the committed
// units, reserves as random fractions of headroom; every committed unit is
// then emitted as an outage candidate labeled by the closed-form nadir.
// Draws whose demand falls outside the committed range are resampled (capped
// retries). Deterministic: sample k derives its own rng from (seed, k).
Dataset generate_dataset(const sysmodel::CaseInput& c, int n_samples, std::uint64_t seed);

struct NadirModel {
  double alpha0 = 0.0, alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
  double threshold_hz = 0.0;
  double score = 0.0;           // held-out classification agreement
  // Conservative embedding margin: a high quantile of the fit's
  // under-prediction residuals in the 1..6 Hz band. The MILP rows run with
  // alpha0 + margin so a schedule riding the constraint cannot sit on the
  // unsafe side of the regression error.
  double margin_hz = 0.0;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;

  freq::NadirSurrogate surrogate() const {
    return freq::NadirSurrogate{alpha0 + margin_hz, alpha1, alpha2, alpha3, threshold_hz};
  }
};

// Ordinary least squares of the nadir label on (1, lost, inertia, reserve)
// over a stratified 70% train split, using only points below the label cap
// (saturated points carry no shape information); score is the
// security-classification agreement on the full held-out 30%.
NadirModel fit_linear(const Dataset& dataset, double threshold_hz);

double score(const NadirModel& model, const std::vector<SamplePoint>& test_set,
             double threshold_hz);

void write_dataset_csv(const Dataset& dataset, const std::string& path);
void write_model_json(const NadirModel& model, const std::string& path);
NadirModel load_model_json(const std::string& path);

}  // namespace cuct::nadirlearn

#endif  // CUCT_NADIRLEARN_HPP_
