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

#ifndef CUCT_MILP_MPS_HPP_
#define CUCT_MILP_MPS_HPP_

#include <string>

#include "cuct/milp/model.hpp"

namespace cuct::milp {

// Serializes a frozen model to MPS text. Emitted sections: NAME, ROWS,
// COLUMNS (binaries wrapped in INTORG/INTEND markers), RHS, BOUNDS (BV for
// binaries), ENDATA. Row and column order is model insertion order, and
// values print with "%.12g", so the bytes are a pure function of the build
// sequence.
std::string export_mps(const Model& model);

// Reads the subset written by export_mps (tolerant of extra whitespace).
// The objective row is the single N row.
Model parse_mps(const std::string& text);

}  // namespace cuct::milp

#endif  // CUCT_MILP_MPS_HPP_
