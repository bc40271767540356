// Copyright 2026 The vecforecast Authors.
//
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

#ifndef VF_SELECTION_HPP_
#define VF_SELECTION_HPP_

#include "vf/heads.hpp"

namespace vf {

enum class PadMode { kZero, kBest };

struct NmsConfig {
  double threshold = 2.0;  // endpoint distance, meters
  int k = 6;
  PadMode pad = PadMode::kZero;
};

void validate(const NmsConfig& cfg);

// Greedy non-maximum suppression. Modes are visited by score (descending,
// index ascending on ties) and kept when their endpoint is at least
// `threshold` from every kept endpoint. Unfilled slots are all-zero
// trajectories with score 0, or copies of the best pick under kBest.
// The result is in the normalized frame and always has k trajectories.
PredictionSet nms_select(const ModeSet& modes, const NmsConfig& cfg);

}  // namespace vf

#endif  // VF_SELECTION_HPP_
