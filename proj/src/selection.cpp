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

#include "vf/selection.hpp"

#include <algorithm>
#include <numeric>

#include "vf/error.hpp"

namespace vf {

void validate(const NmsConfig& cfg) {
  if (!(cfg.threshold >= 0.0)) throw Error(ErrorKind::kConfigInvalid, "nms.threshold must be >= 0");
  if (cfg.k < 1) throw Error(ErrorKind::kConfigInvalid, "nms.k must be >= 1");
}

PredictionSet nms_select(const ModeSet& modes, const NmsConfig& cfg) {
  validate(cfg);
  if (modes.size() == 0 || modes.scores.size() != modes.size()) {
    throw Error(ErrorKind::kLengthMismatch, "mode set is empty or misaligned");
  }
  std::vector<std::size_t> order(modes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return modes.scores[a] > modes.scores[b];
  });

  const auto k = static_cast<std::size_t>(cfg.k);
  PredictionSet out;
  out.frame = Frame::kNormalized;
  std::vector<Vec2> kept_endpoints;
  for (std::size_t i : order) {
    if (out.k() == k) break;
    const Trajectory& traj = modes.trajectories[i];
    if (traj.empty()) throw Error(ErrorKind::kLengthMismatch, "empty trajectory in mode set");
    const Vec2 end = traj.back();
    const bool distinct = std::all_of(kept_endpoints.begin(), kept_endpoints.end(),
                                      [&](Vec2 e) { return distance(e, end) >= cfg.threshold; });
    if (!distinct) continue;
    kept_endpoints.push_back(end);
    out.trajectories.push_back(traj);
    out.scores.push_back(modes.scores[i]);
  }

  const std::size_t len = modes.trajectories[order.front()].size();
  while (out.k() < k) {
    if (cfg.pad == PadMode::kBest) {
      out.trajectories.push_back(out.trajectories.front());
    } else {
      out.trajectories.emplace_back(len, Vec2{});
    }
    out.scores.push_back(0.0);
  }
  return out;
}

}  // namespace vf
