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

#include "vf/target_sampler.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "vf/error.hpp"

namespace vf {

namespace {

// Hash grid keyed on cells of the merge distance; a duplicate can only
// live in the 3x3 neighborhood of a point's cell.
class MergeGrid {
 public:
  bool insert_if_new(Vec2 p) {
    const std::int64_t cx = cell(p.x);
    const std::int64_t cy = cell(p.y);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (Vec2 q : it->second) {
          if (distance(p, q) < kCandidateMergeDistance) return false;
        }
      }
    }
    cells_[key(cx, cy)].push_back(p);
    return true;
  }

 private:
  static std::int64_t cell(double v) {
    return static_cast<std::int64_t>(std::floor(v / kCandidateMergeDistance));
  }
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(y);
  }

  std::unordered_map<std::uint64_t, std::vector<Vec2>> cells_;
};

}  // namespace

Tensor CandidateSet::positions() const {
  Tensor t({candidates.size(), 2});
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    t(i, 0) = candidates[i].position.x;
    t(i, 1) = candidates[i].position.y;
  }
  return t;
}

CandidateSet sample_candidates(std::span<const Centerline> centerlines, double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorKind::kConfigInvalid, "candidate spacing must be > 0");
  if (centerlines.empty()) throw Error(ErrorKind::kNoCenterlines, "scene has no centerlines");

  CandidateSet set;
  MergeGrid grid;
  auto emit = [&](Vec2 p, const Centerline& line, double arc) {
    if (grid.insert_if_new(p)) set.candidates.push_back({p, line.id, arc});
  };

  for (const Centerline& line : centerlines) {
    const auto& pts = line.points;
    if (pts.empty()) continue;
    double seg_start_arc = 0.0;
    std::size_t k = 0;  // next sample is at arc k * spacing
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double seg_len = distance(pts[i], pts[i + 1]);
      const double seg_end_arc = seg_start_arc + seg_len;
      while (true) {
        const double arc = static_cast<double>(k) * spacing;
        if (arc > seg_end_arc) break;
        const double t = seg_len > 0.0 ? (arc - seg_start_arc) / seg_len : 0.0;
        const Vec2 p = t <= 0.0   ? pts[i]
                       : t >= 1.0 ? pts[i + 1]
                                  : pts[i] + t * (pts[i + 1] - pts[i]);
        emit(p, line, arc);
        ++k;
      }
      seg_start_arc = seg_end_arc;
    }
    emit(pts.back(), line, seg_start_arc);
  }
  return set;
}

CandidateSet sample_candidates(const Scene& scene, double spacing) {
  return sample_candidates(std::span<const Centerline>(scene.centerlines), spacing);
}

CandidateAssignment assign_ground_truth(const CandidateSet& cands, Vec2 gt_endpoint) {
  if (cands.size() == 0) throw Error(ErrorKind::kNoCenterlines, "empty candidate set");
  std::size_t best = 0;
  double best_d = INFINITY;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const double d = distance(cands.candidates[i].position, gt_endpoint);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return {best, gt_endpoint - cands.candidates[best].position};
}

}  // namespace vf
