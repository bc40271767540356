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

#ifndef VF_TARGET_SAMPLER_HPP_
#define VF_TARGET_SAMPLER_HPP_

#include <span>
#include <string>
#include <vector>

#include "vf/scene.hpp"
#include "vf/tensor.hpp"

namespace vf {

inline constexpr double kDefaultCandidateSpacing = 0.5;  // meters
inline constexpr double kCandidateMergeDistance = 1e-6;  // meters

struct TargetCandidate {
  Vec2 position;
  std::string source_centerline;
  double arc_offset = 0.0;
};

struct CandidateSet {
  std::vector<TargetCandidate> candidates;

  std::size_t size() const { return candidates.size(); }
  Tensor positions() const;  // (N, 2)
};

struct CandidateAssignment {
  std::size_t positive_index = 0;
  Vec2 offset;  // ground-truth endpoint minus the positive candidate
};

// Equal-distance samples along every centerline at arc offsets
// 0, s, 2s, ... plus the terminal point. Candidates closer than
// kCandidateMergeDistance to an earlier one are dropped, so the count
// varies with the map.
CandidateSet sample_candidates(std::span<const Centerline> centerlines, double spacing);
CandidateSet sample_candidates(const Scene& scene, double spacing);

// Nearest candidate to the endpoint, lowest index on ties.
CandidateAssignment assign_ground_truth(const CandidateSet& cands, Vec2 gt_endpoint);

}  // namespace vf

#endif  // VF_TARGET_SAMPLER_HPP_
