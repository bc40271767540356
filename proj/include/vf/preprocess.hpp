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

#ifndef VF_PREPROCESS_HPP_
#define VF_PREPROCESS_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "vf/scene.hpp"

namespace vf {

// Rigid motion between the world frame and the target-centric normalized
// frame. to_normalized translates by -origin and then rotates by -rotation;
// to_world is the exact inverse sequence.
struct FrameTransform {
  Vec2 origin;
  double rotation = 0.0;

  Vec2 to_normalized(Vec2 p) const { return rotate(p - origin, -rotation); }
  Vec2 to_world(Vec2 p) const { return rotate(p, rotation) + origin; }
};

inline constexpr double kDefaultDropoutProbability = 0.1;

// Attribute layout per vector:
//   [0]   timestamp of the end point, normalized to (0, 1] (0 for lanes)
//   [1-4] agent type one-hot, or (0, turn, intersection, 0) for lanes
//   [5]   is_lane
//   [6]   validity bit
inline constexpr std::size_t kVectorAttributes = 7;
// start.xy, end.xy, attributes
inline constexpr std::size_t kVectorFeatures = 4 + kVectorAttributes;

struct PolylineVector {
  Vec2 start;
  Vec2 end;
  std::array<double, kVectorAttributes> attributes{};
  int polyline_id = 0;

  bool valid() const { return attributes[6] != 0.0; }
};

struct VectorizedScene {
  std::vector<PolylineVector> vectors;
  int polyline_count = 0;
  int target_polyline_id = 0;
  FrameTransform transform;
};

struct NormalizedScene {
  Scene scene;
  FrameTransform transform;  // normalized -> world
};

// Moves the target's last observed state to the origin with heading zero.
// Every track, centerline, and the drivable area follows the same motion.
NormalizedScene centralize_and_align(const Scene& scene, const EpisodeConfig& cfg);

// Rotation about the origin, applied after centralization as augmentation.
Scene random_scene_rotation(const Scene& scene, double angle);

// Removes each neighbor independently with probability p; the target is
// never removed. Deterministic for a given seed.
Scene agent_dropout(const Scene& scene, double p, std::uint64_t seed);

// One polyline per track over the target's first t_obs frames (target is
// polyline 0), then one per centerline. Tracks without two consecutive
// states inside the observed window yield no valid vector and are skipped.
VectorizedScene vectorize_scene(const Scene& scene, const EpisodeConfig& cfg,
                                const FrameTransform& transform = {});

PredictionSet world_frame_restore(const PredictionSet& preds, const FrameTransform& transform);

}  // namespace vf

#endif  // VF_PREPROCESS_HPP_
