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

#ifndef VF_SCENE_HPP_
#define VF_SCENE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vf/geometry.hpp"

namespace vf {

enum class AgentType { kTargetVehicle, kVehicle, kPedestrian, kOther };

inline constexpr int kAgentTypeCount = 4;

std::string_view to_string(AgentType type);
AgentType agent_type_from_string(std::string_view name);  // throws MalformedRecord

struct AgentState {
  std::int64_t t = 0;  // frame index; wall-clock time is t / rate
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double heading = 0.0;  // radians in (-pi, pi]
  AgentType agent_type = AgentType::kOther;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct Track {
  std::string agent_id;
  std::vector<AgentState> states;  // strictly increasing t

  friend bool operator==(const Track&, const Track&) = default;
};

struct Centerline {
  std::string id;
  Polyline points;
  std::vector<bool> turn;          // per point
  std::vector<bool> intersection;  // per point

  friend bool operator==(const Centerline&, const Centerline&) = default;
};

struct Scene {
  std::string id;
  Track target;
  std::vector<Track> neighbors;
  std::vector<Centerline> centerlines;
  Polygon drivable_area;
  double rate = 10.0;  // samples per second

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Defaults: 2 s observed and 3 s predicted at 10 Hz, six output modes.
struct EpisodeConfig {
  int t_obs = 20;
  int t_pred = 30;
  int k = 6;
};

void validate(const EpisodeConfig& cfg);  // throws ConfigInvalid

enum class Frame { kWorld, kNormalized };

using Trajectory = std::vector<Vec2>;

struct PredictionSet {
  std::vector<Trajectory> trajectories;
  std::vector<double> scores;
  Frame frame = Frame::kNormalized;

  std::size_t k() const { return trajectories.size(); }
};

// Parses one scene from its trajectory CSV and map JSON sidecar. Tracks are
// sorted by frame; the agent typed target_vehicle becomes the target.
Scene parse_scene(std::string_view trajectory_csv, std::string_view map_json);

std::string serialize_trajectories(const Scene& scene);
std::string serialize_map(const Scene& scene);

struct ObservedSplit {
  Scene observed;
  Trajectory future_target;
};

ObservedSplit split_observed_future(const Scene& scene, const EpisodeConfig& cfg);

enum class ViolationKind {
  kMissingTarget,
  kHeadingOutOfRange,
  kNonMonotoneTrack,
  kNonFiniteValue,
  kCenterlineTooShort,
  kCoincidentCenterlinePoints,
  kCenterlineFlagLength,
  kNonSimplePolygon,
  kNonPositiveRate,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::vector<Violation> validate_scene(const Scene& scene);

// Prediction output CSV (scene_id,mode,rank,score,step,x,y). Rank is the
// 1-based position in descending score order.
std::string serialize_predictions(std::string_view scene_id, const PredictionSet& preds);
std::string prediction_csv_header();

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace vf

#endif  // VF_SCENE_HPP_
