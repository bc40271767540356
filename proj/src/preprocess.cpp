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

#include "vf/preprocess.hpp"

#include <map>
#include <random>

#include "vf/error.hpp"

namespace vf {

namespace {

template <typename PointFn, typename HeadingFn>
Scene map_scene(const Scene& scene, PointFn point, HeadingFn heading, double velocity_angle) {
  Scene out = scene;
  auto map_track = [&](Track& track) {
    for (auto& s : track.states) {
      const Vec2 p = point(s.position());
      const Vec2 v = rotate({s.vx, s.vy}, velocity_angle);
      s.x = p.x;
      s.y = p.y;
      s.vx = v.x;
      s.vy = v.y;
      s.heading = heading(s.heading);
    }
  };
  map_track(out.target);
  for (auto& track : out.neighbors) map_track(track);
  for (auto& line : out.centerlines) {
    for (auto& p : line.points) p = point(p);
  }
  for (auto& p : out.drivable_area) p = point(p);
  return out;
}

}  // namespace

NormalizedScene centralize_and_align(const Scene& scene, const EpisodeConfig& cfg) {
  const auto& states = scene.target.states;
  if (cfg.t_obs < 1 || states.size() < static_cast<std::size_t>(cfg.t_obs)) {
    throw Error(ErrorKind::kInsufficientHistory,
                "centralization needs " + std::to_string(cfg.t_obs) + " observed states");
  }
  const AgentState& last = states[static_cast<std::size_t>(cfg.t_obs - 1)];
  FrameTransform transform{last.position(), last.heading};

  NormalizedScene out;
  out.transform = transform;
  out.scene = map_scene(
      scene, [&](Vec2 p) { return transform.to_normalized(p); },
      [&](double h) { return wrap_angle(h - transform.rotation); }, -transform.rotation);
  // Pin the anchor state exactly; rounding in the rigid motion would
  // otherwise leave it a few ULP away from the origin.
  AgentState& anchor = out.scene.target.states[static_cast<std::size_t>(cfg.t_obs - 1)];
  anchor.x = 0.0;
  anchor.y = 0.0;
  anchor.heading = 0.0;
  return out;
}

Scene random_scene_rotation(const Scene& scene, double angle) {
  if (angle == 0.0) return scene;
  return map_scene(
      scene, [&](Vec2 p) { return rotate(p, angle); },
      [&](double h) { return wrap_angle(h + angle); }, angle);
}

Scene agent_dropout(const Scene& scene, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::kConfigInvalid, "dropout probability must be in [0, 1]");
  }
  Scene out = scene;
  out.neighbors.clear();
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution drop(p);
  for (const auto& track : scene.neighbors) {
    if (!drop(rng)) out.neighbors.push_back(track);
  }
  return out;
}

VectorizedScene vectorize_scene(const Scene& scene, const EpisodeConfig& cfg,
                                const FrameTransform& transform) {
  const auto& target_states = scene.target.states;
  if (cfg.t_obs < 2 || target_states.size() < static_cast<std::size_t>(cfg.t_obs)) {
    throw Error(ErrorKind::kInsufficientHistory, "vectorization needs t_obs >= 2 target states");
  }
  const auto n_obs = static_cast<std::size_t>(cfg.t_obs);
  std::vector<std::int64_t> frames(n_obs);
  for (std::size_t i = 0; i < n_obs; ++i) frames[i] = target_states[i].t;

  VectorizedScene vs;
  vs.transform = transform;
  vs.target_polyline_id = 0;
  int next_id = 0;

  auto add_track = [&](const Track& track) {
    std::map<std::int64_t, const AgentState*> by_frame;
    for (const auto& s : track.states) by_frame[s.t] = &s;
    std::vector<const AgentState*> slots(n_obs, nullptr);
    for (std::size_t i = 0; i < n_obs; ++i) {
      auto it = by_frame.find(frames[i]);
      if (it != by_frame.end()) slots[i] = it->second;
    }
    bool any = false;
    for (std::size_t i = 0; i + 1 < n_obs; ++i) any = any || (slots[i] && slots[i + 1]);
    if (!any) return;
    const int id = next_id++;
    for (std::size_t i = 0; i + 1 < n_obs; ++i) {
      PolylineVector v;
      v.polyline_id = id;
      const AgentState* a = slots[i];
      const AgentState* b = slots[i + 1];
      const bool valid = a != nullptr && b != nullptr;
      if (valid) {
        v.start = a->position();
        v.end = b->position();
      }
      v.attributes[0] = static_cast<double>(i + 1) / static_cast<double>(n_obs - 1);
      const AgentType type = track.states.front().agent_type;
      v.attributes[1 + static_cast<std::size_t>(type)] = 1.0;
      v.attributes[5] = 0.0;
      v.attributes[6] = valid ? 1.0 : 0.0;
      vs.vectors.push_back(v);
    }
  };

  add_track(scene.target);
  for (const auto& track : scene.neighbors) add_track(track);

  for (const auto& line : scene.centerlines) {
    const int id = next_id++;
    for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
      PolylineVector v;
      v.polyline_id = id;
      v.start = line.points[i];
      v.end = line.points[i + 1];
      v.attributes[2] = line.turn[i] ? 1.0 : 0.0;
      v.attributes[3] = line.intersection[i] ? 1.0 : 0.0;
      v.attributes[5] = 1.0;
      v.attributes[6] = 1.0;
      vs.vectors.push_back(v);
    }
  }
  vs.polyline_count = next_id;
  return vs;
}

PredictionSet world_frame_restore(const PredictionSet& preds, const FrameTransform& transform) {
  if (preds.frame != Frame::kNormalized) {
    throw Error(ErrorKind::kFrameMismatch, "predictions are not in the normalized frame");
  }
  PredictionSet out = preds;
  out.frame = Frame::kWorld;
  for (auto& traj : out.trajectories) {
    for (auto& p : traj) p = transform.to_world(p);
  }
  return out;
}

}  // namespace vf
