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

#ifndef VF_SYNTH_HPP_
#define VF_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vf/scene.hpp"

namespace vf {

enum class Topology { kStraight, kCurve, kFork };

std::string_view to_string(Topology topology);
Topology topology_from_string(std::string_view name);  // throws ConfigInvalid

struct SynthConfig {
  Topology topology = Topology::kStraight;
  double radius = 50.0;           // curve radius, meters (left turn)
  double fork_angle_deg = 30.0;   // branch angle; positive branches left
  int n_neighbors = 2;
  double speed_min = 5.0;         // m/s
  double speed_max = 15.0;
  double noise_std = 0.0;         // meters, added to every position
  std::uint64_t seed = 0;
  int n_train = 500;
  int n_val = 100;
  EpisodeConfig episode;
  double rate = 10.0;
  double half_width = 3.0;        // drivable corridor, meters per side
  double point_spacing = 2.0;     // centerline resolution, meters
  bool random_pose = true;        // place each scene at a random world pose
};

void validate(const SynthConfig& cfg);  // throws ConfigInvalid

// One scene with t_obs + t_pred frames. Deterministic in (cfg, seed).
Scene generate_scene(const SynthConfig& cfg, std::uint64_t seed, std::string id);

struct SynthDataset {
  std::vector<Scene> train;
  std::vector<Scene> val;
};

// Scene ids are "train_NNNN" and "val_NNNN"; every scene has its own seed
// derived from cfg.seed, split and index.
SynthDataset generate_dataset(const SynthConfig& cfg);

// Seed of one scene, exposed for tests.
std::uint64_t scene_seed(std::uint64_t master, int split, int index);

}  // namespace vf

#endif  // VF_SYNTH_HPP_
