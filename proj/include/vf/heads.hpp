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

#ifndef VF_HEADS_HPP_
#define VF_HEADS_HPP_

#include <random>
#include <span>
#include <vector>

#include "vf/layers.hpp"
#include "vf/scene.hpp"
#include "vf/target_sampler.hpp"

namespace vf {

struct HeadConfig {
  int hidden_dim = 64;
  int m = 50;       // targets kept for trajectory decoding and scoring
  int t_pred = 30;  // decoded trajectory length
};

void validate(const HeadConfig& cfg);

struct HeadParams {
  Mlp2 target_logit;   // [ctx, candidate] -> 1
  Mlp2 target_offset;  // [ctx, candidate] -> 2
  Mlp2 motion;         // [ctx, endpoint] -> 2 * t_pred
  Mlp2 scoring;        // [ctx, trajectory] -> 1
  std::size_t t_pred = 0;
};

HeadParams register_heads(Params& params, const HeadConfig& cfg, std::size_t context_width,
                          std::mt19937_64& rng);

struct TargetPrediction {
  Var logits;     // (N, 1)
  Var log_probs;  // (N, 1)
  Var probs;      // (N, 1), softmax over candidates
  Var offsets;    // (N, 2)
};

TargetPrediction target_head(Tape& tape, Var context, const CandidateSet& cands,
                             const Params& params, const HeadParams& layout);

// Indices of the m most probable candidates, probability descending with
// index ascending on ties. Returns min(m, N) entries.
std::vector<std::size_t> top_m_indices(std::span<const double> probs, std::size_t m);

// Candidate position plus predicted offset for each of the top-m targets.
std::vector<Vec2> select_top_m(const TargetPrediction& tp, const CandidateSet& cands,
                               std::size_t m);

// Decodes one trajectory per endpoint row: (M, 2) -> (M, 2 * t_pred), each
// row laid out x1, y1, x2, y2, ...
Var motion_head(Tape& tape, Var context, Var endpoints, const Params& params,
                const HeadParams& layout);

struct ScoreOutput {
  Var logits;      // (M, 1)
  Var log_scores;  // (M, 1)
  Var scores;      // (M, 1), softmax over modes
};

// trajectories: (M, 2 * t_pred) flattened as produced by motion_head.
ScoreOutput scoring_head(Tape& tape, Var context, Var trajectories, const Params& params,
                         const HeadParams& layout);

// Targets, decoded trajectories and scores aligned by index.
struct ModeSet {
  std::vector<Vec2> targets;
  std::vector<Trajectory> trajectories;
  std::vector<double> scores;

  std::size_t size() const { return trajectories.size(); }
};

Tensor flatten_trajectories(std::span<const Trajectory> trajectories);
std::vector<Trajectory> unflatten_trajectories(const Tensor& flat);

}  // namespace vf

#endif  // VF_HEADS_HPP_
