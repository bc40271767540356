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

#ifndef VF_MODEL_HPP_
#define VF_MODEL_HPP_

#include <cstdint>
#include <string>

#include "vf/encoder.hpp"
#include "vf/heads.hpp"
#include "vf/losses.hpp"
#include "vf/preprocess.hpp"
#include "vf/selection.hpp"
#include "vf/target_sampler.hpp"

namespace vf {

enum class LossMode { kTnt, kWta };

struct ModelConfig {
  EpisodeConfig episode;
  EncoderConfig encoder;
  HeadConfig heads;
  NmsConfig nms;
  double candidate_spacing = kDefaultCandidateSpacing;
};

// Checks every sub-config and their agreement (t_pred, k).
void validate(const ModelConfig& cfg);

// Encoder and heads with their parameters. The layout is a pure function
// of the configuration, so parameters can be restored by name.
class TntModel {
 public:
  static TntModel create(const ModelConfig& cfg, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  Params& params() { return params_; }
  const Params& params() const { return params_; }
  const EncoderParams& encoder() const { return encoder_; }
  const HeadParams& heads() const { return heads_; }

 private:
  ModelConfig config_;
  Params params_;
  EncoderParams encoder_;
  HeadParams heads_;
};

struct AugmentOptions {
  double rotation = 0.0;  // radians, applied after centralization
  double dropout = 0.0;
  std::uint64_t dropout_seed = 0;
};

// Everything one scene contributes to training or inference, in the
// normalized frame unless named otherwise.
struct Sample {
  std::string scene_id;
  Scene observed;
  FrameTransform transform;  // normalized -> world
  VectorizedScene vectors;
  CandidateSet candidates;
  bool has_future = false;
  Trajectory future;
  Trajectory future_world;
  CandidateAssignment assignment;
  Polygon area_world;
};

// Inference scenes need t_obs target states; training scenes need
// t_obs + t_pred.
Sample prepare_sample(const Scene& scene, const ModelConfig& cfg,
                      const AugmentOptions& augment = {});

Var encode_context(Tape& tape, const TntModel& model, const Sample& sample);

struct LossParts {
  Var target;
  Var motion;
  Var score;
  Var total;
};

// Values that enter the graph as constants: the refined top-M endpoints
// and the trajectories the scoring head sees. Empty fields are filled on
// the first pass; filled ones are reused, which makes the loss the smooth
// function of the parameters that backward differentiates.
struct StopGradients {
  Tensor endpoints;
  Tensor decoded;
};

// One training forward pass. The motion head runs twice: on the true
// endpoint (teacher forcing) and on the top-M predicted targets, whose
// trajectories feed the scoring head. Under kWta the score part is the
// winner-takes-all objective over the top-k targets instead.
LossParts forward_losses(Tape& tape, const TntModel& model, const Sample& sample,
                         const LossConfig& loss, LossMode mode = LossMode::kTnt,
                         StopGradients* stops = nullptr);

ModeSet infer_modes(const TntModel& model, const Sample& sample);

// Full inference: modes, NMS, and restoration to the world frame.
PredictionSet predict(const TntModel& model, const Sample& sample);

}  // namespace vf

#endif  // VF_MODEL_HPP_
