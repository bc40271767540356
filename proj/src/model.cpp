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

#include "vf/model.hpp"

#include <random>

#include "vf/error.hpp"

namespace vf {

void validate(const ModelConfig& cfg) {
  validate(cfg.episode);
  validate(cfg.encoder);
  validate(cfg.heads);
  validate(cfg.nms);
  if (cfg.heads.t_pred != cfg.episode.t_pred) {
    throw Error(ErrorKind::kConfigInvalid, "heads.t_pred must equal episode.t_pred");
  }
  if (cfg.nms.k != cfg.episode.k) {
    throw Error(ErrorKind::kConfigInvalid, "nms.k must equal episode.k");
  }
  if (!(cfg.candidate_spacing > 0.0)) {
    throw Error(ErrorKind::kConfigInvalid, "candidate_spacing must be > 0");
  }
}

TntModel TntModel::create(const ModelConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  TntModel model;
  model.config_ = cfg;
  std::mt19937_64 rng(seed);
  model.encoder_ = register_encoder(model.params_, cfg.encoder, rng);
  model.heads_ = register_heads(model.params_, cfg.heads,
                                static_cast<std::size_t>(cfg.encoder.hidden_dim), rng);
  return model;
}

Sample prepare_sample(const Scene& scene, const ModelConfig& cfg, const AugmentOptions& augment) {
  const EpisodeConfig& ep = cfg.episode;
  NormalizedScene norm = centralize_and_align(scene, ep);
  Scene working = std::move(norm.scene);
  FrameTransform transform = norm.transform;
  if (augment.rotation != 0.0) {
    working = random_scene_rotation(working, augment.rotation);
    transform.rotation -= augment.rotation;
  }
  if (augment.dropout > 0.0) working = agent_dropout(working, augment.dropout, augment.dropout_seed);

  Sample s;
  s.scene_id = scene.id;
  s.transform = transform;
  s.area_world = scene.drivable_area;
  const auto full = static_cast<std::size_t>(ep.t_obs + ep.t_pred);
  if (working.target.states.size() >= full) {
    ObservedSplit split = split_observed_future(working, ep);
    s.observed = std::move(split.observed);
    s.future = std::move(split.future_target);
    s.has_future = true;
    for (int i = 0; i < ep.t_pred; ++i) {
      s.future_world.push_back(scene.target.states[static_cast<std::size_t>(ep.t_obs + i)].position());
    }
  } else {
    s.observed = std::move(working);
    s.observed.target.states.resize(static_cast<std::size_t>(ep.t_obs));
  }
  s.vectors = vectorize_scene(s.observed, ep, transform);
  s.candidates = sample_candidates(s.observed, cfg.candidate_spacing);
  if (s.has_future) s.assignment = assign_ground_truth(s.candidates, s.future.back());
  return s;
}

Var encode_context(Tape& tape, const TntModel& model, const Sample& sample) {
  PolylineFeatures feats = subgraph_encode(tape, sample.vectors, model.params(), model.encoder());
  feats = global_interact(tape, feats, model.params(), model.encoder());
  return target_feature(feats);
}

namespace {

Tensor endpoint_matrix(std::span<const Vec2> points) {
  Tensor t({points.size(), 2});
  for (std::size_t i = 0; i < points.size(); ++i) {
    t(i, 0) = points[i].x;
    t(i, 1) = points[i].y;
  }
  return t;
}

}  // namespace

namespace {

// Refined top-m endpoints, or the recorded ones.
Var stop_endpoints(Tape& tape, const TargetPrediction& tp, const Sample& sample, std::size_t m,
                   StopGradients* stops) {
  if (stops != nullptr && !stops->endpoints.empty()) return tape.constant(stops->endpoints);
  Tensor e = endpoint_matrix(select_top_m(tp, sample.candidates, m));
  if (stops != nullptr) stops->endpoints = e;
  return tape.constant(std::move(e));
}

Var stop_decoded(Tape& tape, Var decoded, StopGradients& stops) {
  if (stops.decoded.empty()) {
    stops.decoded = decoded.value();
    return decoded;
  }
  return tape.constant(stops.decoded);
}

}  // namespace

LossParts forward_losses(Tape& tape, const TntModel& model, const Sample& sample,
                         const LossConfig& loss, LossMode mode, StopGradients* stops) {
  if (!sample.has_future) {
    throw Error(ErrorKind::kInsufficientHistory, "training sample has no future");
  }
  const Params& params = model.params();
  const HeadParams& heads = model.heads();
  Var ctx = encode_context(tape, model, sample);

  TargetPrediction tp = target_head(tape, ctx, sample.candidates, params, heads);
  LossParts parts;
  parts.target = target_loss(tp, sample.assignment, loss);

  const Vec2 gt_end = sample.future.back();
  Var forced = motion_head(tape, ctx, tape.constant(Tensor::row({gt_end.x, gt_end.y})), params,
                           heads);
  parts.motion = motion_loss(forced, sample.future, loss);

  const auto m = static_cast<std::size_t>(model.config().heads.m);
  if (mode == LossMode::kTnt) {
    const Var endpoints = stop_endpoints(tape, tp, sample, m, stops);
    Var decoded = detach(motion_head(tape, ctx, endpoints, params, heads));
    if (stops != nullptr) decoded = stop_decoded(tape, decoded, *stops);
    ScoreOutput scores = scoring_head(tape, ctx, decoded, params, heads);
    const auto trajectories = unflatten_trajectories(decoded.value());
    parts.score = score_loss(scores.log_scores, trajectories, sample.future, loss);
    parts.total = total_tnt_loss(parts.target, parts.motion, parts.score, loss);
  } else {
    const auto k = static_cast<std::size_t>(model.config().episode.k);
    const Var endpoints = stop_endpoints(tape, tp, sample, std::min(m, k), stops);
    Var decoded = motion_head(tape, ctx, endpoints, params, heads);
    Var scored = detach(decoded);
    if (stops != nullptr) scored = stop_decoded(tape, scored, *stops);
    ScoreOutput scores = scoring_head(tape, ctx, scored, params, heads);
    parts.score = mtp_wta_loss(decoded, scores.scores, sample.future, loss).value;
    parts.total = total_tnt_loss(parts.target, parts.motion, parts.score, loss);
  }
  return parts;
}

ModeSet infer_modes(const TntModel& model, const Sample& sample) {
  Tape tape;
  const Params& params = model.params();
  const HeadParams& heads = model.heads();
  Var ctx = encode_context(tape, model, sample);
  TargetPrediction tp = target_head(tape, ctx, sample.candidates, params, heads);
  ModeSet modes;
  modes.targets = select_top_m(tp, sample.candidates, static_cast<std::size_t>(model.config().heads.m));
  Var decoded = motion_head(tape, ctx, tape.constant(endpoint_matrix(modes.targets)), params, heads);
  ScoreOutput scores = scoring_head(tape, ctx, decoded, params, heads);
  modes.trajectories = unflatten_trajectories(decoded.value());
  const Tensor& sv = scores.scores.value();
  modes.scores.assign(sv.data().begin(), sv.data().end());
  return modes;
}

PredictionSet predict(const TntModel& model, const Sample& sample) {
  return world_frame_restore(nms_select(infer_modes(model, sample), model.config().nms),
                             sample.transform);
}

}  // namespace vf
