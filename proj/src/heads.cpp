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

#include "vf/heads.hpp"

#include <algorithm>
#include <numeric>

#include "vf/error.hpp"

namespace vf {

void validate(const HeadConfig& cfg) {
  if (cfg.hidden_dim < 1) throw Error(ErrorKind::kConfigInvalid, "heads.hidden_dim must be >= 1");
  if (cfg.m < 1) throw Error(ErrorKind::kConfigInvalid, "heads.m must be >= 1");
  if (cfg.t_pred < 1) throw Error(ErrorKind::kConfigInvalid, "heads.t_pred must be >= 1");
}

HeadParams register_heads(Params& params, const HeadConfig& cfg, std::size_t context_width,
                          std::mt19937_64& rng) {
  validate(cfg);
  const auto h = static_cast<std::size_t>(cfg.hidden_dim);
  const auto t = static_cast<std::size_t>(cfg.t_pred);
  HeadParams layout;
  layout.t_pred = t;
  layout.target_logit = Mlp2::create(params, "heads.target_logit", context_width + 2, h, 1, rng);
  layout.target_offset = Mlp2::create(params, "heads.target_offset", context_width + 2, h, 2, rng);
  layout.motion = Mlp2::create(params, "heads.motion", context_width + 2, h, 2 * t, rng);
  layout.scoring = Mlp2::create(params, "heads.scoring", context_width + 2 * t, h, 1, rng);
  return layout;
}

TargetPrediction target_head(Tape& tape, Var context, const CandidateSet& cands,
                             const Params& params, const HeadParams& layout) {
  if (cands.size() == 0) throw Error(ErrorKind::kNoCenterlines, "target head needs candidates");
  Var input = concat(repeat_rows(context, cands.size()), tape.constant(cands.positions()), 1);
  TargetPrediction tp;
  tp.logits = layout.target_logit(tape, params, input);
  tp.log_probs = log_softmax(tp.logits, 0);
  tp.probs = softmax(tp.logits, 0);
  tp.offsets = layout.target_offset(tape, params, input);
  return tp;
}

std::vector<std::size_t> top_m_indices(std::span<const double> probs, std::size_t m) {
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t keep = std::min(m, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (probs[a] != probs[b]) return probs[a] > probs[b];
                      return a < b;
                    });
  order.resize(keep);
  return order;
}

std::vector<Vec2> select_top_m(const TargetPrediction& tp, const CandidateSet& cands,
                               std::size_t m) {
  const Tensor& probs = tp.probs.value();
  const Tensor& offsets = tp.offsets.value();
  std::vector<Vec2> out;
  for (std::size_t i : top_m_indices(probs.data(), m)) {
    out.push_back(cands.candidates[i].position + Vec2{offsets(i, 0), offsets(i, 1)});
  }
  return out;
}

Var motion_head(Tape& tape, Var context, Var endpoints, const Params& params,
                const HeadParams& layout) {
  if (endpoints.cols() != 2) {
    throw Error(ErrorKind::kShapeMismatch, "motion_head endpoints must be (M, 2)");
  }
  Var input = concat(repeat_rows(context, endpoints.rows()), endpoints, 1);
  return layout.motion(tape, params, input);
}

ScoreOutput scoring_head(Tape& tape, Var context, Var trajectories, const Params& params,
                         const HeadParams& layout) {
  if (trajectories.cols() != 2 * layout.t_pred) {
    throw Error(ErrorKind::kShapeMismatch, "scoring_head trajectories must be (M, 2 * t_pred)");
  }
  Var input = concat(repeat_rows(context, trajectories.rows()), trajectories, 1);
  ScoreOutput out;
  out.logits = layout.scoring(tape, params, input);
  out.log_scores = log_softmax(out.logits, 0);
  out.scores = softmax(out.logits, 0);
  return out;
}

Tensor flatten_trajectories(std::span<const Trajectory> trajectories) {
  const std::size_t t = trajectories.empty() ? 0 : trajectories.front().size();
  Tensor flat({trajectories.size(), 2 * t});
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (trajectories[i].size() != t) {
      throw Error(ErrorKind::kLengthMismatch, "trajectories differ in length");
    }
    for (std::size_t s = 0; s < t; ++s) {
      flat(i, 2 * s) = trajectories[i][s].x;
      flat(i, 2 * s + 1) = trajectories[i][s].y;
    }
  }
  return flat;
}

std::vector<Trajectory> unflatten_trajectories(const Tensor& flat) {
  std::vector<Trajectory> out(flat.rows());
  const std::size_t t = flat.cols() / 2;
  for (std::size_t i = 0; i < flat.rows(); ++i) {
    out[i].resize(t);
    for (std::size_t s = 0; s < t; ++s) out[i][s] = {flat(i, 2 * s), flat(i, 2 * s + 1)};
  }
  return out;
}

}  // namespace vf
