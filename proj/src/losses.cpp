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

#include "vf/losses.hpp"

#include <algorithm>
#include <cmath>

#include "vf/error.hpp"

namespace vf {

namespace {

Tensor trajectory_row(const Trajectory& traj) {
  Tensor t({1, 2 * traj.size()});
  for (std::size_t s = 0; s < traj.size(); ++s) {
    t[2 * s] = traj[s].x;
    t[2 * s + 1] = traj[s].y;
  }
  return t;
}

}  // namespace

void validate(const LossConfig& cfg) {
  for (double v : {cfg.huber_delta, cfg.alpha, cfg.target_weight, cfg.motion_weight,
                   cfg.score_weight, cfg.score_temperature}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kConfigInvalid, "loss configuration values must be positive");
    }
  }
}

Var target_loss(const TargetPrediction& tp, const CandidateAssignment& assign,
                const LossConfig& cfg) {
  const std::size_t pos = assign.positive_index;
  if (pos >= tp.log_probs.rows()) {
    throw Error(ErrorKind::kIndexOutOfRange, "positive candidate " + std::to_string(pos));
  }
  Tape& tape = *tp.log_probs.tape();
  Var nll = scale(pick(tp.log_probs, pos, 0), -1.0);
  const std::size_t row[] = {pos};
  Var offset = gather_rows(tp.offsets, row);
  Var residual = sub(offset, tape.constant(Tensor::row({assign.offset.x, assign.offset.y})));
  return add(nll, mean(huber(residual, cfg.huber_delta)));
}

Var motion_loss(Var pred, const Trajectory& gt, const LossConfig& cfg) {
  if (pred.value().size() != 2 * gt.size()) {
    throw Error(ErrorKind::kLengthMismatch, "prediction has " +
                                                std::to_string(pred.value().size() / 2) +
                                                " points, ground truth " +
                                                std::to_string(gt.size()));
  }
  Tape& tape = *pred.tape();
  Var flat = reshape(pred, 1, 2 * gt.size());
  return mean(huber(sub(flat, tape.constant(trajectory_row(gt))), cfg.huber_delta));
}

std::vector<double> score_soft_labels(std::span<const Trajectory> trajectories,
                                      const Trajectory& gt, double temperature) {
  std::vector<double> logits(trajectories.size());
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (trajectories[i].size() != gt.size()) {
      throw Error(ErrorKind::kLengthMismatch, "trajectory length differs from ground truth");
    }
    double worst = 0.0;
    for (std::size_t s = 0; s < gt.size(); ++s) {
      worst = std::max(worst, distance(trajectories[i][s], gt[s]));
    }
    logits[i] = -worst / temperature;
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& v : logits) {
    v = std::exp(v - mx);
    z += v;
  }
  for (double& v : logits) v /= z;
  return logits;
}

Var score_loss(Var log_scores, std::span<const Trajectory> trajectories, const Trajectory& gt,
               const LossConfig& cfg) {
  if (trajectories.empty() || log_scores.rows() != trajectories.size()) {
    throw Error(ErrorKind::kLengthMismatch, "score count differs from trajectory count");
  }
  const auto labels = score_soft_labels(trajectories, gt, cfg.score_temperature);
  Tape& tape = *log_scores.tape();
  Tensor y({labels.size(), 1}, labels);
  return scale(sum(mul(tape.constant(std::move(y)), log_scores)), -1.0);
}

std::size_t closest_mode(const Tensor& trajectories, const Trajectory& gt) {
  if (trajectories.cols() != 2 * gt.size() || trajectories.rows() == 0) {
    throw Error(ErrorKind::kLengthMismatch, "mode shape does not match ground truth");
  }
  std::size_t best = 0;
  double best_d = INFINITY;
  for (std::size_t i = 0; i < trajectories.rows(); ++i) {
    double total = 0.0;
    for (std::size_t s = 0; s < gt.size(); ++s) {
      total += std::hypot(trajectories(i, 2 * s) - gt[s].x, trajectories(i, 2 * s + 1) - gt[s].y);
    }
    const double d = total / static_cast<double>(gt.size());
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

WtaLoss mtp_wta_loss(Var trajectories, Var probs, const Trajectory& gt, const LossConfig& cfg) {
  if (probs.rows() != trajectories.rows() || probs.cols() != 1) {
    throw Error(ErrorKind::kShapeMismatch, "mode probabilities must be (K, 1)");
  }
  const std::size_t best = closest_mode(trajectories.value(), gt);
  Tape& tape = *trajectories.tape();
  const std::size_t row[] = {best};
  Var mode = reshape(gather_rows(trajectories, row), gt.size(), 2);
  Var gt_points = reshape(tape.constant(trajectory_row(gt)), gt.size(), 2);
  Var displacement = mean(row_norms(sub(mode, gt_points)));
  Var nll = scale(log(pick(probs, best, 0)), -1.0);
  return {add(nll, scale(displacement, cfg.alpha)), best};
}

Var total_tnt_loss(Var target, Var motion, Var score, const LossConfig& cfg) {
  return add(add(scale(target, cfg.target_weight), scale(motion, cfg.motion_weight)),
             scale(score, cfg.score_weight));
}

}  // namespace vf
