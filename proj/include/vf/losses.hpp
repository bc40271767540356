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

#ifndef VF_LOSSES_HPP_
#define VF_LOSSES_HPP_

#include <span>
#include <vector>

#include "vf/heads.hpp"

namespace vf {

struct LossConfig {
  double huber_delta = 1.0;        // meters
  double alpha = 1.0;              // regression weight of the WTA objective
  double target_weight = 1.0;
  double motion_weight = 1.0;
  double score_weight = 1.0;
  double score_temperature = 1.0;  // meters
};

void validate(const LossConfig& cfg);

// -log pi[positive] + mean Huber(offset[positive] - true offset) over x, y.
Var target_loss(const TargetPrediction& tp, const CandidateAssignment& assign,
                const LossConfig& cfg);

// Mean elementwise Huber over every coordinate. `pred` is (1, 2T) or (T, 2).
Var motion_loss(Var pred, const Trajectory& gt, const LossConfig& cfg);

// Soft labels softmax(-max_t |traj_t - gt_t| / temperature) over modes.
std::vector<double> score_soft_labels(std::span<const Trajectory> trajectories,
                                      const Trajectory& gt, double temperature);

// Cross entropy between the soft labels (constants) and the predicted
// distribution given as log-scores (M, 1).
Var score_loss(Var log_scores, std::span<const Trajectory> trajectories, const Trajectory& gt,
               const LossConfig& cfg);

// Mode whose mean pointwise L2 distance to gt is smallest (lowest index on
// ties). trajectories: (K, 2T).
std::size_t closest_mode(const Tensor& trajectories, const Trajectory& gt);

struct WtaLoss {
  Var value;
  std::size_t best_mode = 0;
};

// -log p[i*] + alpha * mean_t |traj[i*]_t - gt_t| where i* is the closest
// mode. probs: (K, 1), summing to one.
WtaLoss mtp_wta_loss(Var trajectories, Var probs, const Trajectory& gt, const LossConfig& cfg);

Var total_tnt_loss(Var target, Var motion, Var score, const LossConfig& cfg);

}  // namespace vf

#endif  // VF_LOSSES_HPP_
