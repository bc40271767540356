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

#ifndef VF_TRAINER_HPP_
#define VF_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vf/checkpoint.hpp"
#include "vf/losses.hpp"
#include "vf/metrics.hpp"
#include "vf/model.hpp"

namespace vf {

enum class OptimizerKind { kSgd, kAdam };

struct TrainConfig {
  int epochs = 20;
  int batch_size = 8;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool augment_rotation = false;
  double dropout = kDefaultDropoutProbability;
  LossMode loss_mode = LossMode::kTnt;
};

void validate(const TrainConfig& cfg);  // throws ConfigInvalid

// SGD: w -= lr * g. Adam: moment recursion with bias correction.
// Moments are allocated on the first Adam step.
void optimizer_step(Params& params, const Gradients& grads, const TrainConfig& cfg,
                    OptimizerState& state);

struct LossSummary {
  double target = 0.0;
  double motion = 0.0;
  double score = 0.0;
  double total = 0.0;
  std::size_t scenes = 0;
  std::size_t steps = 0;
};

// Mini-batch training over a fixed dataset. Scenes in a batch run on
// separate tapes (concurrently under OpenMP) and their gradients are
// summed in batch order, so results do not depend on scheduling.
// Unlike validate(TrainConfig), a learning rate of 0 is accepted.
class Trainer {
 public:
  Trainer(TntModel model, TrainConfig train, LossConfig loss);
  // Continues from a checkpoint. The seed stored in the checkpoint wins
  // over train.seed.
  Trainer(const Checkpoint& ckpt, TrainConfig train, LossConfig loss);

  // Finishes the current epoch.
  LossSummary train_epoch(std::span<const Scene> dataset);
  // Runs up to `steps` optimizer steps, crossing epoch boundaries.
  LossSummary train_steps(std::span<const Scene> dataset, std::size_t steps);

  Checkpoint checkpoint() const;

  const TntModel& model() const { return model_; }
  TntModel& model() { return model_; }
  const TrainingCursor& cursor() const { return cursor_; }
  const OptimizerState& optimizer_state() const { return optimizer_; }

 private:
  void step(std::span<const Scene> dataset, LossSummary& acc);
  const std::vector<std::size_t>& permutation(std::size_t n);

  TntModel model_;
  TrainConfig train_;
  LossConfig loss_;
  OptimizerState optimizer_;
  TrainingCursor cursor_;
  std::vector<std::size_t> perm_;
  std::uint64_t perm_epoch_ = UINT64_MAX;
};

// Visit order for one epoch, a pure function of (seed, epoch).
std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed, std::uint64_t epoch);

// Replaces the model's prediction for a sample; must return world-frame
// predictions.
using PredictionHook = std::function<PredictionSet(const Sample&)>;

struct EvaluationOptions {
  double miss_threshold = kDefaultMissThreshold;
  bool parallel = true;
  PredictionHook hook;
};

struct EvaluationResult {
  MetricReport report;
  std::vector<std::string> scene_ids;
  std::vector<EvaluationCase> cases;  // world frame, in dataset order
};

EvaluationResult evaluate(const TntModel& model, std::span<const Scene> dataset,
                          const EvaluationOptions& options = {});

}  // namespace vf

#endif  // VF_TRAINER_HPP_
