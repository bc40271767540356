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

#include "vf/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <random>

#include "vf/error.hpp"
#include "vf/random.hpp"

namespace vf {

void validate(const TrainConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kConfigInvalid, what); };
  if (cfg.epochs < 1) fail("epochs must be >= 1");
  if (cfg.batch_size < 1) fail("batch_size must be >= 1");
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    fail("learning_rate must be > 0");
  }
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0)) fail("beta1 must be in [0, 1)");
  if (!(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) fail("beta2 must be in [0, 1)");
  if (!(cfg.epsilon > 0.0)) fail("epsilon must be > 0");
  if (!(cfg.dropout >= 0.0 && cfg.dropout <= 1.0)) fail("dropout must be in [0, 1]");
}

void optimizer_step(Params& params, const Gradients& grads, const TrainConfig& cfg,
                    OptimizerState& state) {
  if (grads.size() != params.size()) {
    throw Error(ErrorKind::kShapeMismatch, "gradient count does not match parameters");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].shape() != params[i].shape()) {
      throw Error(ErrorKind::kShapeMismatch, "gradient shape mismatch for " + params.name(i));
    }
  }
  const double lr = cfg.learning_rate;
  ++state.step;
  if (cfg.optimizer == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto w = params[i].data();
      auto g = grads[i].data();
      for (std::size_t j = 0; j < w.size(); ++j) w[j] -= lr * g[j];
    }
    return;
  }
  if (state.first_moment.empty()) {
    state.first_moment = params.zeros_like();
    state.second_moment = params.zeros_like();
  }
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto w = params[i].data();
    auto g = grads[i].data();
    auto m = state.first_moment[i].data();
    auto v = state.second_moment[i].data();
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[j];
      v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[j] * g[j];
      const double mhat = m[j] / c1;
      const double vhat = v[j] / c2;
      w[j] -= lr * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
  }
}

std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed, std::uint64_t epoch) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(mix_seed({seed, epoch, 0x5045524dull}));
  // Fisher-Yates with an explicit draw so the order does not depend on the
  // standard library's shuffle.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

namespace {

// The trainer also accepts lr = 0, which freezes the parameters while
// still reporting losses.
void validate_trainer(const TrainConfig& cfg) {
  TrainConfig probe = cfg;
  if (probe.learning_rate == 0.0) probe.learning_rate = 1.0;
  validate(probe);
}

}  // namespace

Trainer::Trainer(TntModel model, TrainConfig train, LossConfig loss)
    : model_(std::move(model)), train_(train), loss_(loss) {
  validate_trainer(train_);
  validate(loss_);
  cursor_.seed = train_.seed;
}

Trainer::Trainer(const Checkpoint& ckpt, TrainConfig train, LossConfig loss)
    : model_(restore_model(ckpt)), train_(train), loss_(loss), optimizer_(ckpt.optimizer),
      cursor_(ckpt.cursor) {
  validate_trainer(train_);
  validate(loss_);
  train_.seed = cursor_.seed;
}

const std::vector<std::size_t>& Trainer::permutation(std::size_t n) {
  if (perm_epoch_ != cursor_.epoch || perm_.size() != n) {
    perm_ = epoch_permutation(n, cursor_.seed, cursor_.epoch);
    perm_epoch_ = cursor_.epoch;
  }
  return perm_;
}

void Trainer::step(std::span<const Scene> dataset, LossSummary& acc) {
  const std::size_t n = dataset.size();
  const auto bs = static_cast<std::size_t>(train_.batch_size);
  const std::size_t batches = (n + bs - 1) / bs;
  const auto& perm = permutation(n);
  const std::size_t begin = static_cast<std::size_t>(cursor_.batch) * bs;
  const std::size_t end = std::min(n, begin + bs);
  const std::size_t count = end - begin;

  std::vector<Gradients> grads(count);
  std::vector<std::array<double, 4>> losses(count);
  std::exception_ptr failure;
  const std::uint64_t step_id = cursor_.global_step;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t j = 0; j < count; ++j) {
    try {
      AugmentOptions aug;
      std::mt19937_64 rng(mix_seed({cursor_.seed, step_id, j, 0x41554731ull}));
      if (train_.augment_rotation) {
        aug.rotation = std::uniform_real_distribution<double>(-std::numbers::pi, std::numbers::pi)(rng);
      }
      aug.dropout = train_.dropout;
      aug.dropout_seed = rng();
      const Sample sample = prepare_sample(dataset[perm[begin + j]], model_.config(), aug);
      Tape tape;
      LossParts parts = forward_losses(tape, model_, sample, loss_, train_.loss_mode);
      grads[j] = tape.backward(parts.total, model_.params());
      losses[j] = {parts.target.value().item(), parts.motion.value().item(),
                   parts.score.value().item(), parts.total.value().item()};
    } catch (...) {
#pragma omp critical(vf_trainer_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  Gradients sum = std::move(grads[0]);
  for (std::size_t j = 1; j < count; ++j) {
    for (std::size_t p = 0; p < sum.size(); ++p) {
      auto dst = sum[p].data();
      auto src = grads[j][p].data();
      for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += src[e];
    }
  }
  const double inv = 1.0 / static_cast<double>(count);
  for (Tensor& g : sum) {
    for (double& v : g.data()) v *= inv;
    if (!g.all_finite()) {
      throw Error(ErrorKind::kNonFinite,
                  "non-finite gradient at step " + std::to_string(cursor_.global_step));
    }
  }
  optimizer_step(model_.params(), sum, train_, optimizer_);
  for (std::size_t p = 0; p < model_.params().size(); ++p) {
    if (!model_.params()[p].all_finite()) {
      throw Error(ErrorKind::kNonFinite, "parameter " + model_.params().name(p) +
                                             " became non-finite at step " +
                                             std::to_string(cursor_.global_step));
    }
  }

  for (const auto& l : losses) {
    acc.target += l[0];
    acc.motion += l[1];
    acc.score += l[2];
    acc.total += l[3];
  }
  acc.scenes += count;
  ++acc.steps;

  ++cursor_.global_step;
  if (++cursor_.batch == batches) {
    cursor_.batch = 0;
    ++cursor_.epoch;
  }
}

namespace {

LossSummary finish(LossSummary acc) {
  if (acc.scenes > 0) {
    const double inv = 1.0 / static_cast<double>(acc.scenes);
    acc.target *= inv;
    acc.motion *= inv;
    acc.score *= inv;
    acc.total *= inv;
  }
  return acc;
}

}  // namespace

LossSummary Trainer::train_epoch(std::span<const Scene> dataset) {
  if (dataset.empty()) throw Error(ErrorKind::kEmptyReduction, "training dataset is empty");
  LossSummary acc;
  const std::uint64_t epoch = cursor_.epoch;
  while (cursor_.epoch == epoch) step(dataset, acc);
  return finish(acc);
}

LossSummary Trainer::train_steps(std::span<const Scene> dataset, std::size_t steps) {
  if (dataset.empty()) throw Error(ErrorKind::kEmptyReduction, "training dataset is empty");
  LossSummary acc;
  for (std::size_t s = 0; s < steps; ++s) step(dataset, acc);
  return finish(acc);
}

Checkpoint Trainer::checkpoint() const {
  Checkpoint ckpt;
  ckpt.config = model_.config();
  ckpt.params = model_.params();
  ckpt.optimizer = optimizer_;
  ckpt.cursor = cursor_;
  return ckpt;
}

EvaluationResult evaluate(const TntModel& model, std::span<const Scene> dataset,
                          const EvaluationOptions& options) {
  if (dataset.empty()) throw Error(ErrorKind::kEmptyReduction, "evaluation dataset is empty");
  EvaluationResult result;
  result.cases.resize(dataset.size());
  result.scene_ids.resize(dataset.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1) if (options.parallel)
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    try {
      const Sample sample = prepare_sample(dataset[i], model.config());
      if (!sample.has_future) {
        throw Error(ErrorKind::kInsufficientHistory,
                    "scene " + dataset[i].id + " has no ground-truth future");
      }
      EvaluationCase& c = result.cases[i];
      c.preds = options.hook ? options.hook(sample) : predict(model, sample);
      c.gt = sample.future_world;
      c.area = sample.area_world;
      result.scene_ids[i] = dataset[i].id;
    } catch (...) {
#pragma omp critical(vf_evaluate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  result.report = options.parallel
                      ? parallel::evaluate_batch(result.cases, options.miss_threshold)
                      : serial::evaluate_batch(result.cases, options.miss_threshold);
  return result;
}

}  // namespace vf
