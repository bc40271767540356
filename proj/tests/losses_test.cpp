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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "vf/error.hpp"
#include "vf/gradcheck.hpp"
#include "vf/losses.hpp"

namespace vf {
namespace {

using testing::random_tensor;

Trajectory random_traj(std::size_t t, std::mt19937_64& rng, double spread = 5.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Trajectory out(t);
  for (Vec2& p : out) p = {u(rng), u(rng)};
  return out;
}

Trajectory shifted(const Trajectory& t, Vec2 d) {
  Trajectory out = t;
  for (Vec2& p : out) p = p + d;
  return out;
}

Tensor row_of(const Trajectory& t) { return flatten_trajectories(std::vector<Trajectory>{t}); }

double huber_ref(double r, double delta) {
  const double a = std::abs(r);
  return a <= delta ? 0.5 * r * r : delta * (a - 0.5 * delta);
}

// Keeps every residual out of the Huber kink band.
Tensor away_from_kink(Tensor t, const Tensor& reference, double delta) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    while (std::abs(std::abs(t[i] - reference[i]) - delta) < 2e-3) t[i] += 0.01;
  }
  return t;
}

TargetPrediction prediction_from(Tape& tape, const Tensor& logits, const Tensor& offsets) {
  TargetPrediction tp;
  tp.logits = tape.constant(logits);
  tp.log_probs = log_softmax(tp.logits, 0);
  tp.probs = softmax(tp.logits, 0);
  tp.offsets = tape.constant(offsets);
  return tp;
}

TEST(LossConfig, Validation) {
  LossConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.huber_delta = 0.0;
  EXPECT_THROW(validate(cfg), Error);
  cfg = {};
  cfg.score_temperature = -1.0;
  EXPECT_THROW(validate(cfg), Error);
}

TEST(TargetLoss, Examples) {
  Tape tape;
  // One candidate: probability 1; exact offset.
  const TargetPrediction one =
      prediction_from(tape, Tensor::scalar(0.3), Tensor::matrix(1, 2, {0.25, -1.0}));
  EXPECT_EQ(target_loss(one, {0, {0.25, -1.0}}, {}).value().item(), 0.0);

  // Logits (0, log(e - 1)) give probabilities (1/e, 1 - 1/e).
  const TargetPrediction two = prediction_from(tape, Tensor::matrix(2, 1, {0.0, std::log(M_E - 1.0)}),
                                               Tensor::matrix(2, 2, {1, 1, 7, 7}));
  EXPECT_NEAR(target_loss(two, {0, {1.0, 1.0}}, {}).value().item(), 1.0, 1e-12);
}

TEST(TargetLoss, MatchesDirectFormula) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    const Tensor logits = random_tensor(n, 1, rng, -3, 3);
    const Tensor offsets = random_tensor(n, 2, rng, -3, 3);
    const std::size_t pos = rng() % n;
    const Vec2 truth{std::uniform_real_distribution<double>(-3, 3)(rng), 0.4};
    Tape tape;
    const double got = target_loss(prediction_from(tape, logits, offsets), {pos, truth}, {}).value().item();
    double z = 0.0;
    for (double v : logits.data()) z += std::exp(v);
    const double want = -(logits[pos] - std::log(z)) +
                        0.5 * (huber_ref(offsets(pos, 0) - truth.x, 1.0) +
                               huber_ref(offsets(pos, 1) - truth.y, 1.0));
    EXPECT_NEAR(got, want, 1e-12);
    EXPECT_GE(got, 0.0);
  }
}

TEST(MotionLoss, Examples) {
  std::mt19937_64 rng(2);
  const Trajectory gt = random_traj(30, rng);
  Tape tape;
  EXPECT_EQ(motion_loss(tape.constant(row_of(gt)), gt, {}).value().item(), 0.0);
  const Var half = tape.constant(row_of(shifted(gt, {0.5, 0.5})));
  EXPECT_NEAR(motion_loss(half, gt, {}).value().item(), 0.125, 1e-12);
  const Var far = tape.constant(row_of(shifted(gt, {10.0, -10.0})));
  EXPECT_NEAR(motion_loss(far, gt, {}).value().item(), 9.5, 1e-12);
  // (T, 2) layout is accepted as well.
  EXPECT_NEAR(motion_loss(reshape(half, 30, 2), gt, {}).value().item(), 0.125, 1e-12);
  EXPECT_THROW(motion_loss(half, Trajectory(29), {}), Error);
}

TEST(ScoreLoss, Examples) {
  std::mt19937_64 rng(3);
  const Trajectory gt = random_traj(5, rng);
  Tape tape;
  const std::vector<Trajectory> single = {random_traj(5, rng)};
  EXPECT_EQ(score_loss(tape.constant(Tensor::scalar(0.0)), single, gt, {}).value().item(), 0.0);

  const Trajectory t = random_traj(5, rng);
  const std::vector<Trajectory> same = {t, t};
  EXPECT_EQ(score_soft_labels(same, gt, 1.0), (std::vector<double>{0.5, 0.5}));
  const double s0 = 0.2, s1 = 0.8;
  const Var log_scores = tape.constant(Tensor::matrix(2, 1, {std::log(s0), std::log(s1)}));
  EXPECT_NEAR(score_loss(log_scores, same, gt, {}).value().item(),
              -0.5 * std::log(s0) - 0.5 * std::log(s1), 1e-12);
}

TEST(ScoreLoss, MatchesDirectFormula) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 8;
    const Trajectory gt = random_traj(6, rng);
    std::vector<Trajectory> trajs;
    for (std::size_t i = 0; i < m; ++i) trajs.push_back(random_traj(6, rng));
    LossConfig cfg;
    cfg.score_temperature = 0.5 + double(rng() % 4);
    const Tensor logits = random_tensor(m, 1, rng, -2, 2);
    Tape tape;
    const Var log_scores = log_softmax(tape.constant(logits), 0);
    const double got = score_loss(log_scores, trajs, gt, cfg).value().item();

    std::vector<double> w(m);
    double zw = 0.0, zs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double worst = 0.0;
      for (std::size_t s = 0; s < 6; ++s) worst = std::max(worst, distance(trajs[i][s], gt[s]));
      w[i] = std::exp(-worst / cfg.score_temperature);
      zw += w[i];
      zs += std::exp(logits[i]);
    }
    double want = 0.0;
    for (std::size_t i = 0; i < m; ++i) want -= (w[i] / zw) * (logits[i] - std::log(zs));
    EXPECT_NEAR(got, want, 1e-10);
    EXPECT_GE(got, 0.0);
  }
}

TEST(WtaLoss, Examples) {
  std::mt19937_64 rng(5);
  const Trajectory gt = random_traj(30, rng);
  Tape tape;
  {
    const Var trajs = tape.constant(flatten_trajectories(std::vector{shifted(gt, {40, 0}), gt}));
    const WtaLoss l = mtp_wta_loss(trajs, tape.constant(Tensor::matrix(2, 1, {0.0, 1.0})), gt, {});
    EXPECT_EQ(l.best_mode, 1u);
    EXPECT_EQ(l.value.value().item(), 0.0);
  }
  {
    const Var trajs =
        tape.constant(flatten_trajectories(std::vector{shifted(gt, {0, 2}), shifted(gt, {30, 0})}));
    const Var probs = tape.constant(Tensor::matrix(2, 1, {std::exp(-1.0), 1.0 - std::exp(-1.0)}));
    const WtaLoss l = mtp_wta_loss(trajs, probs, gt, {});
    EXPECT_EQ(l.best_mode, 0u);
    EXPECT_NEAR(l.value.value().item(), 3.0, 1e-12);
  }
}

TEST(WtaLoss, ModeSelectionMatchesBruteForce) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 1 + rng() % 8;
    const Trajectory gt = random_traj(10, rng);
    std::vector<Trajectory> modes;
    for (std::size_t i = 0; i < k; ++i) modes.push_back(random_traj(10, rng));
    if (k > 2 && trial % 4 == 0) modes[2] = modes[0];  // tie: lowest index wins
    const Tensor flat = flatten_trajectories(modes);
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t i = 0; i < k; ++i) {
      double d = 0.0;
      for (std::size_t s = 0; s < 10; ++s) d += distance(modes[i][s], gt[s]);
      if (d / 10.0 < best_d) {
        best_d = d / 10.0;
        best = i;
      }
    }
    EXPECT_EQ(closest_mode(flat, gt), best);
    const Vec2 c{u(rng), u(rng)};
    std::vector<Trajectory> moved;
    for (const auto& m : modes) moved.push_back(shifted(m, c));
    EXPECT_EQ(closest_mode(flatten_trajectories(moved), shifted(gt, c)), best);
  }
}

TEST(TotalLoss, WeightedSum) {
  Tape tape;
  const Var a = tape.constant(Tensor::scalar(1.0));
  const Var b = tape.constant(Tensor::scalar(2.0));
  const Var c = tape.constant(Tensor::scalar(3.0));
  EXPECT_EQ(total_tnt_loss(a, b, c, {}).value().item(), 6.0);
  const Var z = tape.constant(Tensor::scalar(0.0));
  EXPECT_EQ(total_tnt_loss(z, z, z, {}).value().item(), 0.0);
  LossConfig cfg;
  cfg.target_weight = 0.5;
  cfg.motion_weight = 2.0;
  cfg.score_weight = 3.0;
  EXPECT_EQ(total_tnt_loss(a, b, c, cfg).value().item(), 13.5);
}

GradCheckOptions tight() {
  GradCheckOptions opts;
  opts.tolerance = 1e-4;
  return opts;
}

TEST(LossGradients, TargetLoss) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 2 + rng() % 10;
    const std::size_t pos = rng() % n;
    const Vec2 truth{0.3, -0.8};
    Params ps;
    ps.add("logits", random_tensor(n, 1, rng, -2, 2));
    Tensor offsets = random_tensor(n, 2, rng, -3, 3);
    Tensor ref({n, 2});
    for (std::size_t i = 0; i < n; ++i) ref(i, 0) = truth.x, ref(i, 1) = truth.y;
    ps.add("offsets", away_from_kink(offsets, ref, 1.0));
    const GradCheckReport r = grad_check(
        [&](Tape& t, const Params& p) {
          TargetPrediction tp;
          tp.logits = t.param(p, 0);
          tp.log_probs = log_softmax(tp.logits, 0);
          tp.probs = softmax(tp.logits, 0);
          tp.offsets = t.param(p, 1);
          return target_loss(tp, {pos, truth}, {});
        },
        ps, tight());
    EXPECT_TRUE(r.passed()) << r.max_rel_error();
  }
}

TEST(LossGradients, MotionLoss) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const Trajectory gt = random_traj(8, rng, 2.0);
    const Tensor ref = row_of(gt);
    Params ps;
    ps.add("pred", away_from_kink(random_tensor(1, 16, rng, -4, 4), ref, 1.0));
    const GradCheckReport r = grad_check(
        [&](Tape& t, const Params& p) { return motion_loss(t.param(p, 0), gt, {}); }, ps, tight());
    EXPECT_TRUE(r.passed()) << r.max_rel_error();
  }
}

TEST(LossGradients, ScoreLoss) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const Trajectory gt = random_traj(4, rng);
    std::vector<Trajectory> trajs;
    for (int i = 0; i < 5; ++i) trajs.push_back(random_traj(4, rng));
    Params ps;
    ps.add("logits", random_tensor(5, 1, rng, -2, 2));
    const GradCheckReport r = grad_check(
        [&](Tape& t, const Params& p) {
          return score_loss(log_softmax(t.param(p, 0), 0), trajs, gt, {});
        },
        ps, tight());
    EXPECT_TRUE(r.passed()) << r.max_rel_error();
  }
}

TEST(LossGradients, WtaLoss) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const Trajectory gt = random_traj(6, rng);
    Params ps;
    ps.add("trajs", random_tensor(4, 12, rng, -5, 5));
    ps.add("logits", random_tensor(4, 1, rng, -2, 2));
    const GradCheckReport r = grad_check(
        [&](Tape& t, const Params& p) {
          return mtp_wta_loss(t.param(p, 0), softmax(t.param(p, 1), 0), gt, {}).value;
        },
        ps, tight());
    EXPECT_TRUE(r.passed()) << r.max_rel_error();
  }
}

TEST(LossGradients, TotalIsLinearInParts) {
  std::mt19937_64 rng(7);
  const Trajectory gt = random_traj(5, rng, 0.5);
  const Tensor ref = row_of(gt);
  Params ps;
  ps.add("pred", away_from_kink(random_tensor(1, 10, rng, -3, 3), ref, 1.0));
  ps.add("logits", random_tensor(3, 1, rng));
  std::vector<Trajectory> trajs = {random_traj(5, rng), random_traj(5, rng), random_traj(5, rng)};
  LossConfig cfg;
  cfg.target_weight = 0.7;
  cfg.motion_weight = 1.9;
  cfg.score_weight = 0.4;
  auto parts = [&](Tape& t, const Params& p) {
    const Var motion = motion_loss(t.param(p, 0), gt, cfg);
    const Var score = score_loss(log_softmax(t.param(p, 1), 0), trajs, gt, cfg);
    const Var target = scale(pick(log_softmax(t.param(p, 1), 0), 1, 0), -1.0);
    return std::array<Var, 3>{target, motion, score};
  };
  const GradCheckReport r = grad_check(
      [&](Tape& t, const Params& p) {
        const auto v = parts(t, p);
        return total_tnt_loss(v[0], v[1], v[2], cfg);
      },
      ps, tight());
  EXPECT_TRUE(r.passed()) << r.max_rel_error();

  Tape whole;
  const auto v = parts(whole, ps);
  const Gradients g = whole.backward(total_tnt_loss(v[0], v[1], v[2], cfg), ps);
  Gradients sum_of_parts = ps.zeros_like();
  const double w[] = {cfg.target_weight, cfg.motion_weight, cfg.score_weight};
  for (int i = 0; i < 3; ++i) {
    Tape t;
    const Gradients gi = t.backward(parts(t, ps)[std::size_t(i)], ps);
    for (std::size_t p = 0; p < gi.size(); ++p) {
      for (std::size_t e = 0; e < gi[p].size(); ++e) sum_of_parts[p][e] += w[i] * gi[p][e];
    }
  }
  for (std::size_t p = 0; p < g.size(); ++p) {
    for (std::size_t e = 0; e < g[p].size(); ++e) EXPECT_NEAR(g[p][e], sum_of_parts[p][e], 1e-12);
  }
}

}  // namespace
}  // namespace vf
