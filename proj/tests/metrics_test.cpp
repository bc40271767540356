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

#include "json.hpp"
#include "vf/error.hpp"
#include "vf/metrics.hpp"

namespace vf {
namespace {

Trajectory random_traj(std::size_t t, std::mt19937_64& rng, double spread = 10.0) {
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

PredictionSet make_preds(std::vector<Trajectory> trajs) {
  PredictionSet p;
  p.scores.assign(trajs.size(), 1.0 / double(trajs.size()));
  p.trajectories = std::move(trajs);
  return p;
}

PredictionSet random_preds(std::size_t k, std::size_t t, std::mt19937_64& rng) {
  std::vector<Trajectory> trajs;
  for (std::size_t i = 0; i < k; ++i) trajs.push_back(random_traj(t, rng));
  return make_preds(trajs);
}

const Polygon kSquare = {{-100, -100}, {100, -100}, {100, 100}, {-100, 100}};

// Even-odd ray casting, boundary counted as inside.
bool inside_oracle(Vec2 p, const Polygon& poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if (point_segment_distance(p, a, b) == 0.0) return true;
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

TEST(MinFde, Examples) {
  std::mt19937_64 rng(1);
  const Trajectory gt = random_traj(30, rng);
  EXPECT_EQ(min_fde(make_preds({random_traj(30, rng), gt}), gt), 0.0);
  const Trajectory zero_end = {{5, 5}, {0, 0}};
  const PredictionSet p = make_preds({{{0, 0}, {1, 0}}, {{0, 0}, {0, 2}}});
  EXPECT_EQ(min_fde(p, zero_end), 1.0);
  EXPECT_THROW(min_fde(p, Trajectory(3)), Error);
}

TEST(MinAde, Examples) {
  std::mt19937_64 rng(2);
  const Trajectory gt = random_traj(30, rng);
  EXPECT_EQ(min_ade(make_preds({gt}), gt), 0.0);
  EXPECT_NEAR(min_ade(make_preds({shifted(gt, {1, 0})}), gt), 1.0, 1e-12);
  try {
    min_ade(make_preds({gt}), Trajectory(29));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLengthMismatch);
  }
}

TEST(MinAdeFde, MatchExhaustiveScan) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const Trajectory gt = random_traj(12, rng);
    const PredictionSet p = random_preds(6, 12, rng);
    double fde = INFINITY, ade = INFINITY;
    for (const auto& t : p.trajectories) {
      fde = std::min(fde, std::hypot(t.back().x - gt.back().x, t.back().y - gt.back().y));
      double s = 0.0;
      for (std::size_t i = 0; i < 12; ++i) s += std::hypot(t[i].x - gt[i].x, t[i].y - gt[i].y);
      ade = std::min(ade, s / 12.0);
    }
    EXPECT_NEAR(min_fde(p, gt), fde, 1e-12);
    EXPECT_NEAR(min_ade(p, gt), ade, 1e-12);
  }
}

TEST(MinAdeFde, NonIncreasingAsModesAreAppended) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Trajectory gt = random_traj(8, rng);
    PredictionSet p = random_preds(1, 8, rng);
    double fde = min_fde(p, gt), ade = min_ade(p, gt);
    for (int k = 2; k <= 8; ++k) {
      p.trajectories.push_back(random_traj(8, rng));
      p.scores.push_back(0.0);
      EXPECT_LE(min_fde(p, gt), fde);
      EXPECT_LE(min_ade(p, gt), ade);
      fde = min_fde(p, gt);
      ade = min_ade(p, gt);
    }
  }
}

TEST(MissRate, Examples) {
  std::mt19937_64 rng(5);
  std::vector<EvaluationCase> perfect, off;
  for (int i = 0; i < 10; ++i) {
    const Trajectory gt = random_traj(5, rng);
    perfect.push_back({make_preds({gt}), gt, kSquare});
    off.push_back({make_preds({shifted(gt, {3, 0}), shifted(gt, {0, -3})}), gt, kSquare});
  }
  EXPECT_EQ(miss_rate(perfect), 0.0);
  EXPECT_EQ(miss_rate(off), 1.0);
  EXPECT_EQ(miss_rate(off, INFINITY), 0.0);
  EXPECT_EQ(miss_rate(off, 0.0), 1.0);
  EXPECT_EQ(miss_rate(perfect, 0.0), 0.0);
  EXPECT_THROW(miss_rate(std::vector<EvaluationCase>{}), Error);
}

TEST(MissRate, MatchesPerSceneScan) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EvaluationCase> batch;
    std::size_t misses = 0;
    for (int i = 0; i < 40; ++i) {
      const Trajectory gt = random_traj(4, rng, 3.0);
      batch.push_back({random_preds(3, 4, rng), gt, kSquare});
      double best = INFINITY;
      for (const auto& t : batch.back().preds.trajectories) best = std::min(best, distance(t.back(), gt.back()));
      if (best > 2.0) ++misses;
    }
    EXPECT_NEAR(miss_rate(batch), double(misses) / 40.0, 1e-12);
  }
}

TEST(Dac, Examples) {
  std::mt19937_64 rng(7);
  EXPECT_EQ(dac(random_preds(6, 10, rng), kSquare), 1.0);
  PredictionSet p = random_preds(6, 10, rng);
  for (int i = 0; i < 3; ++i) p.trajectories[std::size_t(i)][5] = {150, 0};
  EXPECT_EQ(dac(p, kSquare), 0.5);
}

TEST(Dac, BoundaryCountsAsInside) {
  const PredictionSet p = make_preds({{{100, 0}, {100, 100}, {0, -100}}});
  EXPECT_EQ(dac(p, kSquare), 1.0);
}

TEST(Dac, DegeneratePolygon) {
  std::mt19937_64 rng(8);
  const PredictionSet p = random_preds(2, 3, rng);
  for (const Polygon& bad : {Polygon{{0, 0}, {1, 1}}, Polygon{{0, 0}, {1, 1}, {2, 2}}}) {
    try {
      dac(p, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kDegeneratePolygon);
    }
  }
}

TEST(Dac, MatchesRayCasting) {
  std::mt19937_64 rng(9);
  const Polygon l_shape = {{0, 0}, {10, 0}, {10, 4}, {4, 4}, {4, 10}, {0, 10}};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Trajectory> trajs;
    for (int i = 0; i < 6; ++i) {
      Trajectory t = random_traj(4, rng, 6.0);
      for (Vec2& q : t) q = q + Vec2{5, 5};
      trajs.push_back(t);
    }
    std::size_t inside = 0;
    for (const auto& t : trajs) {
      bool all = true;
      for (Vec2 q : t) all = all && inside_oracle(q, l_shape);
      inside += all;
    }
    EXPECT_NEAR(dac(make_preds(trajs), l_shape), double(inside) / 6.0, 1e-12);
  }
}

std::vector<EvaluationCase> random_batch(std::size_t n, std::mt19937_64& rng) {
  std::vector<EvaluationCase> batch;
  for (std::size_t i = 0; i < n; ++i) {
    const Trajectory gt = random_traj(30, rng, 40.0);
    batch.push_back({random_preds(6, 30, rng), gt, {{-50, -30}, {50, -30}, {50, 30}, {-50, 30}}});
  }
  return batch;
}

TEST(EvaluateBatch, SerialAndParallelAgreeBitwise) {
  std::mt19937_64 rng(10);
  const auto batch = random_batch(300, rng);
  const MetricReport s = serial::evaluate_batch(batch);
  const MetricReport p = parallel::evaluate_batch(batch);
  EXPECT_EQ(s.min_ade, p.min_ade);
  EXPECT_EQ(s.min_fde, p.min_fde);
  EXPECT_EQ(s.miss_rate, p.miss_rate);
  EXPECT_EQ(s.dac, p.dac);
  EXPECT_EQ(s.to_json(), p.to_json());
  EXPECT_EQ(s.n_scenes, 300u);
  EXPECT_EQ(s.k, 6);
}

TEST(EvaluateBatch, MeansOfPerSceneMetrics) {
  std::mt19937_64 rng(11);
  const auto batch = random_batch(50, rng);
  double ade = 0, fde = 0, d = 0;
  for (const auto& c : batch) {
    ade += min_ade(c.preds, c.gt);
    fde += min_fde(c.preds, c.gt);
    d += dac(c.preds, c.area);
  }
  const MetricReport r = serial::evaluate_batch(batch);
  EXPECT_NEAR(r.min_ade, ade / 50, 1e-12);
  EXPECT_NEAR(r.min_fde, fde / 50, 1e-12);
  EXPECT_NEAR(r.dac, d / 50, 1e-12);
  EXPECT_NEAR(r.miss_rate, miss_rate(batch), 1e-12);
}

TEST(EvaluateBatch, ParallelPropagatesErrors) {
  std::mt19937_64 rng(12);
  auto batch = random_batch(20, rng);
  batch[7].area = {{0, 0}, {1, 1}};
  EXPECT_THROW(parallel::evaluate_batch(batch), Error);
}

TEST(MetricReport, JsonKeyOrder) {
  MetricReport r;
  r.k = 6;
  r.min_ade = 0.5;
  r.min_fde = 1.25;
  r.miss_rate = 0.1;
  r.dac = 1.0;
  r.n_scenes = 100;
  const std::string json = r.to_json();
  EXPECT_EQ(json.find("\"k\""), 1u);
  const char* keys[] = {"\"k\"", "\"min_ade\"", "\"min_fde\"", "\"mr\"", "\"dac\"", "\"n\""};
  std::size_t prev = 0;
  for (const char* key : keys) {
    const std::size_t at = json.find(key);
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_GE(at, prev);
    prev = at;
  }
  const auto parsed = nlohmann::json::parse(json);
  EXPECT_EQ(parsed["n"], 100);
  EXPECT_EQ(parsed["min_fde"], 1.25);
}

TEST(Metrics, RigidInvariance) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI), sh(-500, 500);
  for (int trial = 0; trial < 100; ++trial) {
    auto batch = random_batch(5, rng);
    const double a = ang(rng);
    const Vec2 d{sh(rng), sh(rng)};
    auto move = [&](Vec2 p) { return rotate(p, a) + d; };
    auto moved = batch;
    for (auto& c : moved) {
      for (auto& t : c.preds.trajectories) {
        for (Vec2& p : t) p = move(p);
      }
      for (Vec2& p : c.gt) p = move(p);
      for (Vec2& p : c.area) p = move(p);
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      EXPECT_NEAR(min_ade(batch[i].preds, batch[i].gt), min_ade(moved[i].preds, moved[i].gt), 1e-9);
      EXPECT_NEAR(min_fde(batch[i].preds, batch[i].gt), min_fde(moved[i].preds, moved[i].gt), 1e-9);
    }
    const MetricReport r0 = serial::evaluate_batch(batch), r1 = serial::evaluate_batch(moved);
    EXPECT_NEAR(r0.miss_rate, r1.miss_rate, 1e-9);
    EXPECT_NEAR(r0.dac, r1.dac, 1e-9);
  }
}

}  // namespace
}  // namespace vf
