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

#include "vf/preprocess.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "test_util.hpp"
#include "vf/error.hpp"
#include "vf/synth.hpp"

namespace vf {
namespace {

using testing::line_scene;
using testing::state;

constexpr double kPi = std::numbers::pi;

Scene apply_rigid(const Scene& s, double angle, Vec2 shift) {
  Scene out = s;
  auto move = [&](Vec2 p) { return rotate(p, angle) + shift; };
  auto move_track = [&](Track& t) {
    for (auto& st : t.states) {
      const Vec2 p = move(st.position());
      const Vec2 v = rotate({st.vx, st.vy}, angle);
      st.x = p.x;
      st.y = p.y;
      st.vx = v.x;
      st.vy = v.y;
      st.heading = wrap_angle(st.heading + angle);
    }
  };
  move_track(out.target);
  for (auto& n : out.neighbors) move_track(n);
  for (auto& c : out.centerlines) {
    for (auto& p : c.points) p = move(p);
  }
  for (auto& p : out.drivable_area) p = move(p);
  return out;
}

TEST(Centralize, TranslateThenRotate) {
  Scene s = line_scene(20);
  s.target.states[19] = state(19, 5.0, 3.0, kPi / 2, AgentType::kTargetVehicle);
  s.centerlines[0].points = {{5.0, 4.0}, {5.0, 10.0}};
  s.centerlines[0].turn.assign(2, false);
  s.centerlines[0].intersection.assign(2, false);
  const NormalizedScene n = centralize_and_align(s, EpisodeConfig{20, 30, 6});
  EXPECT_NEAR(n.scene.centerlines[0].points[0].x, 1.0, 1e-12);
  EXPECT_NEAR(n.scene.centerlines[0].points[0].y, 0.0, 1e-12);
  EXPECT_EQ(n.transform.origin, (Vec2{5.0, 3.0}));
  EXPECT_DOUBLE_EQ(n.transform.rotation, kPi / 2);
}

TEST(Centralize, AnchorIsExactlyOriginWithZeroHeading) {
  SynthConfig cfg;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Scene s = generate_scene(cfg, seed, "s");
    const NormalizedScene n = centralize_and_align(s, cfg.episode);
    const AgentState& a = n.scene.target.states[static_cast<std::size_t>(cfg.episode.t_obs - 1)];
    EXPECT_EQ(a.x, 0.0);
    EXPECT_EQ(a.y, 0.0);
    EXPECT_LT(std::abs(a.heading), 1e-9);
  }
}

TEST(Centralize, AlreadyNormalizedGivesIdentity) {
  SynthConfig cfg;
  const Scene s = generate_scene(cfg, 4, "s");
  const NormalizedScene once = centralize_and_align(s, cfg.episode);
  const NormalizedScene twice = centralize_and_align(once.scene, cfg.episode);
  EXPECT_LT(norm(twice.transform.origin), 1e-9);
  EXPECT_LT(std::abs(twice.transform.rotation), 1e-9);
  for (std::size_t i = 0; i < s.target.states.size(); ++i) {
    EXPECT_LT(distance(twice.scene.target.states[i].position(),
                       once.scene.target.states[i].position()),
              1e-9);
  }
}

TEST(Centralize, InverseRoundTrip) {
  SynthConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scene s = generate_scene(cfg, seed, "s");
    const NormalizedScene n = centralize_and_align(s, cfg.episode);
    for (std::size_t i = 0; i < s.target.states.size(); ++i) {
      const Vec2 back = n.transform.to_world(n.scene.target.states[i].position());
      EXPECT_LT(distance(back, s.target.states[i].position()), 1e-9);
    }
    for (std::size_t i = 0; i < s.drivable_area.size(); ++i) {
      EXPECT_LT(distance(n.transform.to_world(n.scene.drivable_area[i]), s.drivable_area[i]),
                1e-9);
    }
  }
}

TEST(Centralize, InsufficientHistory) {
  EXPECT_THROW(centralize_and_align(line_scene(5), EpisodeConfig{}), Error);
}

TEST(SceneRotation, ZeroAngleIsIdentity) {
  const Scene s = line_scene();
  EXPECT_EQ(random_scene_rotation(s, 0.0), s);
}

TEST(SceneRotation, QuarterTurn) {
  Scene s = line_scene(20);
  s.target.states[1] = state(1, 1.0, 0.0, 0.0, AgentType::kTargetVehicle);
  const Scene r = random_scene_rotation(s, kPi / 2);
  EXPECT_NEAR(r.target.states[1].x, 0.0, 1e-15);
  EXPECT_NEAR(r.target.states[1].y, 1.0, 1e-15);
  EXPECT_NEAR(r.target.states[1].heading, kPi / 2, 1e-15);
  EXPECT_NEAR(r.target.states[1].vy, 1.0, 1e-15);
}

TEST(SceneRotation, PreservesPairwiseDistancesAndWrapsHeadings) {
  SynthConfig cfg;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Scene s =
        centralize_and_align(generate_scene(cfg, trial, "s"), cfg.episode).scene;
    const Scene r = random_scene_rotation(s, angle(rng));
    std::vector<Vec2> a, b;
    for (std::size_t i = 0; i < s.target.states.size(); ++i) {
      a.push_back(s.target.states[i].position());
      b.push_back(r.target.states[i].position());
      EXPECT_GT(r.target.states[i].heading, -kPi);
      EXPECT_LE(r.target.states[i].heading, kPi);
    }
    for (const auto& n : s.neighbors) {
      for (const auto& st : n.states) a.push_back(st.position());
    }
    for (const auto& n : r.neighbors) {
      for (const auto& st : n.states) b.push_back(st.position());
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        EXPECT_NEAR(distance(a[i], a[j]), distance(b[i], b[j]), 1e-9);
      }
    }
  }
}

Scene crowd(int neighbors) {
  Scene s = line_scene(20);
  s.neighbors.clear();
  for (int i = 0; i < neighbors; ++i) {
    Track t;
    t.agent_id = "n" + std::to_string(i);
    t.states.push_back(state(0, i, 1.0));
    s.neighbors.push_back(t);
  }
  return s;
}

TEST(AgentDropout, DefaultProbability) { EXPECT_EQ(kDefaultDropoutProbability, 0.1); }

TEST(AgentDropout, ExtremesAndDeterminism) {
  const Scene s = crowd(50);
  EXPECT_EQ(agent_dropout(s, 0.0, 1), s);
  const Scene none = agent_dropout(s, 1.0, 1);
  EXPECT_TRUE(none.neighbors.empty());
  EXPECT_EQ(none.target, s.target);
  EXPECT_EQ(agent_dropout(s, 0.5, 9), agent_dropout(s, 0.5, 9));
  EXPECT_THROW(agent_dropout(s, 1.5, 1), Error);
  EXPECT_THROW(agent_dropout(s, -0.1, 1), Error);
}

TEST(AgentDropout, RemovalFractionMatchesProbability) {
  const Scene s = crowd(100);
  std::size_t kept = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    kept += agent_dropout(s, kDefaultDropoutProbability, seed).neighbors.size();
  }
  const double removed = 1.0 - static_cast<double>(kept) / 10000.0;
  EXPECT_GE(removed, 0.09);
  EXPECT_LE(removed, 0.11);
}

TEST(Vectorize, CountsAndAttributes) {
  Scene s = line_scene(20, 7);
  s.centerlines[0].points.resize(11);
  s.centerlines[0].turn.assign(11, false);
  s.centerlines[0].intersection.assign(11, false);
  s.centerlines[0].turn[2] = true;
  const VectorizedScene vs = vectorize_scene(s, EpisodeConfig{20, 30, 6});
  ASSERT_EQ(vs.polyline_count, 3);
  EXPECT_EQ(vs.target_polyline_id, 0);
  ASSERT_EQ(vs.vectors.size(), 19u + 19u + 10u);
  for (int i = 0; i < 19; ++i) {
    const PolylineVector& v = vs.vectors[static_cast<std::size_t>(i)];
    EXPECT_EQ(v.polyline_id, 0);
    EXPECT_TRUE(v.valid());
    EXPECT_EQ(v.start, (Vec2{double(i), 0.0}));
    EXPECT_EQ(v.end, (Vec2{double(i + 1), 0.0}));
    EXPECT_DOUBLE_EQ(v.attributes[0], (i + 1) / 19.0);
    EXPECT_EQ(v.attributes[1], 1.0);  // target_vehicle one-hot
    EXPECT_EQ(v.attributes[5], 0.0);
  }
  // Neighbor appearing at the 8th frame: the first 7 vectors are masked.
  int masked = 0;
  for (int i = 19; i < 38; ++i) {
    const PolylineVector& v = vs.vectors[static_cast<std::size_t>(i)];
    EXPECT_EQ(v.polyline_id, 1);
    EXPECT_EQ(v.attributes[2], 1.0);  // vehicle one-hot
    if (!v.valid()) {
      ++masked;
      EXPECT_LT(i - 19, 7);
      EXPECT_EQ(v.start, (Vec2{0.0, 0.0}));
    }
  }
  EXPECT_EQ(masked, 7);
  for (int i = 38; i < 48; ++i) {
    const PolylineVector& v = vs.vectors[static_cast<std::size_t>(i)];
    EXPECT_EQ(v.polyline_id, 2);
    EXPECT_EQ(v.attributes[5], 1.0);
    EXPECT_EQ(v.attributes[6], 1.0);
    EXPECT_EQ(v.attributes[0], 0.0);
    EXPECT_EQ(v.attributes[2], i == 40 ? 1.0 : 0.0);
  }
}

TEST(Vectorize, SkipsTracksWithoutAValidVector) {
  Scene s = line_scene(20, 19);  // only the last observed frame
  const VectorizedScene vs = vectorize_scene(s, EpisodeConfig{20, 30, 6});
  EXPECT_EQ(vs.polyline_count, 2);
  for (const auto& v : vs.vectors) EXPECT_NE(v.polyline_id, 2);
}

TEST(Vectorize, RigidMotionEquivariance) {
  SynthConfig cfg;
  cfg.random_pose = false;
  cfg.noise_std = 0.2;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> shift(-500.0, 500.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Scene s = generate_scene(cfg, seed, "s");
    const Scene moved = apply_rigid(s, angle(rng), {shift(rng), shift(rng)});
    const VectorizedScene a = vectorize_scene(centralize_and_align(s, cfg.episode).scene,
                                              cfg.episode);
    const VectorizedScene b = vectorize_scene(centralize_and_align(moved, cfg.episode).scene,
                                              cfg.episode);
    ASSERT_EQ(a.vectors.size(), b.vectors.size());
    for (std::size_t i = 0; i < a.vectors.size(); ++i) {
      EXPECT_LT(distance(a.vectors[i].start, b.vectors[i].start), 1e-9);
      EXPECT_LT(distance(a.vectors[i].end, b.vectors[i].end), 1e-9);
      EXPECT_EQ(a.vectors[i].attributes, b.vectors[i].attributes);
      EXPECT_EQ(a.vectors[i].polyline_id, b.vectors[i].polyline_id);
    }
  }
}

TEST(WorldFrameRestore, Examples) {
  PredictionSet p;
  p.trajectories = {{{1.0, 1.0}, {2.0, -1.0}}};
  p.scores = {1.0};
  const PredictionSet same = world_frame_restore(p, FrameTransform{});
  EXPECT_EQ(same.trajectories, p.trajectories);
  EXPECT_EQ(same.frame, Frame::kWorld);
  const PredictionSet shifted = world_frame_restore(p, FrameTransform{{2.0, 0.0}, 0.0});
  EXPECT_EQ(shifted.trajectories[0][0], (Vec2{3.0, 1.0}));
  EXPECT_EQ(shifted.scores, p.scores);
  EXPECT_THROW(world_frame_restore(shifted, FrameTransform{}), Error);
}

TEST(WorldFrameRestore, InvertsNormalization) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const FrameTransform t{{u(rng), u(rng)}, u(rng)};
    PredictionSet world;
    world.trajectories = {{{u(rng), u(rng)}, {u(rng), u(rng)}}};
    world.scores = {1.0};
    PredictionSet norm = world;
    for (auto& p : norm.trajectories[0]) p = t.to_normalized(p);
    norm.frame = Frame::kNormalized;
    const PredictionSet back = world_frame_restore(norm, t);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_LT(distance(back.trajectories[0][i], world.trajectories[0][i]), 1e-9);
    }
  }
}

}  // namespace
}  // namespace vf
