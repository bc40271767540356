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

#include "vf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "vf/error.hpp"
#include "vf/random.hpp"

namespace vf {
namespace {

// Arc-length parameterized walk along a polyline; extrapolates linearly
// past both ends.
class ArcPath {
 public:
  explicit ArcPath(Polyline points) : points_(std::move(points)) {
    cumulative_.push_back(0.0);
    for (std::size_t i = 1; i < points_.size(); ++i) {
      cumulative_.push_back(cumulative_.back() + distance(points_[i - 1], points_[i]));
    }
  }

  double length() const { return cumulative_.back(); }

  Vec2 position(double s) const {
    const std::size_t i = segment(s);
    const double len = cumulative_[i + 1] - cumulative_[i];
    const double f = (s - cumulative_[i]) / len;
    return points_[i] + (points_[i + 1] - points_[i]) * f;
  }

  Vec2 tangent(double s) const {
    const std::size_t i = segment(s);
    const Vec2 d = points_[i + 1] - points_[i];
    return d * (1.0 / norm(d));
  }

 private:
  std::size_t segment(double s) const {
    if (s <= 0.0) return 0;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    if (it == cumulative_.end()) return points_.size() - 2;
    return static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  }

  Polyline points_;
  std::vector<double> cumulative_;
};

Polyline straight_points(Vec2 from, Vec2 direction, double length, double spacing) {
  Polyline pts;
  const auto n = static_cast<int>(std::ceil(length / spacing));
  for (int i = 0; i <= n; ++i) {
    pts.push_back(from + direction * (std::min(length, i * spacing)));
  }
  return pts;
}

Polyline arc_points(double radius, double length, double spacing) {
  Polyline pts;
  const auto n = static_cast<int>(std::ceil(length / spacing));
  for (int i = 0; i <= n; ++i) {
    const double phi = std::min(length, i * spacing) / radius;
    pts.push_back({radius * std::sin(phi), radius - radius * std::cos(phi)});
  }
  return pts;
}

// Left normals averaged over the adjacent segments.
std::vector<Vec2> vertex_normals(const Polyline& pts) {
  std::vector<Vec2> normals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec2 d{0.0, 0.0};
    if (i > 0) d = d + (pts[i] - pts[i - 1]) * (1.0 / distance(pts[i], pts[i - 1]));
    if (i + 1 < pts.size()) d = d + (pts[i + 1] - pts[i]) * (1.0 / distance(pts[i + 1], pts[i]));
    d = d * (1.0 / norm(d));
    normals[i] = {-d.y, d.x};
  }
  return normals;
}

Polygon corridor(const Polyline& pts, double half_width) {
  const auto normals = vertex_normals(pts);
  Polygon ring;
  for (std::size_t i = 0; i < pts.size(); ++i) ring.push_back(pts[i] - normals[i] * half_width);
  for (std::size_t i = pts.size(); i-- > 0;) ring.push_back(pts[i] + normals[i] * half_width);
  return ring;
}

Centerline make_centerline(std::string id, Polyline pts, bool turn) {
  Centerline c;
  c.id = std::move(id);
  c.turn.assign(pts.size(), turn);
  c.intersection.assign(pts.size(), false);
  c.points = std::move(pts);
  return c;
}

void mark_intersection(Centerline& c, Vec2 at, double radius) {
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (distance(c.points[i], at) <= radius) c.intersection[i] = true;
  }
}

struct Layout {
  std::vector<Centerline> centerlines;
  Polygon area;
  ArcPath target_path{Polyline{{0, 0}, {1, 0}}};
  ArcPath neighbor_path{Polyline{{0, 0}, {1, 0}}};
};

Track make_track(std::string id, AgentType type, const ArcPath& path, double s0, double speed,
                 int first_frame, int frames, double rate, double noise,
                 std::mt19937_64& rng) {
  Track track;
  track.agent_id = std::move(id);
  std::normal_distribution<double> jitter(0.0, noise > 0.0 ? noise : 1.0);
  for (int t = first_frame; t < frames; ++t) {
    const double s = s0 + speed * t / rate;
    Vec2 p = path.position(s);
    const Vec2 dir = path.tangent(s);
    if (noise > 0.0) {
      p.x += jitter(rng);
      p.y += jitter(rng);
    }
    AgentState st;
    st.t = t;
    st.x = p.x;
    st.y = p.y;
    st.vx = speed * dir.x;
    st.vy = speed * dir.y;
    st.heading = wrap_angle(std::atan2(dir.y, dir.x));
    st.agent_type = type;
    track.states.push_back(st);
  }
  return track;
}

}  // namespace

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::kStraight: return "straight";
    case Topology::kCurve: return "curve";
    case Topology::kFork: return "fork";
  }
  return "unknown";
}

Topology topology_from_string(std::string_view name) {
  if (name == "straight") return Topology::kStraight;
  if (name == "curve") return Topology::kCurve;
  if (name == "fork") return Topology::kFork;
  throw Error(ErrorKind::kConfigInvalid, "topology: unknown value '" + std::string(name) + "'");
}

void validate(const SynthConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kConfigInvalid, what); };
  validate(cfg.episode);
  if (!(cfg.radius > cfg.half_width)) fail("radius must exceed half_width");
  if (!(cfg.noise_std >= 0.0)) fail("noise_std must be >= 0");
  if (!(cfg.speed_min > 0.0) || !(cfg.speed_max >= cfg.speed_min)) {
    fail("speed range must satisfy 0 < speed_min <= speed_max");
  }
  if (cfg.n_neighbors < 0) fail("n_neighbors must be >= 0");
  if (cfg.n_train < 1 || cfg.n_val < 1) fail("n_train and n_val must be >= 1");
  if (!(cfg.rate > 0.0)) fail("rate must be > 0");
  if (!(cfg.half_width > 0.0)) fail("half_width must be > 0");
  if (!(cfg.point_spacing > 0.0)) fail("point_spacing must be > 0");
  if (!(std::abs(cfg.fork_angle_deg) > 0.0 && std::abs(cfg.fork_angle_deg) < 90.0)) {
    fail("fork_angle_deg must be in (-90, 0) or (0, 90)");
  }
}

Scene generate_scene(const SynthConfig& cfg, std::uint64_t seed, std::string id) {
  validate(cfg);
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const int frames = cfg.episode.t_obs + cfg.episode.t_pred;
  const double horizon = (frames - 1) / cfg.rate;
  const double speed = cfg.speed_min == cfg.speed_max ? cfg.speed_min
                                                      : uniform(cfg.speed_min, cfg.speed_max);
  const double s0 = uniform(5.0, 15.0);
  const double length = std::ceil(15.0 + cfg.speed_max * horizon + 20.0);
  const double spacing = cfg.point_spacing;

  Scene scene;
  scene.id = std::move(id);
  scene.rate = cfg.rate;
  Polyline target_path;
  Polyline neighbor_path;
  switch (cfg.topology) {
    case Topology::kStraight: {
      Polyline pts = straight_points({0, 0}, {1, 0}, length, spacing);
      scene.drivable_area = corridor(pts, cfg.half_width);
      target_path = neighbor_path = pts;
      scene.centerlines.push_back(make_centerline("lane_0", std::move(pts), false));
      break;
    }
    case Topology::kCurve: {
      const double arc = std::min(length, 1.5 * std::numbers::pi * cfg.radius);
      Polyline pts = arc_points(cfg.radius, arc, spacing);
      scene.drivable_area = corridor(pts, cfg.half_width);
      target_path = neighbor_path = pts;
      scene.centerlines.push_back(make_centerline("lane_0", std::move(pts), true));
      break;
    }
    case Topology::kFork: {
      // The fork sits a little ahead of the last observed position, so the
      // observed history does not reveal the branch.
      const double last_obs = s0 + speed * (cfg.episode.t_obs - 1) / cfg.rate;
      const double fork_s = last_obs + uniform(2.0, 8.0);
      const double sign = cfg.fork_angle_deg > 0.0 ? 1.0 : -1.0;
      const double theta = std::abs(cfg.fork_angle_deg) * std::numbers::pi / 180.0;
      const Vec2 fork{fork_s, 0.0};
      const double total = std::max(length, fork_s + 30.0);
      Polyline stem = straight_points({0, 0}, {1, 0}, fork_s, spacing);
      Polyline main = stem;
      Polyline rest = straight_points(fork, {1, 0}, total - fork_s, spacing);
      main.insert(main.end(), rest.begin() + 1, rest.end());
      const Vec2 u{std::cos(theta), sign * std::sin(theta)};
      Polyline branch = straight_points(fork, u, total - fork_s, spacing);

      // Corridor for a left branch: outer edge of the main lane, around the
      // branch end, back along the branch's inner edge to where it meets the
      // stem's edge. A right branch is its mirror image.
      const double w = cfg.half_width;
      const Vec2 u_left{std::cos(theta), std::sin(theta)};
      const Vec2 n_left{-u_left.y, u_left.x};
      const Vec2 end_left = fork + u_left * (total - fork_s);
      const double t = w * (1.0 - std::cos(theta)) / std::sin(theta);
      Polygon ring{{0.0, -w},
                   {total, -w},
                   {total, w},
                   end_left - n_left * w,
                   end_left + n_left * w,
                   {fork_s - w * std::sin(theta) + t * std::cos(theta), w},
                   {0.0, w}};
      if (sign < 0.0) {
        Polygon mirrored;
        for (auto it = ring.rbegin(); it != ring.rend(); ++it) mirrored.push_back({it->x, -it->y});
        ring = std::move(mirrored);
      }
      scene.drivable_area = std::move(ring);

      const bool take_branch = std::bernoulli_distribution(0.5)(rng);
      target_path = stem;
      if (take_branch) {
        target_path.insert(target_path.end(), branch.begin() + 1, branch.end());
      } else {
        target_path = main;
      }
      neighbor_path = main;
      Centerline main_lane = make_centerline("lane_0", std::move(main), false);
      Centerline branch_lane = make_centerline("lane_1", std::move(branch), true);
      mark_intersection(main_lane, fork, 5.0);
      mark_intersection(branch_lane, fork, 5.0);
      scene.centerlines.push_back(std::move(main_lane));
      scene.centerlines.push_back(std::move(branch_lane));
      break;
    }
  }

  const ArcPath target_arc(target_path);
  const ArcPath neighbor_arc(neighbor_path);
  scene.target = make_track("target", AgentType::kTargetVehicle, target_arc, s0, speed, 0, frames,
                            cfg.rate, cfg.noise_std, rng);
  for (int i = 0; i < cfg.n_neighbors; ++i) {
    const double gap = uniform(8.0, 25.0);
    const double start = std::bernoulli_distribution(0.5)(rng) ? s0 + gap : s0 - gap;
    const double v = cfg.speed_min == cfg.speed_max ? cfg.speed_min
                                                    : uniform(cfg.speed_min, cfg.speed_max);
    const int first = std::uniform_int_distribution<int>(0, 4)(rng);
    scene.neighbors.push_back(make_track("agent_" + std::to_string(i + 1), AgentType::kVehicle,
                                         neighbor_arc, start, v, first, frames, cfg.rate,
                                         cfg.noise_std, rng));
  }

  if (cfg.random_pose) {
    const double angle = uniform(-std::numbers::pi, std::numbers::pi);
    const Vec2 shift{uniform(-200.0, 200.0), uniform(-200.0, 200.0)};
    auto place = [&](Vec2 p) { return rotate(p, angle) + shift; };
    auto place_track = [&](Track& track) {
      for (AgentState& st : track.states) {
        const Vec2 p = place({st.x, st.y});
        const Vec2 v = rotate({st.vx, st.vy}, angle);
        st.x = p.x;
        st.y = p.y;
        st.vx = v.x;
        st.vy = v.y;
        st.heading = wrap_angle(st.heading + angle);
      }
    };
    place_track(scene.target);
    for (Track& n : scene.neighbors) place_track(n);
    for (Centerline& c : scene.centerlines) {
      for (Vec2& p : c.points) p = place(p);
    }
    for (Vec2& p : scene.drivable_area) p = place(p);
  }
  return scene;
}

std::uint64_t scene_seed(std::uint64_t master, int split, int index) {
  return mix_seed({master, static_cast<std::uint64_t>(split), static_cast<std::uint64_t>(index)});
}

SynthDataset generate_dataset(const SynthConfig& cfg) {
  validate(cfg);
  SynthDataset out;
  out.train.resize(static_cast<std::size_t>(cfg.n_train));
  out.val.resize(static_cast<std::size_t>(cfg.n_val));
  auto name = [](const char* prefix, int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%04d", prefix, i);
    return std::string(buf);
  };
#pragma omp parallel for schedule(static)
  for (int i = 0; i < cfg.n_train + cfg.n_val; ++i) {
    if (i < cfg.n_train) {
      out.train[static_cast<std::size_t>(i)] =
          generate_scene(cfg, scene_seed(cfg.seed, 0, i), name("train", i));
    } else {
      const int j = i - cfg.n_train;
      out.val[static_cast<std::size_t>(j)] =
          generate_scene(cfg, scene_seed(cfg.seed, 1, j), name("val", j));
    }
  }
  return out;
}

}  // namespace vf
