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

#ifndef VF_GEOMETRY_HPP_
#define VF_GEOMETRY_HPP_

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace vf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

using Polyline = std::vector<Vec2>;
using Polygon = std::vector<Vec2>;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline Vec2 rotate(Vec2 p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double point_polyline_distance(Vec2 p, std::span<const Vec2> line);

// Closed-segment intersection, collinear overlaps and touching endpoints
// included.
bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2);

bool point_on_segment(Vec2 p, Vec2 a, Vec2 b);

// Shoelace signed area; positive for counter-clockwise rings.
double signed_area(std::span<const Vec2> ring);

// True when no two non-adjacent edges of the closed ring touch and no
// adjacent pair overlaps beyond their shared vertex.
bool is_simple_polygon(std::span<const Vec2> ring);

// Inclusive containment: boundary points count as inside.
bool point_in_polygon(Vec2 p, std::span<const Vec2> ring);

double polyline_length(std::span<const Vec2> line);

}  // namespace vf

#endif  // VF_GEOMETRY_HPP_
