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

#include "vf/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace vf {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Geometry, WrapAngleRange) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-15);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(a - w, 2 * kPi), 0.0, 1e-9);
  }
}

TEST(Geometry, RotateQuarterTurn) {
  const Vec2 p = rotate({1.0, 0.0}, kPi / 2);
  EXPECT_NEAR(p.x, 0.0, 1e-15);
  EXPECT_NEAR(p.y, 1.0, 1e-15);
}

TEST(Geometry, PointSegmentDistance) {
  EXPECT_DOUBLE_EQ(point_segment_distance({0, 1}, {-1, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({3, 0}, {-1, 0}, {1, 0}), 2.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({2, 2}, {0, 0}, {0, 0}), std::sqrt(8.0));
  const Polyline line{{0, 0}, {1, 0}, {1, 1}};
  EXPECT_DOUBLE_EQ(point_polyline_distance({2, 0.5}, line), 1.0);
}

TEST(Geometry, SegmentsIntersect) {
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  // Touching at an endpoint counts.
  EXPECT_TRUE(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 3}));
  // Collinear overlap and collinear gap.
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
}

TEST(Geometry, FarApartNearlyCollinearSegmentsDoNotIntersect) {
  // Rotated collinear points pick up rounding that can flip orientation
  // signs; distant pieces of the same line must still be disjoint.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = angle(rng);
    auto at = [&](double s) { return rotate({s, -3.0}, a) + Vec2{-106.75, 177.34}; };
    for (int i = 0; i < 20; ++i) {
      EXPECT_FALSE(segments_intersect(at(2.0 * i), at(2.0 * i + 2), at(2.0 * i + 6),
                                      at(2.0 * i + 8)));
    }
  }
}

TEST(Geometry, SignedAreaOrientation) {
  const Polygon ccw{{0, 0}, {2, 0}, {2, 1}, {0, 1}};
  EXPECT_DOUBLE_EQ(signed_area(ccw), 2.0);
  const Polygon cw{{0, 0}, {0, 1}, {2, 1}, {2, 0}};
  EXPECT_DOUBLE_EQ(signed_area(cw), -2.0);
}

TEST(Geometry, BowtieIsNotSimple) {
  const Polygon bowtie{{0, 0}, {2, 2}, {2, 0}, {0, 2}};
  EXPECT_FALSE(is_simple_polygon(bowtie));
  const Polygon square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_TRUE(is_simple_polygon(square));
}

TEST(Geometry, FoldedAndDegenerateRingsAreNotSimple) {
  EXPECT_FALSE(is_simple_polygon(Polygon{{0, 0}, {1, 0}}));
  EXPECT_FALSE(is_simple_polygon(Polygon{{0, 0}, {2, 0}, {1, 0}}));
  EXPECT_FALSE(is_simple_polygon(Polygon{{0, 0}, {1, 0}, {1, 0}, {0, 1}}));
  // A vertex touching a non-adjacent edge.
  EXPECT_FALSE(is_simple_polygon(Polygon{{0, 0}, {4, 0}, {4, 4}, {2, 0}, {0, 4}}));
}

TEST(Geometry, PointInPolygonIsBoundaryInclusive) {
  const Polygon square{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  EXPECT_TRUE(point_in_polygon({1, 1}, square));
  EXPECT_TRUE(point_in_polygon({0, 1}, square));
  EXPECT_TRUE(point_in_polygon({2, 2}, square));
  EXPECT_FALSE(point_in_polygon({2.0000001, 1}, square));
  EXPECT_FALSE(point_in_polygon({-1, -1}, square));
  const Polygon ell{{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}};
  EXPECT_TRUE(point_in_polygon({0.5, 2.5}, ell));
  EXPECT_FALSE(point_in_polygon({2, 2}, ell));
}

TEST(Geometry, PolylineLength) {
  EXPECT_DOUBLE_EQ(polyline_length(Polyline{{0, 0}, {3, 4}, {3, 5}}), 6.0);
}

}  // namespace
}  // namespace vf
