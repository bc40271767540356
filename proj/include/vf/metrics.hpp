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

#ifndef VF_METRICS_HPP_
#define VF_METRICS_HPP_

#include <span>
#include <string>

#include "vf/scene.hpp"

namespace vf {

// A scene counts as a miss when its best endpoint error exceeds this.
inline constexpr double kDefaultMissThreshold = 2.0;  // meters

// Endpoint L2 error of the best of the K modes. Padded modes take part.
double min_fde(const PredictionSet& preds, const Trajectory& gt);

// Mean pointwise L2 error of the best of the K modes.
double min_ade(const PredictionSet& preds, const Trajectory& gt);

// Fraction of the K trajectories with every point inside or on the
// drivable polygon. Throws DegeneratePolygon for fewer than three vertices
// or zero area.
double dac(const PredictionSet& preds, const Polygon& area);

struct EvaluationCase {
  PredictionSet preds;
  Trajectory gt;
  Polygon area;
};

double miss_rate(std::span<const EvaluationCase> batch, double threshold = kDefaultMissThreshold);

struct MetricReport {
  int k = 0;
  double min_ade = 0.0;  // mean over scenes
  double min_fde = 0.0;  // mean over scenes
  double miss_rate = 0.0;
  double dac = 0.0;      // mean over scenes
  std::size_t n_scenes = 0;

  std::string to_json() const;
};

// Per-scene metrics reduced in scene order. The parallel variant computes
// scenes concurrently and reduces in the same order, so both agree bit for
// bit.
namespace serial {
MetricReport evaluate_batch(std::span<const EvaluationCase> batch,
                            double threshold = kDefaultMissThreshold);
}
namespace parallel {
MetricReport evaluate_batch(std::span<const EvaluationCase> batch,
                            double threshold = kDefaultMissThreshold);
}

}  // namespace vf

#endif  // VF_METRICS_HPP_
