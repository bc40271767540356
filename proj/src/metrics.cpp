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

#include "vf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "json.hpp"
#include "vf/error.hpp"

namespace vf {

namespace {

void check_lengths(const PredictionSet& preds, const Trajectory& gt) {
  if (preds.k() == 0) throw Error(ErrorKind::kLengthMismatch, "prediction set is empty");
  for (const auto& traj : preds.trajectories) {
    if (traj.size() != gt.size() || gt.empty()) {
      throw Error(ErrorKind::kLengthMismatch, "trajectory has " + std::to_string(traj.size()) +
                                                  " points, ground truth " +
                                                  std::to_string(gt.size()));
    }
  }
}

struct SceneMetrics {
  double ade = 0.0;
  double fde = 0.0;
  double dac = 0.0;
};

SceneMetrics scene_metrics(const EvaluationCase& c) {
  return {min_ade(c.preds, c.gt), min_fde(c.preds, c.gt), dac(c.preds, c.area)};
}

MetricReport reduce(std::span<const EvaluationCase> batch, const std::vector<SceneMetrics>& per,
                    double threshold) {
  MetricReport r;
  r.k = batch.empty() ? 0 : static_cast<int>(batch.front().preds.k());
  r.n_scenes = batch.size();
  if (batch.empty()) return r;
  std::size_t misses = 0;
  for (const SceneMetrics& m : per) {
    r.min_ade += m.ade;
    r.min_fde += m.fde;
    r.dac += m.dac;
    if (m.fde > threshold) ++misses;
  }
  const auto n = static_cast<double>(batch.size());
  r.min_ade /= n;
  r.min_fde /= n;
  r.dac /= n;
  r.miss_rate = static_cast<double>(misses) / n;
  return r;
}

}  // namespace

double min_fde(const PredictionSet& preds, const Trajectory& gt) {
  check_lengths(preds, gt);
  double best = INFINITY;
  for (const auto& traj : preds.trajectories) best = std::min(best, distance(traj.back(), gt.back()));
  return best;
}

double min_ade(const PredictionSet& preds, const Trajectory& gt) {
  check_lengths(preds, gt);
  double best = INFINITY;
  for (const auto& traj : preds.trajectories) {
    double total = 0.0;
    for (std::size_t s = 0; s < gt.size(); ++s) total += distance(traj[s], gt[s]);
    best = std::min(best, total / static_cast<double>(gt.size()));
  }
  return best;
}

double dac(const PredictionSet& preds, const Polygon& area) {
  if (area.size() < 3 || signed_area(area) == 0.0) {
    throw Error(ErrorKind::kDegeneratePolygon, "drivable area needs three vertices and area");
  }
  if (preds.k() == 0) throw Error(ErrorKind::kLengthMismatch, "prediction set is empty");
  std::size_t inside = 0;
  for (const auto& traj : preds.trajectories) {
    const bool all_in = std::all_of(traj.begin(), traj.end(),
                                    [&](Vec2 p) { return point_in_polygon(p, area); });
    if (all_in) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(preds.k());
}

double miss_rate(std::span<const EvaluationCase> batch, double threshold) {
  if (batch.empty()) throw Error(ErrorKind::kLengthMismatch, "miss rate of an empty batch");
  std::size_t misses = 0;
  for (const auto& c : batch) {
    if (min_fde(c.preds, c.gt) > threshold) ++misses;
  }
  return static_cast<double>(misses) / static_cast<double>(batch.size());
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["min_ade"] = min_ade;
  j["min_fde"] = min_fde;
  j["mr"] = miss_rate;
  j["dac"] = dac;
  j["n"] = n_scenes;
  return j.dump();
}

namespace serial {

MetricReport evaluate_batch(std::span<const EvaluationCase> batch, double threshold) {
  std::vector<SceneMetrics> per;
  per.reserve(batch.size());
  for (const auto& c : batch) per.push_back(scene_metrics(c));
  return reduce(batch, per, threshold);
}

}  // namespace serial

namespace parallel {

MetricReport evaluate_batch(std::span<const EvaluationCase> batch, double threshold) {
  std::vector<SceneMetrics> per(batch.size());
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
  // Exceptions may not cross the parallel region; the first is rethrown.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      per[static_cast<std::size_t>(i)] = scene_metrics(batch[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(vf_metrics_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return reduce(batch, per, threshold);
}

}  // namespace parallel

}  // namespace vf
