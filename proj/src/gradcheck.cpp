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

#include "vf/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "vf/error.hpp"

namespace vf {

bool GradCheckReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
}

double GradCheckReport::max_rel_error() const {
  double worst = 0.0;
  for (const auto& e : entries) worst = std::max(worst, e.max_rel_error);
  return worst;
}

GradCheckReport grad_check(const ScalarFn& f, const Params& params,
                           const GradCheckOptions& options) {
  if (!(options.step > 0.0)) throw Error(ErrorKind::kConfigInvalid, "grad_check step must be > 0");

  Gradients analytic;
  {
    Tape tape;
    analytic = tape.backward(f(tape, params), params);
  }

  auto evaluate = [&](const Params& p) {
    Tape tape;
    return f(tape, p).value().item();
  };

  GradCheckReport report;
  report.tolerance = options.tolerance;
  Params probe = params;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    GradCheckEntry entry;
    entry.name = params.name(pi);
    const std::size_t n = params[pi].size();
    std::size_t stride = 1;
    if (options.max_entries_per_param > 0 && n > options.max_entries_per_param) {
      stride = (n + options.max_entries_per_param - 1) / options.max_entries_per_param;
    }
    for (std::size_t i = 0; i < n; i += stride) {
      const double original = probe[pi][i];
      probe[pi][i] = original + options.step;
      const double up = evaluate(probe);
      probe[pi][i] = original - options.step;
      const double down = evaluate(probe);
      probe[pi][i] = original;

      if (options.exclude_kinks) {
        const double center = evaluate(probe);
        const double right = (up - center) / options.step;
        const double left = (center - down) / options.step;
        const double size = std::max({std::abs(right), std::abs(left), options.floor});
        if (std::abs(right - left) > options.kink_ratio * size) {
          ++entry.skipped;
          continue;
        }
      }
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic[pi][i];
      const double scale = std::max({std::abs(a), std::abs(numeric), options.floor});
      const double rel = std::abs(a - numeric) / scale;
      if (!(rel <= entry.max_rel_error)) {
        entry.max_rel_error = std::isnan(rel) ? INFINITY : rel;
        entry.worst_index = i;
      }
      ++entry.checked;
    }
    entry.passed = entry.max_rel_error <= options.tolerance;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace vf
