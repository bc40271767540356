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

#ifndef VF_GRADCHECK_HPP_
#define VF_GRADCHECK_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "vf/tape.hpp"

namespace vf {

// Builds a scalar loss on the given tape from the given parameters.
using ScalarFn = std::function<Var(Tape&, const Params&)>;

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  // Magnitudes below this are compared on an absolute scale.
  double floor = 1e-6;
  // 0 checks every element; otherwise an evenly strided subset.
  std::size_t max_entries_per_param = 0;
  // Skip elements whose one-sided slopes disagree by more than
  // kink_ratio relative to their size: the step straddles a ReLU,
  // max-pool or Huber kink there and the central difference is meaningless.
  bool exclude_kinks = false;
  double kink_ratio = 1e-3;
};

struct GradCheckEntry {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // kink-adjacent elements
  bool passed = true;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double tolerance = 0.0;

  bool passed() const;
  double max_rel_error() const;
};

// Compares reverse-mode gradients against central differences
// (f(w + h) - f(w - h)) / 2h, one element at a time.
GradCheckReport grad_check(const ScalarFn& f, const Params& params,
                           const GradCheckOptions& options = {});

}  // namespace vf

#endif  // VF_GRADCHECK_HPP_
