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

#ifndef VF_OPS_HPP_
#define VF_OPS_HPP_

#include <cstdint>
#include <span>

#include "vf/tape.hpp"

namespace vf {

// Differentiable primitives. All operands are rank-2; shape rules:
//   matmul        (n,k) x (k,m) -> (n,m)
//   add/sub/mul   (n,m) . (n,m) -> (n,m)
//   add_bias      (n,m) + (1,m) -> (n,m)   (bias repeated over rows)
//   softmax       over axis 0 (columns) or axis 1 (rows)
//   concat        along axis 0 (stack rows) or axis 1 (append columns)
//   layer_norm    per row, with (1,m) gain and shift
//   segment_max   rows grouped by segment id, masked rows excluded
// Violations throw ShapeMismatch.

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var add_bias(Var x, Var bias);
Var scale(Var x, double factor);
Var relu(Var x);
Var log(Var x);
Var softmax(Var x, int axis);
Var log_softmax(Var x, int axis);
Var transpose(Var x);
Var reshape(Var x, std::size_t rows, std::size_t cols);
Var concat(Var a, Var b, int axis);
Var layer_norm(Var x, Var gain, Var shift, double eps = 1e-5);

// Max over the rows of each segment. Ties go to the lowest row index and
// receive the whole gradient. Throws EmptyReduction when a segment has no
// unmasked row.
Var segment_max(Var x, std::span<const int> segment, std::size_t segments,
                std::span<const std::uint8_t> mask);
// Max over all rows (the set axis) with an optional mask.
Var max_pool_over_set(Var x, std::span<const std::uint8_t> mask = {});

Var gather_rows(Var x, std::span<const std::size_t> rows);
Var repeat_rows(Var x, std::size_t times);  // x must be a single row
Var pick(Var x, std::size_t row, std::size_t col);

Var sum(Var x);
Var mean(Var x);
Var huber(Var x, double delta);
// Euclidean norm of each row; the subgradient at the zero row is zero.
Var row_norms(Var x);

// Value copy with no gradient path.
Var detach(Var x);

}  // namespace vf

#endif  // VF_OPS_HPP_
