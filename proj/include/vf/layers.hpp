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

#ifndef VF_LAYERS_HPP_
#define VF_LAYERS_HPP_

#include <random>
#include <string>

#include "vf/ops.hpp"

namespace vf {

// Parameter-index bundles. Each layer registers its tensors under a name
// prefix so a model layout can be rebuilt from its configuration alone.

struct Linear {
  std::size_t weight = 0;  // (in, out)
  std::size_t bias = 0;    // (1, out)

  static Linear create(Params& params, const std::string& prefix, std::size_t in,
                       std::size_t out, std::mt19937_64& rng);
  Var operator()(Tape& tape, const Params& params, Var x) const;
};

struct LayerNorm {
  std::size_t gain = 0;
  std::size_t shift = 0;

  static LayerNorm create(Params& params, const std::string& prefix, std::size_t width);
  Var operator()(Tape& tape, const Params& params, Var x) const;
};

// affine -> layer norm -> ReLU
struct DenseBlock {
  Linear affine;
  LayerNorm norm;

  static DenseBlock create(Params& params, const std::string& prefix, std::size_t in,
                           std::size_t out, std::mt19937_64& rng);
  Var operator()(Tape& tape, const Params& params, Var x) const;
};

// Two-layer MLP: DenseBlock followed by an output affine.
struct Mlp2 {
  DenseBlock hidden;
  Linear output;

  static Mlp2 create(Params& params, const std::string& prefix, std::size_t in,
                     std::size_t hidden_width, std::size_t out, std::mt19937_64& rng);
  Var operator()(Tape& tape, const Params& params, Var x) const;
};

}  // namespace vf

#endif  // VF_LAYERS_HPP_
