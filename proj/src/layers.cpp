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

#include "vf/layers.hpp"

namespace vf {

Linear Linear::create(Params& params, const std::string& prefix, std::size_t in,
                      std::size_t out, std::mt19937_64& rng) {
  Linear l;
  l.weight = params.add_glorot(prefix + ".weight", in, out, rng);
  l.bias = params.add_filled(prefix + ".bias", 1, out, 0.0);
  return l;
}

Var Linear::operator()(Tape& tape, const Params& params, Var x) const {
  return add_bias(matmul(x, tape.param(params, weight)), tape.param(params, bias));
}

LayerNorm LayerNorm::create(Params& params, const std::string& prefix, std::size_t width) {
  LayerNorm n;
  n.gain = params.add_filled(prefix + ".gain", 1, width, 1.0);
  n.shift = params.add_filled(prefix + ".shift", 1, width, 0.0);
  return n;
}

Var LayerNorm::operator()(Tape& tape, const Params& params, Var x) const {
  return layer_norm(x, tape.param(params, gain), tape.param(params, shift));
}

DenseBlock DenseBlock::create(Params& params, const std::string& prefix, std::size_t in,
                              std::size_t out, std::mt19937_64& rng) {
  DenseBlock b;
  b.affine = Linear::create(params, prefix + ".affine", in, out, rng);
  b.norm = LayerNorm::create(params, prefix + ".norm", out);
  return b;
}

Var DenseBlock::operator()(Tape& tape, const Params& params, Var x) const {
  return relu(norm(tape, params, affine(tape, params, x)));
}

Mlp2 Mlp2::create(Params& params, const std::string& prefix, std::size_t in,
                  std::size_t hidden_width, std::size_t out, std::mt19937_64& rng) {
  Mlp2 m;
  m.hidden = DenseBlock::create(params, prefix + ".hidden", in, hidden_width, rng);
  m.output = Linear::create(params, prefix + ".output", hidden_width, out, rng);
  return m;
}

Var Mlp2::operator()(Tape& tape, const Params& params, Var x) const {
  return output(tape, params, hidden(tape, params, x));
}

}  // namespace vf
