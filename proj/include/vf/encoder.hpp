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

#ifndef VF_ENCODER_HPP_
#define VF_ENCODER_HPP_

#include <random>
#include <vector>

#include "vf/layers.hpp"
#include "vf/preprocess.hpp"

namespace vf {

struct EncoderConfig {
  int subgraph_layers = 3;
  int hidden_dim = 64;
  int attention_heads = 1;
  int global_layers = 1;
};

void validate(const EncoderConfig& cfg);  // throws ConfigInvalid

struct AttentionLayer {
  Linear query;
  Linear key;
  Linear value;
};

struct EncoderParams {
  std::vector<DenseBlock> subgraph;  // first takes raw vector features, rest take 2d
  Linear projection;                 // 2d -> d after the final pool
  std::vector<AttentionLayer> global;
  std::size_t width = 0;
};

EncoderParams register_encoder(Params& params, const EncoderConfig& cfg, std::mt19937_64& rng);

struct PolylineFeatures {
  Var rows;  // (P, d)
  int target_index = 0;
};

// (n, kVectorFeatures) matrix of start.xy, end.xy and attributes per vector.
Tensor vector_feature_matrix(const VectorizedScene& vs);

// PointNet-style set encoder per polyline. Each layer maps every vector
// node through a DenseBlock, max-pools the polyline's valid nodes, and
// concatenates the pooled feature back onto each node; the final node set
// is pooled once more and projected to width d.
PolylineFeatures subgraph_encode(Tape& tape, const VectorizedScene& vs, const Params& params,
                                 const EncoderParams& layout);

// Scaled dot-product self-attention across polylines, once per configured
// global layer. If `attention` is given it receives each layer's weights.
PolylineFeatures global_interact(Tape& tape, const PolylineFeatures& feats, const Params& params,
                                 const EncoderParams& layout,
                                 std::vector<Var>* attention = nullptr);

// Row of the target polyline, shape (1, d).
Var target_feature(const PolylineFeatures& feats);

}  // namespace vf

#endif  // VF_ENCODER_HPP_
