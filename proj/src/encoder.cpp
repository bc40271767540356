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

#include "vf/encoder.hpp"

#include <cmath>

#include "vf/error.hpp"

namespace vf {

void validate(const EncoderConfig& cfg) {
  if (cfg.subgraph_layers < 1) {
    throw Error(ErrorKind::kConfigInvalid, "encoder.subgraph_layers must be >= 1");
  }
  if (cfg.hidden_dim < 2 || cfg.hidden_dim % 2 != 0) {
    throw Error(ErrorKind::kConfigInvalid, "encoder.hidden_dim must be even and >= 2");
  }
  if (cfg.attention_heads != 1) {
    throw Error(ErrorKind::kConfigInvalid, "encoder.attention_heads must be 1");
  }
  if (cfg.global_layers < 0) {
    throw Error(ErrorKind::kConfigInvalid, "encoder.global_layers must be >= 0");
  }
}

EncoderParams register_encoder(Params& params, const EncoderConfig& cfg, std::mt19937_64& rng) {
  validate(cfg);
  const auto d = static_cast<std::size_t>(cfg.hidden_dim);
  EncoderParams layout;
  layout.width = d;
  for (int l = 0; l < cfg.subgraph_layers; ++l) {
    const std::size_t in = l == 0 ? kVectorFeatures : 2 * d;
    layout.subgraph.push_back(
        DenseBlock::create(params, "encoder.subgraph." + std::to_string(l), in, d, rng));
  }
  layout.projection = Linear::create(params, "encoder.projection", 2 * d, d, rng);
  for (int l = 0; l < cfg.global_layers; ++l) {
    const std::string prefix = "encoder.global." + std::to_string(l);
    AttentionLayer a;
    a.query = Linear::create(params, prefix + ".query", d, d, rng);
    a.key = Linear::create(params, prefix + ".key", d, d, rng);
    a.value = Linear::create(params, prefix + ".value", d, d, rng);
    layout.global.push_back(a);
  }
  return layout;
}

Tensor vector_feature_matrix(const VectorizedScene& vs) {
  Tensor x({vs.vectors.size(), kVectorFeatures});
  for (std::size_t r = 0; r < vs.vectors.size(); ++r) {
    const PolylineVector& v = vs.vectors[r];
    x(r, 0) = v.start.x;
    x(r, 1) = v.start.y;
    x(r, 2) = v.end.x;
    x(r, 3) = v.end.y;
    for (std::size_t a = 0; a < kVectorAttributes; ++a) x(r, 4 + a) = v.attributes[a];
  }
  return x;
}

PolylineFeatures subgraph_encode(Tape& tape, const VectorizedScene& vs, const Params& params,
                                 const EncoderParams& layout) {
  if (vs.vectors.empty() || vs.polyline_count < 1) {
    throw Error(ErrorKind::kEmptyPolyline, "scene has no vectors");
  }
  const auto polylines = static_cast<std::size_t>(vs.polyline_count);
  std::vector<int> segment(vs.vectors.size());
  std::vector<std::uint8_t> mask(vs.vectors.size());
  std::vector<std::size_t> valid_count(polylines, 0);
  for (std::size_t i = 0; i < vs.vectors.size(); ++i) {
    segment[i] = vs.vectors[i].polyline_id;
    mask[i] = vs.vectors[i].valid() ? 1 : 0;
    if (segment[i] < 0 || static_cast<std::size_t>(segment[i]) >= polylines) {
      throw Error(ErrorKind::kIndexOutOfRange, "polyline id " + std::to_string(segment[i]));
    }
    valid_count[static_cast<std::size_t>(segment[i])] += mask[i];
  }
  for (std::size_t p = 0; p < polylines; ++p) {
    if (valid_count[p] == 0) {
      throw Error(ErrorKind::kEmptyPolyline, "polyline " + std::to_string(p) + " is fully masked");
    }
  }
  std::vector<std::size_t> owner(segment.begin(), segment.end());

  Var nodes = tape.constant(vector_feature_matrix(vs));
  for (const DenseBlock& block : layout.subgraph) {
    Var encoded = block(tape, params, nodes);
    Var pooled = segment_max(encoded, segment, polylines, mask);
    nodes = concat(encoded, gather_rows(pooled, owner), 1);
  }
  Var pooled = segment_max(nodes, segment, polylines, mask);
  return {layout.projection(tape, params, pooled), vs.target_polyline_id};
}

PolylineFeatures global_interact(Tape& tape, const PolylineFeatures& feats, const Params& params,
                                 const EncoderParams& layout, std::vector<Var>* attention) {
  Var x = feats.rows;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(layout.width));
  for (const AttentionLayer& a : layout.global) {
    Var q = a.query(tape, params, x);
    Var k = a.key(tape, params, x);
    Var v = a.value(tape, params, x);
    Var weights = softmax(scale(matmul(q, transpose(k)), inv_sqrt_d), 1);
    if (attention != nullptr) attention->push_back(weights);
    x = matmul(weights, v);
  }
  return {x, feats.target_index};
}

Var target_feature(const PolylineFeatures& feats) {
  if (feats.target_index < 0 || static_cast<std::size_t>(feats.target_index) >= feats.rows.rows()) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "target index " + std::to_string(feats.target_index));
  }
  const std::size_t row[] = {static_cast<std::size_t>(feats.target_index)};
  return gather_rows(feats.rows, row);
}

}  // namespace vf
