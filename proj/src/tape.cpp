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

#include "vf/tape.hpp"

#include "vf/error.hpp"

namespace vf {

std::size_t Params::add(std::string name, Tensor value) {
  if (index_.contains(name)) {
    throw Error(ErrorKind::kConfigInvalid, "duplicate parameter name '" + name + "'");
  }
  const std::size_t i = tensors_.size();
  index_.emplace(name, i);
  names_.push_back(std::move(name));
  tensors_.push_back(std::move(value));
  return i;
}

std::size_t Params::add_glorot(std::string name, std::size_t rows, std::size_t cols,
                               std::mt19937_64& rng) {
  return add(std::move(name), glorot_uniform(rows, cols, rng));
}

std::size_t Params::add_filled(std::string name, std::size_t rows, std::size_t cols,
                               double value) {
  Tensor t({rows, cols});
  t.fill(value);
  return add(std::move(name), std::move(t));
}

bool Params::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

std::size_t Params::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw Error(ErrorKind::kIndexOutOfRange, "no parameter named '" + std::string(name) + "'");
  }
  return it->second;
}

std::size_t Params::total_elements() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

std::vector<Tensor> Params::zeros_like() const {
  std::vector<Tensor> out;
  out.reserve(tensors_.size());
  for (const auto& t : tensors_) out.emplace_back(t.shape());
  return out;
}

const Tensor& Var::value() const { return tape_->value(id_); }

Var Tape::constant(Tensor value) {
  Node node;
  node.owned = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::param(const Params& params, std::size_t index) {
  if (index >= params.size()) {
    throw Error(ErrorKind::kIndexOutOfRange, "parameter index " + std::to_string(index));
  }
  Node node;
  node.borrowed = &params[index];
  node.requires_grad = true;
  node.params = &params;
  node.param_index = index;
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::param(const Params& params, std::string_view name) {
  return param(params, params.index_of(name));
}

Var Tape::record(Tensor value, std::vector<std::size_t> inputs, BackwardFn backward) {
  Node node;
  node.owned = std::move(value);
  for (std::size_t in : inputs) node.requires_grad = node.requires_grad || nodes_[in].requires_grad;
  node.inputs = std::move(inputs);
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

const Tensor& Tape::value(std::size_t id) const {
  const Node& n = nodes_[id];
  return n.borrowed ? *n.borrowed : n.owned;
}

Tensor& Tape::grad_accumulator(std::size_t id) {
  Tensor& g = grads_[id];
  if (g.empty()) g = Tensor(value(id).shape());
  return g;
}

Gradients Tape::backward(Var loss, const Params& params) {
  if (loss.tape() != this) {
    throw Error(ErrorKind::kNotScalarLoss, "loss was not produced on this tape");
  }
  if (value(loss.id()).size() != 1) {
    throw Error(ErrorKind::kNotScalarLoss,
                "loss has shape " + shape_string(value(loss.id()).shape()));
  }
  grads_.assign(nodes_.size(), Tensor());
  grads_[loss.id()] = Tensor(value(loss.id()).shape(), {1.0});

  Gradients out = params.zeros_like();
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    const Node& node = nodes_[i];
    if (!node.requires_grad || grads_[i].empty()) continue;
    if (node.params != nullptr) {
      if (node.params == &params) {
        auto src = grads_[i].data();
        auto dst = out[node.param_index].data();
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
      }
      continue;
    }
    if (node.backward) node.backward(*this, i);
  }
  grads_.clear();
  return out;
}

}  // namespace vf
