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

#ifndef VF_TAPE_HPP_
#define VF_TAPE_HPP_

#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vf/tensor.hpp"

namespace vf {

// Named learnable tensors with stable (insertion) iteration order.
class Params {
 public:
  std::size_t add(std::string name, Tensor value);
  std::size_t add_glorot(std::string name, std::size_t rows, std::size_t cols,
                         std::mt19937_64& rng);
  std::size_t add_filled(std::string name, std::size_t rows, std::size_t cols, double value);

  std::size_t size() const { return tensors_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  bool contains(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  Tensor& operator[](std::size_t i) { return tensors_[i]; }
  const Tensor& operator[](std::size_t i) const { return tensors_[i]; }

  std::size_t total_elements() const;
  std::vector<Tensor> zeros_like() const;

  friend bool operator==(const Params& a, const Params& b) {
    return a.names_ == b.names_ && a.tensors_ == b.tensors_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Gradients aligned index-for-index with a Params collection.
using Gradients = std::vector<Tensor>;

class Tape;

// Handle to a node recorded on a Tape.
class Var {
 public:
  Var() = default;

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Append-only record of primitive applications. Nodes are stored in
// creation order, which is a topological order, and backward walks them
// once in reverse. A tape is single-threaded; use one tape per scene.
class Tape {
 public:
  // Accumulates the node's output gradient into its inputs' gradients.
  using BackwardFn = std::function<void(Tape& tape, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  // Binds a parameter by reference; params must outlive the tape.
  Var param(const Params& params, std::size_t index);
  Var param(const Params& params, std::string_view name);

  Var record(Tensor value, std::vector<std::size_t> inputs, BackwardFn backward);

  const Tensor& value(std::size_t id) const;
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Valid only inside a BackwardFn.
  const Tensor& grad(std::size_t id) const { return grads_[id]; }
  Tensor& grad_accumulator(std::size_t id);

  // Reverse-mode sweep from a single-element loss. Parameters that did not
  // take part in the computation receive zero gradients.
  Gradients backward(Var loss, const Params& params);

 private:
  struct Node {
    Tensor owned;
    const Tensor* borrowed = nullptr;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    const Params* params = nullptr;
    std::size_t param_index = 0;
  };

  std::vector<Node> nodes_;
  std::vector<Tensor> grads_;
};

}  // namespace vf

#endif  // VF_TAPE_HPP_
