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

#ifndef VF_CHECKPOINT_HPP_
#define VF_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vf/model.hpp"
#include "vf/tape.hpp"

namespace vf {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// First and second moment estimates, one tensor per parameter. Empty
// under plain SGD.
struct OptimizerState {
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
  std::uint64_t step = 0;

  friend bool operator==(const OptimizerState&, const OptimizerState&) = default;
};

// Where a training run stands. Every random draw during training is a pure
// function of (seed, epoch, step), so this is the full RNG state.
struct TrainingCursor {
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;        // completed epochs
  std::uint64_t batch = 0;        // batches done inside the current epoch
  std::uint64_t global_step = 0;  // optimizer steps overall

  friend bool operator==(const TrainingCursor&, const TrainingCursor&) = default;
};

struct Checkpoint {
  ModelConfig config;
  Params params;
  OptimizerState optimizer;
  TrainingCursor cursor;
};

// Layout: "VFCK", u32 version, u32 record count, then records of
// (u32 name length, name bytes, u32 rank, u64 dims[rank], f64 payload).
// All integers and doubles are little-endian.
std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::string_view bytes);  // throws CorruptCheckpoint

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Rebuilds a model from a checkpoint: layout from the stored config,
// values by parameter name.
TntModel restore_model(const Checkpoint& ckpt);

}  // namespace vf

#endif  // VF_CHECKPOINT_HPP_
