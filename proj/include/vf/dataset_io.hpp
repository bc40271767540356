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

#ifndef VF_DATASET_IO_HPP_
#define VF_DATASET_IO_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vf/scene.hpp"

namespace vf {

// A dataset is a directory holding <id>.csv and <id>.map.json per scene.

std::string read_text_file(const std::filesystem::path& path);   // throws FileError
void write_text_file(const std::filesystem::path& path, std::string_view text);

void write_scene(const std::filesystem::path& dir, const Scene& scene);
Scene read_scene(const std::filesystem::path& csv_path);

void write_dataset(const std::filesystem::path& dir, std::span<const Scene> scenes);
// Scenes in file-name order.
std::vector<Scene> read_dataset(const std::filesystem::path& dir);

}  // namespace vf

#endif  // VF_DATASET_IO_HPP_
