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

#include "vf/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "vf/error.hpp"

namespace vf {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kFileError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kFileError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::kFileError, "short write to " + path.string());
}

void write_scene(const fs::path& dir, const Scene& scene) {
  write_text_file(dir / (scene.id + ".csv"), serialize_trajectories(scene));
  write_text_file(dir / (scene.id + ".map.json"), serialize_map(scene));
}

Scene read_scene(const fs::path& csv_path) {
  fs::path map_path = csv_path;
  map_path.replace_extension(".map.json");
  return parse_scene(read_text_file(csv_path), read_text_file(map_path));
}

void write_dataset(const fs::path& dir, std::span<const Scene> scenes) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kFileError, "cannot create " + dir.string() + ": " + ec.message());
  for (const Scene& s : scenes) write_scene(dir, s);
}

std::vector<Scene> read_dataset(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::kFileError, "not a dataset directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Scene> scenes;
  scenes.reserve(files.size());
  for (const auto& f : files) scenes.push_back(read_scene(f));
  return scenes;
}

}  // namespace vf
