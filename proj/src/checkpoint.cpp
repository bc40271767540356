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

#include "vf/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <map>
#include <sstream>

#include "vf/error.hpp"

namespace vf {
namespace {

constexpr std::string_view kMagic = "VFCK";
constexpr std::string_view kParamPrefix = "param/";
constexpr std::string_view kFirstMomentPrefix = "adam.m/";
constexpr std::string_view kSecondMomentPrefix = "adam.v/";

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void bytes(std::string_view s) { out_.append(s); }

  void record(std::string_view name, const Shape& shape, std::span<const std::uint64_t> words) {
    u32(static_cast<std::uint32_t>(name.size()));
    bytes(name);
    u32(static_cast<std::uint32_t>(shape.size()));
    for (std::size_t d : shape) u64(d);
    for (std::uint64_t w : words) u64(w);
    ++count_;
  }
  void tensor(std::string_view name, const Tensor& t) {
    std::vector<std::uint64_t> words;
    words.reserve(t.size());
    for (double v : t.data()) words.push_back(std::bit_cast<std::uint64_t>(v));
    record(name, t.shape(), words);
  }
  void reals(std::string_view name, std::initializer_list<double> values) {
    tensor(name, Tensor({values.size()}, std::vector<double>(values)));
  }
  void raw(std::string_view name, std::initializer_list<std::uint64_t> words) {
    record(name, {words.size()}, std::vector<std::uint64_t>(words));
  }

  std::uint32_t count() const { return count_; }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
  std::uint32_t count_ = 0;
};

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorKind::kCorruptCheckpoint, what);
}

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte(pos_ + i)) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte(pos_ + i)) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) corrupt("truncated checkpoint");
  }
  unsigned char byte(std::size_t i) const { return static_cast<unsigned char>(in_[i]); }

  std::string_view in_;
  std::size_t pos_ = 0;
};

struct Record {
  Shape shape;
  std::vector<std::uint64_t> words;

  Tensor tensor() const {
    std::vector<double> data;
    data.reserve(words.size());
    for (std::uint64_t w : words) data.push_back(std::bit_cast<double>(w));
    return Tensor(shape, std::move(data));
  }
  std::vector<double> reals(std::size_t expected, std::string_view name) const {
    if (words.size() != expected) corrupt("record " + std::string(name) + " has wrong length");
    std::vector<double> v;
    for (std::uint64_t w : words) v.push_back(std::bit_cast<double>(w));
    return v;
  }
};

int as_int(double v) { return static_cast<int>(v); }

}  // namespace

std::string encode_checkpoint(const Checkpoint& ckpt) {
  const ModelConfig& c = ckpt.config;
  Writer body;
  body.reals("__config/episode", {double(c.episode.t_obs), double(c.episode.t_pred),
                                  double(c.episode.k)});
  body.reals("__config/encoder", {double(c.encoder.subgraph_layers), double(c.encoder.hidden_dim),
                                  double(c.encoder.attention_heads),
                                  double(c.encoder.global_layers)});
  body.reals("__config/heads", {double(c.heads.hidden_dim), double(c.heads.m),
                                double(c.heads.t_pred)});
  body.reals("__config/nms", {c.nms.threshold, double(c.nms.k),
                              c.nms.pad == PadMode::kBest ? 1.0 : 0.0});
  body.reals("__config/sampler", {c.candidate_spacing});
  body.raw("__cursor", {ckpt.cursor.seed, ckpt.cursor.epoch, ckpt.cursor.batch,
                        ckpt.cursor.global_step});
  body.raw("__optimizer/step", {ckpt.optimizer.step});
  for (std::size_t i = 0; i < ckpt.params.size(); ++i) {
    body.tensor(std::string(kParamPrefix) + ckpt.params.name(i), ckpt.params[i]);
  }
  const OptimizerState& opt = ckpt.optimizer;
  if (!opt.first_moment.empty() &&
      (opt.first_moment.size() != ckpt.params.size() ||
       opt.second_moment.size() != ckpt.params.size())) {
    throw Error(ErrorKind::kShapeMismatch, "optimizer moments do not match parameters");
  }
  for (std::size_t i = 0; i < opt.first_moment.size(); ++i) {
    body.tensor(std::string(kFirstMomentPrefix) + ckpt.params.name(i), opt.first_moment[i]);
    body.tensor(std::string(kSecondMomentPrefix) + ckpt.params.name(i), opt.second_moment[i]);
  }

  Writer head;
  head.bytes(kMagic);
  head.u32(kCheckpointVersion);
  head.u32(body.count());
  return head.take() + body.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  Reader in(bytes);
  if (in.remaining() < kMagic.size() || in.bytes(kMagic.size()) != kMagic) corrupt("bad magic");
  const std::uint32_t version = in.u32();
  if (version != kCheckpointVersion) {
    corrupt("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t count = in.u32();

  std::vector<std::pair<std::string, Record>> records;
  std::map<std::string, std::size_t, std::less<>> by_name;
  for (std::uint32_t r = 0; r < count; ++r) {
    std::string name(in.bytes(in.u32()));
    Record rec;
    const std::uint32_t rank = in.u32();
    if (rank > 8) corrupt("record " + name + " has implausible rank");
    std::size_t n = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const std::uint64_t dim = in.u64();
      if (dim > in.remaining() / 8 + 1) corrupt("record " + name + " is truncated");
      rec.shape.push_back(static_cast<std::size_t>(dim));
      n *= static_cast<std::size_t>(dim);
    }
    if (n > in.remaining() / 8) corrupt("record " + name + " is truncated");
    rec.words.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rec.words.push_back(in.u64());
    if (!by_name.emplace(name, records.size()).second) corrupt("duplicate record " + name);
    records.emplace_back(std::move(name), std::move(rec));
  }
  if (in.remaining() != 0) corrupt("trailing bytes after last record");

  auto get = [&](std::string_view name) -> const Record& {
    auto it = by_name.find(name);
    if (it == by_name.end()) corrupt("missing record " + std::string(name));
    return records[it->second].second;
  };

  Checkpoint ckpt;
  ModelConfig& c = ckpt.config;
  auto ep = get("__config/episode").reals(3, "__config/episode");
  c.episode = {as_int(ep[0]), as_int(ep[1]), as_int(ep[2])};
  auto en = get("__config/encoder").reals(4, "__config/encoder");
  c.encoder = {as_int(en[0]), as_int(en[1]), as_int(en[2]), as_int(en[3])};
  auto hd = get("__config/heads").reals(3, "__config/heads");
  c.heads = {as_int(hd[0]), as_int(hd[1]), as_int(hd[2])};
  auto nm = get("__config/nms").reals(3, "__config/nms");
  c.nms = {nm[0], as_int(nm[1]), nm[2] != 0.0 ? PadMode::kBest : PadMode::kZero};
  c.candidate_spacing = get("__config/sampler").reals(1, "__config/sampler")[0];

  const Record& cur = get("__cursor");
  if (cur.words.size() != 4) corrupt("record __cursor has wrong length");
  ckpt.cursor = {cur.words[0], cur.words[1], cur.words[2], cur.words[3]};
  const Record& step = get("__optimizer/step");
  if (step.words.size() != 1) corrupt("record __optimizer/step has wrong length");
  ckpt.optimizer.step = step.words[0];

  try {
    for (const auto& [name, rec] : records) {
      if (name.starts_with(kParamPrefix)) {
        ckpt.params.add(name.substr(kParamPrefix.size()), rec.tensor());
      }
    }
    for (std::size_t i = 0; i < ckpt.params.size(); ++i) {
      const std::string m = std::string(kFirstMomentPrefix) + ckpt.params.name(i);
      const std::string v = std::string(kSecondMomentPrefix) + ckpt.params.name(i);
      if (!by_name.contains(m) && !by_name.contains(v)) continue;
      ckpt.optimizer.first_moment.push_back(get(m).tensor());
      ckpt.optimizer.second_moment.push_back(get(v).tensor());
    }
    if (!ckpt.optimizer.first_moment.empty() &&
        ckpt.optimizer.first_moment.size() != ckpt.params.size()) {
      corrupt("optimizer moments cover only some parameters");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kCorruptCheckpoint) throw;
    corrupt(e.what());
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const std::string bytes = encode_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kFileError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kFileError, "short write to " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kFileError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_checkpoint(buf.str());
}

TntModel restore_model(const Checkpoint& ckpt) {
  TntModel model;
  try {
    model = TntModel::create(ckpt.config, 0);
  } catch (const Error& e) {
    corrupt(std::string("stored configuration is invalid: ") + e.what());
  }
  Params& params = model.params();
  if (params.size() != ckpt.params.size()) corrupt("parameter count does not match configuration");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!ckpt.params.contains(params.name(i))) corrupt("missing parameter " + params.name(i));
    const Tensor& stored = ckpt.params[ckpt.params.index_of(params.name(i))];
    if (stored.shape() != params[i].shape()) corrupt("shape mismatch for " + params.name(i));
    params[i] = stored;
  }
  return model;
}

}  // namespace vf
