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

#include "vf/scene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "vf/error.hpp"

namespace vf {

namespace {

constexpr std::string_view kTrajectoryHeader =
    "scene_id,agent_id,frame,x,y,vx,vy,heading,agent_type";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

[[noreturn]] void malformed(std::size_t line_no, std::string_view field,
                            std::string_view why) {
  std::ostringstream os;
  os << "line " << line_no << ", field '" << field << "': " << why;
  throw Error(ErrorKind::kMalformedRecord, os.str());
}

double parse_real(std::string_view text, std::size_t line_no, std::string_view field) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    malformed(line_no, field, "not a real number");
  }
  return v;
}

std::int64_t parse_int(std::string_view text, std::size_t line_no, std::string_view field) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    malformed(line_no, field, "not an integer");
  }
  return v;
}

void append_state(std::string& out, std::string_view scene_id, const std::string& agent_id,
                  const AgentState& s) {
  out.append(scene_id);
  out += ',';
  out += agent_id;
  out += ',';
  out += std::to_string(s.t);
  for (double v : {s.x, s.y, s.vx, s.vy, s.heading}) {
    out += ',';
    out += format_double(v);
  }
  out += ',';
  out.append(to_string(s.agent_type));
  out += '\n';
}

void check_finite(const AgentState& s, const std::string& agent_id,
                  std::vector<Violation>& out) {
  for (double v : {s.x, s.y, s.vx, s.vy, s.heading}) {
    if (!std::isfinite(v)) {
      out.push_back({ViolationKind::kNonFiniteValue,
                     "agent " + agent_id + " frame " + std::to_string(s.t)});
      return;
    }
  }
}

void check_track(const Track& track, std::vector<Violation>& out) {
  for (std::size_t i = 0; i < track.states.size(); ++i) {
    const AgentState& s = track.states[i];
    check_finite(s, track.agent_id, out);
    if (!(s.heading > -std::numbers::pi && s.heading <= std::numbers::pi)) {
      out.push_back({ViolationKind::kHeadingOutOfRange,
                     "agent " + track.agent_id + " frame " + std::to_string(s.t)});
    }
    if (i > 0 && track.states[i - 1].t >= s.t) {
      out.push_back({ViolationKind::kNonMonotoneTrack,
                     "agent " + track.agent_id + " frame " + std::to_string(s.t)});
    }
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string_view to_string(AgentType type) {
  switch (type) {
    case AgentType::kTargetVehicle: return "target_vehicle";
    case AgentType::kVehicle: return "vehicle";
    case AgentType::kPedestrian: return "pedestrian";
    case AgentType::kOther: return "other";
  }
  return "other";
}

AgentType agent_type_from_string(std::string_view name) {
  if (name == "target_vehicle") return AgentType::kTargetVehicle;
  if (name == "vehicle") return AgentType::kVehicle;
  if (name == "pedestrian") return AgentType::kPedestrian;
  if (name == "other") return AgentType::kOther;
  throw Error(ErrorKind::kMalformedRecord, "unknown agent_type '" + std::string(name) + "'");
}

void validate(const EpisodeConfig& cfg) {
  if (cfg.t_obs < 2) throw Error(ErrorKind::kConfigInvalid, "t_obs must be >= 2");
  if (cfg.t_pred < 1) throw Error(ErrorKind::kConfigInvalid, "t_pred must be >= 1");
  if (cfg.k < 1) throw Error(ErrorKind::kConfigInvalid, "k must be >= 1");
}

Scene parse_scene(std::string_view trajectory_csv, std::string_view map_json) {
  Scene scene;
  std::vector<Track> tracks;
  std::map<std::string, std::size_t, std::less<>> index_of;
  std::vector<bool> is_target;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  bool scene_id_seen = false;
  while (pos < trajectory_csv.size()) {
    std::size_t eol = trajectory_csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = trajectory_csv.size();
    const std::string_view line = strip_cr(trajectory_csv.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (!header_seen) {
      if (line != kTrajectoryHeader) malformed(line_no, "header", "unexpected column header");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 9) malformed(line_no, "record", "expected 9 fields");
    if (!scene_id_seen) {
      scene.id = std::string(fields[0]);
      scene_id_seen = true;
    } else if (fields[0] != scene.id) {
      malformed(line_no, "scene_id", "mixed scene ids in one file");
    }
    if (fields[1].empty()) malformed(line_no, "agent_id", "empty");
    AgentState s;
    s.t = parse_int(fields[2], line_no, "frame");
    s.x = parse_real(fields[3], line_no, "x");
    s.y = parse_real(fields[4], line_no, "y");
    s.vx = parse_real(fields[5], line_no, "vx");
    s.vy = parse_real(fields[6], line_no, "vy");
    s.heading = parse_real(fields[7], line_no, "heading");
    try {
      s.agent_type = agent_type_from_string(fields[8]);
    } catch (const Error&) {
      malformed(line_no, "agent_type", "unknown agent type");
    }
    auto it = index_of.find(fields[1]);
    if (it == index_of.end()) {
      it = index_of.emplace(std::string(fields[1]), tracks.size()).first;
      tracks.push_back(Track{std::string(fields[1]), {}});
      is_target.push_back(false);
    }
    if (s.agent_type == AgentType::kTargetVehicle) is_target[it->second] = true;
    tracks[it->second].states.push_back(s);
  }
  if (!header_seen) malformed(1, "header", "missing header row");
  if (tracks.empty()) throw Error(ErrorKind::kEmptyScene, "no trajectory records");

  const auto targets = std::count(is_target.begin(), is_target.end(), true);
  if (targets == 0) throw Error(ErrorKind::kEmptyScene, "no target_vehicle agent");
  if (targets > 1) {
    throw Error(ErrorKind::kMalformedRecord, "more than one target_vehicle agent");
  }

  for (std::size_t i = 0; i < tracks.size(); ++i) {
    auto& states = tracks[i].states;
    std::stable_sort(states.begin(), states.end(),
                     [](const AgentState& a, const AgentState& b) { return a.t < b.t; });
    for (std::size_t j = 1; j < states.size(); ++j) {
      if (states[j].t == states[j - 1].t) {
        throw Error(ErrorKind::kNonMonotoneTrack,
                    "agent " + tracks[i].agent_id + " repeats frame " +
                        std::to_string(states[j].t));
      }
    }
    if (is_target[i]) {
      scene.target = std::move(tracks[i]);
    } else {
      scene.neighbors.push_back(std::move(tracks[i]));
    }
  }

  nlohmann::json map;
  try {
    map = nlohmann::json::parse(map_json);
    if (map.contains("rate")) scene.rate = map.at("rate").get<double>();
    for (const auto& c : map.at("centerlines")) {
      Centerline line;
      const auto& id = c.at("id");
      line.id = id.is_string() ? id.get<std::string>() : id.dump();
      for (const auto& p : c.at("points")) {
        if (p.size() != 2) throw Error(ErrorKind::kMalformedRecord, "centerline point arity");
        line.points.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      line.turn.assign(line.points.size(), false);
      line.intersection.assign(line.points.size(), false);
      if (c.contains("turn")) line.turn = c.at("turn").get<std::vector<bool>>();
      if (c.contains("intersection")) {
        line.intersection = c.at("intersection").get<std::vector<bool>>();
      }
      scene.centerlines.push_back(std::move(line));
    }
    for (const auto& p : map.at("drivable_area")) {
      if (p.size() != 2) throw Error(ErrorKind::kMalformedRecord, "polygon point arity");
      scene.drivable_area.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedRecord, std::string("map json: ") + e.what());
  }

  const auto violations = validate_scene(scene);
  if (!violations.empty()) {
    throw Error(ErrorKind::kMalformedRecord, std::string(to_string(violations.front().kind)) +
                                                 " (" + violations.front().detail + ")");
  }
  return scene;
}

std::string serialize_trajectories(const Scene& scene) {
  std::string out(kTrajectoryHeader);
  out += '\n';
  for (const auto& s : scene.target.states) append_state(out, scene.id, scene.target.agent_id, s);
  for (const auto& track : scene.neighbors) {
    for (const auto& s : track.states) append_state(out, scene.id, track.agent_id, s);
  }
  return out;
}

std::string serialize_map(const Scene& scene) {
  nlohmann::json map;
  map["rate"] = scene.rate;
  map["centerlines"] = nlohmann::json::array();
  for (const auto& line : scene.centerlines) {
    nlohmann::json c;
    c["id"] = line.id;
    c["points"] = nlohmann::json::array();
    for (const Vec2 p : line.points) c["points"].push_back({p.x, p.y});
    c["turn"] = line.turn;
    c["intersection"] = line.intersection;
    map["centerlines"].push_back(std::move(c));
  }
  map["drivable_area"] = nlohmann::json::array();
  for (const Vec2 p : scene.drivable_area) map["drivable_area"].push_back({p.x, p.y});
  return map.dump() + "\n";
}

ObservedSplit split_observed_future(const Scene& scene, const EpisodeConfig& cfg) {
  validate(cfg);
  const auto& states = scene.target.states;
  const std::size_t need = static_cast<std::size_t>(cfg.t_obs + cfg.t_pred);
  if (states.size() < need) {
    throw Error(ErrorKind::kInsufficientHistory,
                "target has " + std::to_string(states.size()) + " states, need " +
                    std::to_string(need));
  }
  ObservedSplit split;
  split.observed = scene;
  split.observed.target.states.resize(static_cast<std::size_t>(cfg.t_obs));
  const std::int64_t last_obs = split.observed.target.states.back().t;
  for (auto& track : split.observed.neighbors) {
    std::erase_if(track.states, [&](const AgentState& s) { return s.t > last_obs; });
  }
  std::erase_if(split.observed.neighbors, [](const Track& t) { return t.states.empty(); });
  split.future_target.reserve(static_cast<std::size_t>(cfg.t_pred));
  for (int i = 0; i < cfg.t_pred; ++i) {
    split.future_target.push_back(states[static_cast<std::size_t>(cfg.t_obs + i)].position());
  }
  return split;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kMissingTarget: return "MissingTarget";
    case ViolationKind::kHeadingOutOfRange: return "HeadingOutOfRange";
    case ViolationKind::kNonMonotoneTrack: return "NonMonotoneTrack";
    case ViolationKind::kNonFiniteValue: return "NonFiniteValue";
    case ViolationKind::kCenterlineTooShort: return "CenterlineTooShort";
    case ViolationKind::kCoincidentCenterlinePoints: return "CoincidentCenterlinePoints";
    case ViolationKind::kCenterlineFlagLength: return "CenterlineFlagLength";
    case ViolationKind::kNonSimplePolygon: return "NonSimplePolygon";
    case ViolationKind::kNonPositiveRate: return "NonPositiveRate";
  }
  return "Unknown";
}

std::vector<Violation> validate_scene(const Scene& scene) {
  std::vector<Violation> out;
  if (scene.target.states.empty()) out.push_back({ViolationKind::kMissingTarget, "target"});
  check_track(scene.target, out);
  for (const auto& track : scene.neighbors) check_track(track, out);
  if (!(scene.rate > 0.0) || !std::isfinite(scene.rate)) {
    out.push_back({ViolationKind::kNonPositiveRate, format_double(scene.rate)});
  }
  for (const auto& line : scene.centerlines) {
    if (line.points.size() < 2) {
      out.push_back({ViolationKind::kCenterlineTooShort, line.id});
    }
    if (line.turn.size() != line.points.size() ||
        line.intersection.size() != line.points.size()) {
      out.push_back({ViolationKind::kCenterlineFlagLength, line.id});
    }
    for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
      if (!(distance(line.points[i], line.points[i + 1]) > 1e-9)) {
        out.push_back({ViolationKind::kCoincidentCenterlinePoints,
                       line.id + " at point " + std::to_string(i)});
        break;
      }
    }
  }
  if (!scene.drivable_area.empty() && !is_simple_polygon(scene.drivable_area)) {
    out.push_back({ViolationKind::kNonSimplePolygon, "drivable_area"});
  }
  return out;
}

std::string prediction_csv_header() { return "scene_id,mode,rank,score,step,x,y\n"; }

std::string serialize_predictions(std::string_view scene_id, const PredictionSet& preds) {
  std::vector<std::size_t> order(preds.k());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds.scores[a] > preds.scores[b];
  });
  std::vector<std::size_t> rank(preds.k());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;

  std::string out;
  for (std::size_t m = 0; m < preds.k(); ++m) {
    const auto& traj = preds.trajectories[m];
    for (std::size_t step = 0; step < traj.size(); ++step) {
      out.append(scene_id);
      out += ',' + std::to_string(m) + ',' + std::to_string(rank[m]) + ',' +
             format_double(preds.scores[m]) + ',' + std::to_string(step + 1) + ',' +
             format_double(traj[step].x) + ',' + format_double(traj[step].y) + '\n';
    }
  }
  return out;
}

}  // namespace vf
