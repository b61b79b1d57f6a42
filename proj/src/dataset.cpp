// Copyright 2026 The swnav Authors
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

#include "swnav/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "swnav/errors.hpp"

namespace swnav {

namespace fs = std::filesystem;

const char* to_string(Behavior b) {
  switch (b) {
    case Behavior::kStraight: return "straight";
    case Behavior::kTurnLeft: return "turn_left";
    case Behavior::kTurnRight: return "turn_right";
    case Behavior::kStop: return "stop";
  }
  return "straight";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kOriginal: return "original";
    case Provenance::kCorrective: return "corrective";
    case Provenance::kRelit: return "relit";
  }
  return "original";
}

const char* to_string(PerturbDirection d) {
  return d == PerturbDirection::kLateral ? "lateral" : "longitudinal";
}

Behavior behavior_from_string(const std::string& s) {
  if (s == "straight") return Behavior::kStraight;
  if (s == "turn_left") return Behavior::kTurnLeft;
  if (s == "turn_right") return Behavior::kTurnRight;
  if (s == "stop") return Behavior::kStop;
  throw IoError("unknown behavior: " + s);
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "original") return Provenance::kOriginal;
  if (s == "corrective") return Provenance::kCorrective;
  if (s == "relit") return Provenance::kRelit;
  throw IoError("unknown provenance: " + s);
}

PerturbDirection direction_from_string(const std::string& s) {
  if (s == "lateral") return PerturbDirection::kLateral;
  if (s == "longitudinal") return PerturbDirection::kLongitudinal;
  throw IoError("unknown direction: " + s);
}

void write_sample_window(const std::string& path, const SampleWindow& window) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for write: " + path);
  char buf[256];
  out << "#SAMP v1\n";
  auto dump = [&](const char* tag, const Pose& p) {
    std::snprintf(buf, sizeof(buf), "%s %.17g %.17g %.17g\n", tag, p.x, p.y, p.psi);
    out << buf;
  };
  for (const Pose& p : window.history_ego.poses) dump("h", p);
  for (const Pose& p : window.future_ego.poses) dump("f", p);
  for (const Pose& p : window.frame_world_poses) dump("w", p);
  if (!out) throw IoError("write failed: " + path);
}

SampleWindow read_sample_window(const std::string& path, int history_len,
                                int horizon, double rate_hz) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("#SAMP v1", 0) != 0) throw IoError("bad window header in " + path);
  SampleWindow window;
  window.history_ego.rate_hz = rate_hz;
  window.history_ego.frame_id = "ego";
  window.future_ego.rate_hz = rate_hz;
  window.future_ego.frame_id = "ego";
  while (std::getline(in, line)) {
    char tag;
    Pose p;
    if (std::sscanf(line.c_str(), "%c %lg %lg %lg", &tag, &p.x, &p.y, &p.psi) != 4) {
      throw IoError("bad window record in " + path + ": " + line);
    }
    if (tag == 'h') window.history_ego.poses.push_back(p);
    else if (tag == 'f') window.future_ego.poses.push_back(p);
    else if (tag == 'w') window.frame_world_poses.push_back(p);
    else throw IoError("unknown window tag in " + path);
  }
  if (window.history_ego.size() != history_len || window.future_ego.size() != horizon ||
      static_cast<int>(window.frame_world_poses.size()) != history_len) {
    throw IoError("window length mismatch in " + path);
  }
  return window;
}

void write_sample_store(const SampleStore& store) {
  fs::create_directories(store.dir);
  std::ofstream out(fs::path(store.dir) / "store.idx");
  if (!out) throw IoError("cannot write store index in " + store.dir);
  char buf[512];
  std::snprintf(buf, sizeof(buf), "#STORE v1 T_h=%d T=%d rate_hz=%.17g\n",
                store.history_len, store.horizon, store.rate_hz);
  out << buf;
  for (const SampleRecord& r : store.records) {
    out << r.id << " " << to_string(r.provenance) << " " << to_string(r.behavior);
    std::snprintf(buf, sizeof(buf), " %.17g %s", r.alpha, to_string(r.direction));
    out << buf;
    std::snprintf(buf, sizeof(buf), " %.17g %.17g %.17g", r.anchor_world.x,
                  r.anchor_world.y, r.anchor_world.psi);
    out << buf;
    std::snprintf(buf, sizeof(buf), " %.17g %.17g", r.goal_world.x, r.goal_world.y);
    out << buf;
    std::snprintf(buf, sizeof(buf), " %.17g %.17g %.17g", r.goal.d, r.goal.cos_phi,
                  r.goal.sin_phi);
    out << buf;
    for (double v : r.cam_features) {
      std::snprintf(buf, sizeof(buf), " %.17g", v);
      out << buf;
    }
    out << " " << r.window_path;
    for (const auto& p : r.rgb_paths) out << " " << p;
    for (const auto& p : r.depth_paths) out << " " << p;
    out << "\n";
  }
  if (!out) throw IoError("store index write failed in " + store.dir);
}

SampleStore read_sample_store(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "store.idx");
  if (!in) throw IoError("cannot open store index in " + dir);
  SampleStore store;
  store.dir = dir;
  std::string line;
  std::getline(in, line);
  if (std::sscanf(line.c_str(), "#STORE v1 T_h=%d T=%d rate_hz=%lg",
                  &store.history_len, &store.horizon, &store.rate_hz) != 3) {
    throw IoError("bad store header in " + dir);
  }
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    SampleRecord r;
    std::string prov, behavior, dir_s;
    ss >> r.id >> prov >> behavior >> r.alpha >> dir_s >> r.anchor_world.x >>
        r.anchor_world.y >> r.anchor_world.psi >> r.goal_world.x >> r.goal_world.y >>
        r.goal.d >> r.goal.cos_phi >> r.goal.sin_phi;
    for (double& v : r.cam_features) ss >> v;
    ss >> r.window_path;
    r.rgb_paths.resize(store.history_len);
    r.depth_paths.resize(store.history_len);
    for (auto& p : r.rgb_paths) ss >> p;
    for (auto& p : r.depth_paths) ss >> p;
    if (!ss) throw IoError("bad store record in " + dir + ": " + line);
    r.provenance = provenance_from_string(prov);
    r.behavior = behavior_from_string(behavior);
    r.direction = direction_from_string(dir_s);
    store.records.push_back(std::move(r));
  }
  return store;
}

void append_sample_records(SampleStore* store, std::vector<SampleRecord> extra) {
  for (auto& r : extra) store->records.push_back(std::move(r));
}

std::shared_ptr<const std::vector<uint8_t>> FrameCache::rgb(const std::string& path) {
  auto it = rgb_.find(path);
  if (it != rgb_.end()) return it->second;
  const RgbFrame frame = read_ppm(path);
  last_px_ = frame.width;
  auto bytes = std::make_shared<std::vector<uint8_t>>(rgb_to_bytes(frame));
  rgb_.emplace(path, bytes);
  return bytes;
}

std::shared_ptr<const DepthFrame> FrameCache::depth(const std::string& path) {
  auto it = depth_.find(path);
  if (it != depth_.end()) return it->second;
  auto frame = std::make_shared<DepthFrame>(read_mdpt(path));
  depth_.emplace(path, frame);
  return frame;
}

std::vector<TrainItem> load_train_items(const SampleStore& store, FrameCache* cache,
                                        const std::vector<Provenance>& keep) {
  std::vector<TrainItem> items;
  for (const SampleRecord& r : store.records) {
    if (!keep.empty() &&
        std::find(keep.begin(), keep.end(), r.provenance) == keep.end()) {
      continue;
    }
    TrainItem item;
    const SampleWindow window = read_sample_window(r.window_path, store.history_len,
                                                   store.horizon, store.rate_hz);
    item.gt_future = window.future_ego;
    item.goal = r.goal;
    item.cam = r.cam_features;
    item.provenance = r.provenance;
    for (const auto& p : r.rgb_paths) item.frames.push_back(cache->rgb(p));
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace swnav
