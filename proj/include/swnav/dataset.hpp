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

#ifndef SWNAV_DATASET_HPP_
#define SWNAV_DATASET_HPP_

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "swnav/camgeom.hpp"
#include "swnav/trajcore.hpp"

namespace swnav {

enum class Behavior { kStraight, kTurnLeft, kTurnRight, kStop };
enum class Provenance { kOriginal, kCorrective, kRelit };
enum class PerturbDirection { kLateral, kLongitudinal };

const char* to_string(Behavior b);
const char* to_string(Provenance p);
const char* to_string(PerturbDirection d);
Behavior behavior_from_string(const std::string& s);
Provenance provenance_from_string(const std::string& s);
PerturbDirection direction_from_string(const std::string& s);

/// One training sample as indexed on disk. Trajectories live in a per-sample
/// window file; images are referenced by path.
struct SampleRecord {
  std::string id;
  Provenance provenance = Provenance::kOriginal;
  Behavior behavior = Behavior::kStraight;
  double alpha = 0.0;
  PerturbDirection direction = PerturbDirection::kLateral;
  Pose anchor_world;  // ego anchor pose (world frame)
  Vec2 goal_world;
  GoalEncoding goal;
  std::array<double, 16> cam_features{};
  std::string window_path;              // history+future ego trajectories
  std::vector<std::string> rgb_paths;   // history frames, oldest..newest
  std::vector<std::string> depth_paths; // aligned with rgb_paths
};

struct SampleStore {
  int history_len = 16;
  int horizon = 40;
  double rate_hz = 5.0;
  std::vector<SampleRecord> records;
  std::string dir;
};

/// Per-sample window file: ego-frame history (T_h) + future (T) poses and the
/// raw world pose of each history frame.
struct SampleWindow {
  Trajectory history_ego;
  Trajectory future_ego;
  std::vector<Pose> frame_world_poses;
};

void write_sample_window(const std::string& path, const SampleWindow& window);
SampleWindow read_sample_window(const std::string& path, int history_len,
                                int horizon, double rate_hz);

/// Index: header `#STORE v1 T_h=<n> T=<n> rate_hz=<f>`, one record per line.
void write_sample_store(const SampleStore& store);
SampleStore read_sample_store(const std::string& dir);
void append_sample_records(SampleStore* store, std::vector<SampleRecord> extra);

/// Byte-level image cache keyed by path (8-bit payloads; decoded on use).
class FrameCache {
 public:
  std::shared_ptr<const std::vector<uint8_t>> rgb(const std::string& path);
  std::shared_ptr<const DepthFrame> depth(const std::string& path);
  int last_px() const { return last_px_; }

 private:
  std::map<std::string, std::shared_ptr<const std::vector<uint8_t>>> rgb_;
  std::map<std::string, std::shared_ptr<const DepthFrame>> depth_;
  int last_px_ = 0;
};

/// Everything the trainer needs for one sample.
struct TrainItem {
  std::vector<std::shared_ptr<const std::vector<uint8_t>>> frames;
  GoalEncoding goal;
  std::array<double, 16> cam{};
  Trajectory gt_future;  // ego frame, length T
  Provenance provenance = Provenance::kOriginal;
};

/// Loads (optionally provenance-filtered) train items from a store.
std::vector<TrainItem> load_train_items(const SampleStore& store, FrameCache* cache,
                                        const std::vector<Provenance>& keep);

}  // namespace swnav

#endif  // SWNAV_DATASET_HPP_
