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

#ifndef SWNAV_CURATION_HPP_
#define SWNAV_CURATION_HPP_

#include <map>
#include <string>
#include <vector>

#include "swnav/dataset.hpp"
#include "swnav/rng.hpp"
#include "swnav/scenegen.hpp"
#include "swnav/trajcore.hpp"

namespace swnav {

struct CurationConfig {
  double v_stop = 0.1;          // m/s: below this a segment counts as stopped
  double theta_turn = M_PI / 6; // net heading change that makes a turn
  double omega_max = 0.5;       // rad/s: spin-in-place detector
  double v_back = 0.05;         // m/s: backward-motion detector
  int n_abn = 5;                // consecutive frames before a drop
  double straight_cap = 0.5;    // max fraction of straights in the output
  int history_len = 16;
  int horizon = 40;
  int stride = 5;
  double goal_segment_prob = 0.5;  // segment-endpoint goals vs random-ahead
};

enum class GoalMode { kRandomAhead, kSegmentEndpoint };

Behavior classify_behavior(const Trajectory& segment, const CurationConfig& cfg);

/// Indices kept after capping the Straight share of the output; non-Straight
/// samples are always retained. Deterministic given the rng stream.
std::vector<int> balance_by_behavior(const std::vector<Behavior>& labels,
                                     double straight_cap, Rng& rng);

struct FilterDecision {
  bool keep = true;
  std::string reason;  // "rotation-while-still" | "backward"
};

FilterDecision filter_abnormal(const Trajectory& segment,
                               const std::vector<EgoState>& states,
                               const CurationConfig& cfg);

/// Goal point on the recorded path, in the world frame.
Vec2 define_goal_world(const Trajectory& traj, int t, GoalMode mode, Rng& rng);
/// Spec surface: same point expressed in the ego frame of pose t.
Vec2 define_goal(const Trajectory& traj, int t, GoalMode mode, Rng& rng);

/// One sliding window turned into a sample (pre-filter, pre-balance).
struct BuiltSample {
  SampleRecord record;
  SampleWindow window;
  int window_start = 0;
};

/// Sliding windows over the log, constant-velocity resampled, split into
/// ego-frame history/future, goals attached.
std::vector<BuiltSample> build_samples(const TrajLog& log,
                                       const std::vector<std::string>& rgb_paths,
                                       const std::vector<std::string>& depth_paths,
                                       const CameraModel& cam,
                                       const CurationConfig& cfg, Rng& rng,
                                       const std::string& log_id);

struct CurationReport {
  int windows = 0;
  int dropped_rotation = 0;
  int dropped_backward = 0;
  int balanced_out = 0;
  int kept = 0;
  std::map<Behavior, int> by_behavior;

  std::string to_text() const;
};

/// Full curation of a set of scenario bundles into a sample store on disk.
SampleStore curate_bundles(const std::vector<ScenarioBundle>& bundles,
                           const CurationConfig& cfg, uint64_t seed,
                           const std::string& out_dir, CurationReport* report);

}  // namespace swnav

#endif  // SWNAV_CURATION_HPP_
