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

#ifndef SWNAV_EXPANSION_HPP_
#define SWNAV_EXPANSION_HPP_

#include <string>
#include <vector>

#include "swnav/camgeom.hpp"
#include "swnav/dataset.hpp"
#include "swnav/rng.hpp"
#include "swnav/trajcore.hpp"

namespace swnav {

/// Sine drift profile over one training window: value(i) = alpha *
/// sin(pi * i / length) with length = T_h + T, so the drift starts at zero
/// and closes back to zero one step past the window end.
struct PerturbationProfile {
  double alpha = 0.0;
  int length = 0;  // T_h + T
  PerturbDirection direction = PerturbDirection::kLateral;
  std::vector<double> values;  // values[i] for i = 0..length-1

  double value_at(int idx) const {
    return alpha * std::sin(M_PI * static_cast<double>(idx) / length);
  }
};

PerturbationProfile perturbation_profile(double alpha, int history_len, int horizon,
                                         PerturbDirection direction);

/// Displace pose i along the local unit normal (lateral) or tangent
/// (longitudinal) of the path by values[i]. Headings follow the change in
/// local path direction, so a zero profile is an exact identity.
Trajectory perturb_trajectory(const Trajectory& world_traj,
                              const PerturbationProfile& profile);

struct ExpansionConfig {
  double c_min = 0.6;    // minimum render coverage per synthesized frame
  int splat_px = 2;
  double d_max = 50.0;   // unprojection depth cutoff
  double d_split = 8.0;  // foreground/background depth boundary
  double alpha_min = 0.2;
  double alpha_max = 1.0;
  double lateral_prob = 0.8;
};

struct CorrectivePair {
  std::vector<RgbFrame> history_frames;    // synthesized, oldest..newest
  std::vector<DepthFrame> history_depths;  // splat z-buffers
  std::vector<Pose> perturbed_history_world;
  Pose anchor_world;          // perturbed ego pose at the current frame
  Trajectory recovery_future; // ego frame of anchor_world, length T
  GoalEncoding goal;          // original goal re-expressed in the new frame
  double alpha = 0.0;
  PerturbDirection direction = PerturbDirection::kLateral;
  double min_coverage = 1.0;
};

/// Corrective pair from one sample: unproject each history frame, perturb the
/// window trajectory, re-render histories from the perturbed poses, and pair
/// them with a recovery future that rejoins the original path at the horizon
/// end.
CorrectivePair synthesize_corrective_pair(
    const SampleWindow& window, const Pose& anchor_world, const Vec2& goal_world,
    const std::vector<const RgbFrame*>& history_rgb,
    const std::vector<const DepthFrame*>& history_depth, const CameraModel& cam,
    double alpha, PerturbDirection direction, const ExpansionConfig& cfg);

// --- sensor augmentation ---

struct RelightParams {
  double gain = 1.0;
  double gamma = 1.0;
  std::array<double, 3> tint = {1.0, 1.0, 1.0};
  double strength_f = 0.1;
  double strength_b = 0.5;

  void validate() const;
};

struct ForegroundSplit {
  std::vector<uint8_t> mask;  // 1 where valid depth < d_split
  RgbFrame foreground;        // image on the mask, zero elsewhere
  RgbFrame background;        // complement
};

ForegroundSplit split_foreground(const RgbFrame& rgb, const DepthFrame& depth,
                                 double d_split);

/// Asymmetric relight: out = (1-s) * I + s * clip(tint * gain * I^gamma), with
/// s = strength_f on the depth-near mask and strength_b elsewhere.
RgbFrame relight_blend(const RgbFrame& rgb, const DepthFrame& depth,
                       const RelightParams& params, double d_split);

}  // namespace swnav

#endif  // SWNAV_EXPANSION_HPP_
