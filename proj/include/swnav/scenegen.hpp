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

#ifndef SWNAV_SCENEGEN_HPP_
#define SWNAV_SCENEGEN_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "swnav/camgeom.hpp"
#include "swnav/trajcore.hpp"

namespace swnav {

/// Axis-aligned box obstacle sitting in the world (z up, ground at z = 0).
struct Box {
  Eigen::Vector3d center;
  Eigen::Vector3d half;
  std::array<double, 3> rgb;
  bool wall = false;
};

/// Ground plane + boxes + a procedurally textured ground. The corridor
/// centerline the boxes were placed around is kept so the expert planner can
/// follow it.
struct World {
  uint64_t ground_seed = 0;
  std::vector<Box> boxes;
  std::vector<Pose> corridor;   // centerline samples, ~0.25 m spacing
  double corridor_step = 0.25;  // spacing of corridor samples, meters
};

struct Scenario {
  World world;
  TrajLog expert;  // world frame, fixed rate
  CameraModel cam;
  uint64_t seed = 0;
};

struct ScenarioConfig {
  double difficulty = 0.5;
  int n_frames = 150;
  double rate_hz = 5.0;
  int image_px = 64;
  double hfov = M_PI / 2;
  double cam_height = 0.40;
  double cam_forward = 0.15;
  double cam_tilt_down = 0.45;
  double corridor_half_width = 1.5;
  double r_robot = 0.40;
  double render_far = 60.0;
};

World generate_world(uint64_t seed, double difficulty,
                     const ScenarioConfig& cfg = ScenarioConfig{});

/// Follow the corridor at a smoothly varying speed with optional stop events.
/// Produces straight, turning and stopping stretches.
TrajLog plan_expert(const World& world, uint64_t seed,
                    const ScenarioConfig& cfg = ScenarioConfig{});

Scenario make_scenario(uint64_t seed, const ScenarioConfig& cfg = ScenarioConfig{});

/// Exact ray-cast render: analytic depth (camera-z, meters), flat-shaded
/// colors. Depth 0 marks sky / beyond render_far.
void render_frame(const World& world, const CameraModel& cam, const Pose& pose,
                  RgbFrame* rgb, DepthFrame* depth, double render_far = 60.0);

/// Distance from a 2D point to the (x, y) polyline of `poses`.
double point_to_polyline_distance(const std::vector<Pose>& poses, const Vec2& p);

// --- scenario bundles on disk ---

struct ScenarioBundle {
  Scenario scenario;
  std::string dir;
  std::vector<std::string> rgb_paths;    // one per frame
  std::vector<std::string> depth_paths;  // one per frame
};

/// Writes world.txt, cam.txt, traj.log, manifest.txt and per-frame PPM/MDPT1
/// renders under <dir>/frames/.
void save_scenario_bundle(const std::string& dir, const Scenario& scenario);
ScenarioBundle load_scenario_bundle(const std::string& dir);

// --- closed-loop probe ---

struct RolloutObs {
  std::vector<const RgbFrame*> frames;  // oldest..newest, length T_h
  std::vector<Pose> poses;              // world frame, aligned with frames
  GoalEncoding goal;
  const CameraModel* cam = nullptr;
};

/// Policy hook: returns the selected full-horizon trajectory in the ego frame
/// of the newest observation.
using RolloutPolicy = std::function<Trajectory(const RolloutObs&)>;

struct RolloutConfig {
  int history_len = 16;
  double dt = 0.2;
  double v_max = 1.5;
  double omega_max = 2.5;
  double goal_ahead_m = 3.0;
  double goal_radius = 1.0;
  int max_steps = 200;
};

struct RolloutStats {
  double max_lateral_dev = 0.0;
  double mean_lateral_dev = 0.0;
  bool goal_reached = false;
  int steps = 0;
  std::vector<Pose> trace;  // sim poses after takeover
};

/// Closed-loop unicycle rollout: render, predict, execute the first waypoint,
/// repeat. Deviation is measured against the expert path polyline.
RolloutStats rollout(const RolloutPolicy& policy, const Scenario& scenario,
                     const RolloutConfig& cfg = RolloutConfig{});

/// Recompute deviation statistics from a recorded trace (post-hoc check).
RolloutStats stats_from_trace(const std::vector<Pose>& trace,
                              const Scenario& scenario, const RolloutConfig& cfg);

}  // namespace swnav

#endif  // SWNAV_SCENEGEN_HPP_
