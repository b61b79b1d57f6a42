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

#ifndef SWNAV_TRAJCORE_HPP_
#define SWNAV_TRAJCORE_HPP_

#include <string>
#include <vector>

namespace swnav {

/// 2D pose: x forward, y left, heading psi counter-clockwise from +x,
/// wrapped to (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Fixed-rate pose sequence. Timestamps are implicit: pose i is at time
/// i / rate_hz relative to the first pose.
struct Trajectory {
  std::vector<Pose> poses;
  double rate_hz = 5.0;
  std::string frame_id = "world";

  int size() const { return static_cast<int>(poses.size()); }
};

struct EgoState {
  Pose pose;       // world frame
  double v = 0.0;  // m/s
  double omega = 0.0;  // rad/s
};

/// Goal as (distance, unit direction) in the ego frame.
struct GoalEncoding {
  double d = 0.0;
  double cos_phi = 1.0;
  double sin_phi = 0.0;
};

/// Wrap an angle to (-pi, pi].
double wrap_angle(double theta);

/// Express `world` relative to `anchor` (anchor maps to the origin with zero
/// heading).
Pose transform_pose_to_ego(const Pose& world, const Pose& anchor);
/// Inverse of transform_pose_to_ego.
Pose transform_pose_to_world(const Pose& ego, const Pose& anchor);
Vec2 transform_point_to_ego(const Vec2& world, const Pose& anchor);
Vec2 transform_point_to_world(const Vec2& ego, const Pose& anchor);

Trajectory transform_to_ego(const Trajectory& world_traj, const Pose& anchor_pose);
Trajectory transform_to_world(const Trajectory& ego_traj, const Pose& anchor_pose);

GoalEncoding encode_goal(const Vec2& goal_xy);

/// Polyline length over (x, y).
double arc_length(const Trajectory& traj);

/// Resample to n_out poses equidistant in arc length along the input
/// polyline. Positions interpolate linearly on the polyline; headings use
/// shortest-arc interpolation between the bracketing input poses; endpoints
/// are preserved exactly. A zero-length path yields n_out copies of the
/// first pose and sets *zero_length (when given) instead of failing.
Trajectory resample_constant_velocity(const Trajectory& traj, int n_out,
                                      bool* zero_length = nullptr);

/// Shortest-arc heading interpolation: psi_a towards psi_b by fraction u.
double slerp_heading(double psi_a, double psi_b, double u);

/// Pose log with per-frame speed and yaw rate, as stored on disk.
struct TrajLog {
  Trajectory traj;
  std::vector<double> v;
  std::vector<double> omega;

  std::vector<EgoState> ego_states() const;
};

/// Line-oriented log format: header `#TRAJ v1 rate_hz=<f> frame=<s>`, then
/// one `t_index x y psi v omega` record per line.
void write_traj_log(const std::string& path, const TrajLog& log);
TrajLog read_traj_log(const std::string& path);

}  // namespace swnav

#endif  // SWNAV_TRAJCORE_HPP_
