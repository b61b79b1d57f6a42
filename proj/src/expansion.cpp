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

#include "swnav/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "swnav/errors.hpp"

namespace swnav {

PerturbationProfile perturbation_profile(double alpha, int history_len, int horizon,
                                         PerturbDirection direction) {
  if (alpha < 0.0) throw Error("perturbation_profile: alpha must be >= 0");
  if (history_len <= 0 || horizon <= 0) {
    throw Error("perturbation_profile: window lengths must be positive");
  }
  PerturbationProfile profile;
  profile.alpha = alpha;
  profile.length = history_len + horizon;
  profile.direction = direction;
  profile.values.resize(profile.length);
  for (int i = 0; i < profile.length; ++i) profile.values[i] = profile.value_at(i);
  return profile;
}

namespace {

Vec2 tangent_at(const std::vector<Pose>& poses, int i) {
  const int n = static_cast<int>(poses.size());
  const int a = std::max(0, i - 1);
  const int b = std::min(n - 1, i + 1);
  double dx = poses[b].x - poses[a].x;
  double dy = poses[b].y - poses[a].y;
  const double len = std::hypot(dx, dy);
  if (len < 1e-12) {
    // Stationary stretch: fall back to the stored heading.
    return Vec2{std::cos(poses[i].psi), std::sin(poses[i].psi)};
  }
  return Vec2{dx / len, dy / len};
}

double fd_heading_delta(const std::vector<Pose>& displaced,
                        const std::vector<Pose>& original, int i) {
  // Heading change implied by the displacement, from forward differences.
  const int n = static_cast<int>(displaced.size());
  const int j = i + 1 < n ? i + 1 : i;
  const int k = i + 1 < n ? i : i - 1;
  if (k < 0) return 0.0;
  const double ddx = displaced[j].x - displaced[k].x;
  const double ddy = displaced[j].y - displaced[k].y;
  const double odx = original[j].x - original[k].x;
  const double ody = original[j].y - original[k].y;
  if (std::hypot(ddx, ddy) < 1e-9 || std::hypot(odx, ody) < 1e-9) return 0.0;
  return wrap_angle(std::atan2(ddy, ddx) - std::atan2(ody, odx));
}

}  // namespace

Trajectory perturb_trajectory(const Trajectory& world_traj,
                              const PerturbationProfile& profile) {
  if (world_traj.size() != profile.length) {
    throw LengthMismatch("perturb_trajectory: trajectory/profile length mismatch");
  }
  Trajectory out = world_traj;
  for (int i = 0; i < world_traj.size(); ++i) {
    const Vec2 tan = tangent_at(world_traj.poses, i);
    const Vec2 dir = profile.direction == PerturbDirection::kLateral
                         ? Vec2{-tan.y, tan.x}
                         : tan;
    out.poses[i].x += profile.values[i] * dir.x;
    out.poses[i].y += profile.values[i] * dir.y;
  }
  for (int i = 0; i < out.size(); ++i) {
    out.poses[i].psi = wrap_angle(world_traj.poses[i].psi +
                                  fd_heading_delta(out.poses, world_traj.poses, i));
  }
  return out;
}

CorrectivePair synthesize_corrective_pair(
    const SampleWindow& window, const Pose& anchor_world, const Vec2& goal_world,
    const std::vector<const RgbFrame*>& history_rgb,
    const std::vector<const DepthFrame*>& history_depth, const CameraModel& cam,
    double alpha, PerturbDirection direction, const ExpansionConfig& cfg) {
  const int t_h = window.history_ego.size();
  const int t_fut = window.future_ego.size();
  if (static_cast<int>(history_rgb.size()) != t_h ||
      static_cast<int>(history_depth.size()) != t_h ||
      static_cast<int>(window.frame_world_poses.size()) != t_h) {
    throw LengthMismatch("synthesize_corrective_pair: history length mismatch");
  }

  // Window in the world frame.
  Trajectory window_world;
  window_world.rate_hz = window.history_ego.rate_hz;
  window_world.frame_id = "world";
  for (const Pose& p : window.history_ego.poses) {
    window_world.poses.push_back(transform_pose_to_world(p, anchor_world));
  }
  for (const Pose& p : window.future_ego.poses) {
    window_world.poses.push_back(transform_pose_to_world(p, anchor_world));
  }

  const PerturbationProfile profile =
      perturbation_profile(alpha, t_h, t_fut, direction);
  const Trajectory perturbed = perturb_trajectory(window_world, profile);

  CorrectivePair pair;
  pair.alpha = alpha;
  pair.direction = direction;
  pair.anchor_world = perturbed.poses[t_h - 1];

  // Re-render each history frame from its perturbed pose, using the colored
  // cloud of that frame (nearest in time).
  for (int i = 0; i < t_h; ++i) {
    ColoredPointCloud cloud = unproject(*history_depth[i], *history_rgb[i], cam,
                                        cfg.d_max);
    cloud = transform_cloud(cloud, pose_to_rigid(window.frame_world_poses[i]),
                            "world");
    SplatResult splat = splat_render(cloud, cam, perturbed.poses[i], cfg.splat_px);
    const double coverage = splat.coverage_fraction();
    pair.min_coverage = std::min(pair.min_coverage, coverage);
    if (coverage < cfg.c_min) {
      throw InsufficientCoverage("synthesize_corrective_pair: coverage " +
                                 std::to_string(coverage) + " below threshold");
    }
    pair.history_frames.push_back(std::move(splat.image));
    pair.history_depths.push_back(std::move(splat.depth));
    pair.perturbed_history_world.push_back(perturbed.poses[i]);
  }

  // Recovery supervision: the original future shifted by the tail of the
  // profile, evaluated one step ahead so the final waypoint lands exactly on
  // the original path (the profile closes at index T_h + T).
  Trajectory recovery_world;
  recovery_world.rate_hz = window_world.rate_hz;
  recovery_world.frame_id = "world";
  for (int j = 0; j < t_fut; ++j) {
    const int idx = t_h + j;
    const Vec2 tan = tangent_at(window_world.poses, idx);
    const Vec2 dir = direction == PerturbDirection::kLateral ? Vec2{-tan.y, tan.x}
                                                             : tan;
    const double shift = profile.value_at(idx + 1);
    Pose p = window_world.poses[idx];
    p.x += shift * dir.x;
    p.y += shift * dir.y;
    recovery_world.poses.push_back(p);
  }
  const std::vector<Pose> orig_future(window_world.poses.begin() + t_h,
                                      window_world.poses.end());
  for (int j = 0; j < t_fut; ++j) {
    recovery_world.poses[j].psi = wrap_angle(
        orig_future[j].psi + fd_heading_delta(recovery_world.poses, orig_future, j));
  }

  pair.recovery_future = transform_to_ego(recovery_world, pair.anchor_world);
  pair.goal = encode_goal(transform_point_to_ego(goal_world, pair.anchor_world));
  return pair;
}

// --- sensor augmentation ---

void RelightParams::validate() const {
  if (!(gain > 0.0) || !(gamma > 0.0)) {
    throw Error("RelightParams: gain and gamma must be positive");
  }
  if (!(0.0 <= strength_f && strength_f <= strength_b && strength_b <= 1.0)) {
    throw Error("RelightParams: need 0 <= strength_f <= strength_b <= 1");
  }
}

ForegroundSplit split_foreground(const RgbFrame& rgb, const DepthFrame& depth,
                                 double d_split) {
  if (rgb.width != depth.width || rgb.height != depth.height) {
    throw DimensionMismatch("split_foreground: rgb/depth dimensions disagree");
  }
  ForegroundSplit split;
  split.mask.assign(static_cast<size_t>(rgb.width) * rgb.height, 0);
  split.foreground = RgbFrame::fill(rgb.width, rgb.height, 0, 0, 0);
  split.background = RgbFrame::fill(rgb.width, rgb.height, 0, 0, 0);
  for (int v = 0; v < rgb.height; ++v) {
    for (int u = 0; u < rgb.width; ++u) {
      const size_t i = static_cast<size_t>(v) * rgb.width + u;
      const bool fg = depth.valid(u, v) && depth.at(u, v) < d_split;
      split.mask[i] = fg ? 1 : 0;
      const double* src = rgb.px(u, v);
      double* dst = fg ? split.foreground.px(u, v) : split.background.px(u, v);
      dst[0] = src[0];
      dst[1] = src[1];
      dst[2] = src[2];
    }
  }
  return split;
}

RgbFrame relight_blend(const RgbFrame& rgb, const DepthFrame& depth,
                       const RelightParams& params, double d_split) {
  params.validate();
  if (rgb.width != depth.width || rgb.height != depth.height) {
    throw DimensionMismatch("relight_blend: rgb/depth dimensions disagree");
  }
  RgbFrame out = rgb;
  for (int v = 0; v < rgb.height; ++v) {
    for (int u = 0; u < rgb.width; ++u) {
      const bool fg = depth.valid(u, v) && depth.at(u, v) < d_split;
      const double s = fg ? params.strength_f : params.strength_b;
      const double* src = rgb.px(u, v);
      double* dst = out.px(u, v);
      for (int ch = 0; ch < 3; ++ch) {
        const double lit = std::clamp(
            params.tint[ch] * params.gain * std::pow(src[ch], params.gamma), 0.0,
            1.0);
        dst[ch] = std::clamp((1.0 - s) * src[ch] + s * lit, 0.0, 1.0);
      }
    }
  }
  return out;
}

}  // namespace swnav
