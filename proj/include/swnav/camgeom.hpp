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

#ifndef SWNAV_CAMGEOM_HPP_
#define SWNAV_CAMGEOM_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "swnav/trajcore.hpp"

namespace swnav {

/// Rigid transform y = R x + t.
struct Rigid3 {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return R * p + t; }
  Rigid3 inverse() const { return Rigid3{R.transpose(), -(R.transpose() * t)}; }
  Rigid3 compose(const Rigid3& other) const {  // this ∘ other
    return Rigid3{R * other.R, R * other.t + t};
  }
};

/// R = Rz(yaw) * Ry(pitch) * Rx(roll).
Eigen::Matrix3d rotation_from_ypr(double yaw, double pitch, double roll);
/// Inverse of rotation_from_ypr (ZYX Euler extraction).
void ypr_from_rotation(const Eigen::Matrix3d& R, double* yaw, double* pitch,
                       double* roll);

/// Lift a 2D pose to the robot->world rigid transform (z up, ground plane z=0).
Rigid3 pose_to_rigid(const Pose& pose);

/// Pinhole camera. The camera frame is the usual optical convention: x right,
/// y down, z along the optical axis. `extrinsic` maps camera-frame points into
/// the robot frame (x forward, y left, z up).
struct CameraModel {
  double fx = 1.0, fy = 1.0;
  double cx = 0.0, cy = 0.0;
  int width = 0, height = 0;
  Eigen::Vector3d t_cam = Eigen::Vector3d::Zero();  // camera origin in robot frame
  double yaw = 0.0, pitch = 0.0, roll = 0.0;        // camera->robot rotation, ZYX

  Rigid3 extrinsic() const { return Rigid3{rotation_from_ypr(yaw, pitch, roll), t_cam}; }

  /// [fx, fy, cx, cy, width, height, tx, ty, tz, yaw, pitch, roll, 0, 0, 0, 0]
  std::array<double, 16> feature_vector() const;
  static CameraModel from_feature_vector(const std::array<double, 16>& f);

  /// Camera mounted at `t_cam`, optical axis pointing forward (+x of the
  /// robot) and tilted down by `tilt_down` radians. hfov is the horizontal
  /// field of view.
  static CameraModel forward_facing(int width, int height, double hfov,
                                    const Eigen::Vector3d& t_cam,
                                    double tilt_down = 0.0);
};

/// Metric depth grid; entries <= 0 or non-finite are invalid.
struct DepthFrame {
  int width = 0, height = 0;
  std::vector<double> values;  // row-major, meters

  double at(int u, int v) const { return values[static_cast<size_t>(v) * width + u]; }
  double& at(int u, int v) { return values[static_cast<size_t>(v) * width + u]; }
  bool valid(int u, int v) const {
    const double d = at(u, v);
    return std::isfinite(d) && d > 0.0;
  }
  static DepthFrame zero(int width, int height) {
    return DepthFrame{width, height, std::vector<double>(static_cast<size_t>(width) * height, 0.0)};
  }
};

/// RGB image with channels in [0, 1], interleaved row-major.
struct RgbFrame {
  int width = 0, height = 0;
  std::vector<double> values;  // 3 * width * height

  const double* px(int u, int v) const {
    return &values[3 * (static_cast<size_t>(v) * width + u)];
  }
  double* px(int u, int v) { return &values[3 * (static_cast<size_t>(v) * width + u)]; }
  static RgbFrame fill(int width, int height, double r, double g, double b);
};

struct ColoredPoint {
  Eigen::Vector3d xyz;
  std::array<double, 3> rgb;
};

struct ColoredPointCloud {
  std::vector<ColoredPoint> points;
  std::string frame_id = "robot";
};

/// Back-project every valid depth pixel into the robot frame, copying color.
/// Depths above d_max are treated as invalid.
ColoredPointCloud unproject(const DepthFrame& depth, const RgbFrame& rgb,
                            const CameraModel& cam, double d_max = 50.0);

/// world->camera transform for a camera whose robot sits at view_pose.
Rigid3 compose_rigid(const Pose& view_pose, const Rigid3& cam_extrinsic);

ColoredPointCloud transform_cloud(const ColoredPointCloud& cloud, const Rigid3& tf,
                                  const std::string& frame_id);

struct SplatResult {
  RgbFrame image;
  std::vector<uint8_t> coverage;  // 1 where >= 1 splat landed
  DepthFrame depth;               // z-buffer (0 where uncovered)

  double coverage_fraction() const;
};

/// Project the cloud through the pinhole camera at view_pose and splat each
/// point as a splat_px-sided square with z-buffering. Uncovered pixels are
/// filled with mid-gray. Equal-depth ties resolve to the lexicographically
/// smaller color so the result is independent of point order.
SplatResult splat_render(const ColoredPointCloud& cloud, const CameraModel& cam,
                         const Pose& view_pose, int splat_px = 2);

// --- image / depth file formats ---

/// Binary PPM (P6), 8-bit.
void write_ppm(const std::string& path, const RgbFrame& frame);
RgbFrame read_ppm(const std::string& path);

/// Raw 8-bit PPM payload (no float conversion), for compact caching.
std::vector<uint8_t> rgb_to_bytes(const RgbFrame& frame);
RgbFrame rgb_from_bytes(const std::vector<uint8_t>& bytes, int width, int height);

/// Depth format: magic `MDPT1`, newline, ASCII `width height`, newline, then
/// width*height little-endian float32, row-major, meters; NaN/0 = invalid.
void write_mdpt(const std::string& path, const DepthFrame& depth);
DepthFrame read_mdpt(const std::string& path);

}  // namespace swnav

#endif  // SWNAV_CAMGEOM_HPP_
