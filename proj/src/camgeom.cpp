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

#include "swnav/camgeom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "swnav/errors.hpp"

namespace swnav {

Eigen::Matrix3d rotation_from_ypr(double yaw, double pitch, double roll) {
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

void ypr_from_rotation(const Eigen::Matrix3d& R, double* yaw, double* pitch,
                       double* roll) {
  // ZYX extraction; gimbal-safe branch at |pitch| = pi/2.
  const double sy = -R(2, 0);
  if (std::abs(sy) < 1.0 - 1e-12) {
    *pitch = std::asin(sy);
    *yaw = std::atan2(R(1, 0), R(0, 0));
    *roll = std::atan2(R(2, 1), R(2, 2));
  } else {
    *pitch = sy > 0 ? M_PI / 2 : -M_PI / 2;
    *yaw = std::atan2(-R(0, 1), R(1, 1));
    *roll = 0.0;
  }
}

Rigid3 pose_to_rigid(const Pose& pose) {
  Rigid3 tf;
  tf.R = Eigen::AngleAxisd(pose.psi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  tf.t = Eigen::Vector3d(pose.x, pose.y, 0.0);
  return tf;
}

std::array<double, 16> CameraModel::feature_vector() const {
  return {fx,        fy,        cx,  cy,    static_cast<double>(width),
          static_cast<double>(height), t_cam.x(), t_cam.y(), t_cam.z(),
          yaw,       pitch,     roll, 0.0, 0.0, 0.0, 0.0};
}

CameraModel CameraModel::from_feature_vector(const std::array<double, 16>& f) {
  CameraModel cam;
  cam.fx = f[0];
  cam.fy = f[1];
  cam.cx = f[2];
  cam.cy = f[3];
  cam.width = static_cast<int>(f[4]);
  cam.height = static_cast<int>(f[5]);
  cam.t_cam = Eigen::Vector3d(f[6], f[7], f[8]);
  cam.yaw = f[9];
  cam.pitch = f[10];
  cam.roll = f[11];
  return cam;
}

CameraModel CameraModel::forward_facing(int width, int height, double hfov,
                                        const Eigen::Vector3d& t_cam,
                                        double tilt_down) {
  CameraModel cam;
  cam.width = width;
  cam.height = height;
  cam.fx = 0.5 * width / std::tan(0.5 * hfov);
  cam.fy = cam.fx;
  cam.cx = 0.5 * (width - 1);
  cam.cy = 0.5 * (height - 1);
  cam.t_cam = t_cam;
  // Optical frame (x right, y down, z forward) aligned with the robot's
  // forward axis, then tilted down about the robot's left axis.
  const Eigen::Matrix3d base =
      rotation_from_ypr(-M_PI / 2, 0.0, -M_PI / 2);
  const Eigen::Matrix3d tilt =
      Eigen::AngleAxisd(tilt_down, Eigen::Vector3d::UnitY()).toRotationMatrix();
  ypr_from_rotation(tilt * base, &cam.yaw, &cam.pitch, &cam.roll);
  return cam;
}

RgbFrame RgbFrame::fill(int width, int height, double r, double g, double b) {
  RgbFrame f;
  f.width = width;
  f.height = height;
  f.values.resize(3 * static_cast<size_t>(width) * height);
  for (size_t i = 0; i < f.values.size(); i += 3) {
    f.values[i] = r;
    f.values[i + 1] = g;
    f.values[i + 2] = b;
  }
  return f;
}

ColoredPointCloud unproject(const DepthFrame& depth, const RgbFrame& rgb,
                            const CameraModel& cam, double d_max) {
  if (depth.width != cam.width || depth.height != cam.height ||
      rgb.width != cam.width || rgb.height != cam.height) {
    throw DimensionMismatch("unproject: depth/rgb/camera dimensions disagree");
  }
  const Rigid3 ex = cam.extrinsic();
  ColoredPointCloud cloud;
  cloud.frame_id = "robot";
  cloud.points.reserve(static_cast<size_t>(cam.width) * cam.height);
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      const double d = depth.at(u, v);
      if (!(std::isfinite(d) && d > 0.0 && d <= d_max)) continue;
      const Eigen::Vector3d p_cam(d * (u - cam.cx) / cam.fx,
                                  d * (v - cam.cy) / cam.fy, d);
      const double* c = rgb.px(u, v);
      cloud.points.push_back(ColoredPoint{ex.apply(p_cam), {c[0], c[1], c[2]}});
    }
  }
  return cloud;
}

Rigid3 compose_rigid(const Pose& view_pose, const Rigid3& cam_extrinsic) {
  // world->camera = (robot->world ∘ camera->robot)^-1
  return pose_to_rigid(view_pose).compose(cam_extrinsic).inverse();
}

ColoredPointCloud transform_cloud(const ColoredPointCloud& cloud, const Rigid3& tf,
                                  const std::string& frame_id) {
  ColoredPointCloud out;
  out.frame_id = frame_id;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    out.points.push_back(ColoredPoint{tf.apply(p.xyz), p.rgb});
  }
  return out;
}

double SplatResult::coverage_fraction() const {
  if (coverage.empty()) return 0.0;
  size_t n = 0;
  for (uint8_t c : coverage) n += c;
  return static_cast<double>(n) / coverage.size();
}

SplatResult splat_render(const ColoredPointCloud& cloud, const CameraModel& cam,
                         const Pose& view_pose, int splat_px) {
  SplatResult res;
  res.image = RgbFrame::fill(cam.width, cam.height, 0.5, 0.5, 0.5);
  res.coverage.assign(static_cast<size_t>(cam.width) * cam.height, 0);
  res.depth = DepthFrame::zero(cam.width, cam.height);
  std::vector<double> zbuf(static_cast<size_t>(cam.width) * cam.height,
                           std::numeric_limits<double>::infinity());

  const Rigid3 world_to_cam = compose_rigid(view_pose, cam.extrinsic());
  const double half = 0.5 * (splat_px - 1);

  for (const auto& pt : cloud.points) {
    const Eigen::Vector3d p = world_to_cam.apply(pt.xyz);
    if (p.z() <= 1e-9) continue;  // behind the image plane
    const double u = cam.fx * p.x() / p.z() + cam.cx;
    const double v = cam.fy * p.y() / p.z() + cam.cy;
    // Centered footprint; for splat_px = 1 this is nearest-pixel rounding.
    const int u0 = static_cast<int>(std::floor(u - half + 0.5));
    const int v0 = static_cast<int>(std::floor(v - half + 0.5));
    for (int dv = 0; dv < splat_px; ++dv) {
      const int vv = v0 + dv;
      if (vv < 0 || vv >= cam.height) continue;
      for (int du = 0; du < splat_px; ++du) {
        const int uu = u0 + du;
        if (uu < 0 || uu >= cam.width) continue;
        const size_t idx = static_cast<size_t>(vv) * cam.width + uu;
        double* dst = res.image.px(uu, vv);
        const bool closer = p.z() < zbuf[idx];
        const bool tie = p.z() == zbuf[idx] &&
                         std::lexicographical_compare(pt.rgb.begin(), pt.rgb.end(),
                                                      dst, dst + 3);
        if (closer || tie) {
          zbuf[idx] = p.z();
          dst[0] = pt.rgb[0];
          dst[1] = pt.rgb[1];
          dst[2] = pt.rgb[2];
          res.coverage[idx] = 1;
          res.depth.values[idx] = p.z();
        }
      }
    }
  }
  return res;
}

// --- file formats ---

void write_ppm(const std::string& path, const RgbFrame& frame) {
  std::ofstream fs(path, std::ios::binary);
  if (!fs) throw IoError("cannot open for write: " + path);
  fs << "P6\n" << frame.width << " " << frame.height << "\n255\n";
  const std::vector<uint8_t> bytes = rgb_to_bytes(frame);
  fs.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!fs) throw IoError("write failed: " + path);
}

RgbFrame read_ppm(const std::string& path) {
  std::ifstream fs(path, std::ios::binary);
  if (!fs) throw IoError("cannot open: " + path);
  std::string magic;
  int w = 0, h = 0, maxv = 0;
  fs >> magic >> w >> h >> maxv;
  if (magic != "P6" || w <= 0 || h <= 0 || maxv != 255) {
    throw IoError("bad PPM header: " + path);
  }
  fs.get();  // single whitespace after maxval
  std::vector<uint8_t> bytes(3 * static_cast<size_t>(w) * h);
  fs.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!fs) throw IoError("truncated PPM: " + path);
  return rgb_from_bytes(bytes, w, h);
}

std::vector<uint8_t> rgb_to_bytes(const RgbFrame& frame) {
  std::vector<uint8_t> bytes(frame.values.size());
  for (size_t i = 0; i < frame.values.size(); ++i) {
    const double v = std::clamp(frame.values[i], 0.0, 1.0);
    bytes[i] = static_cast<uint8_t>(std::lround(v * 255.0));
  }
  return bytes;
}

RgbFrame rgb_from_bytes(const std::vector<uint8_t>& bytes, int width, int height) {
  if (bytes.size() != 3 * static_cast<size_t>(width) * height) {
    throw DimensionMismatch("rgb_from_bytes: payload size mismatch");
  }
  RgbFrame frame;
  frame.width = width;
  frame.height = height;
  frame.values.resize(bytes.size());
  for (size_t i = 0; i < bytes.size(); ++i) frame.values[i] = bytes[i] / 255.0;
  return frame;
}

void write_mdpt(const std::string& path, const DepthFrame& depth) {
  std::ofstream fs(path, std::ios::binary);
  if (!fs) throw IoError("cannot open for write: " + path);
  fs << "MDPT1\n" << depth.width << " " << depth.height << "\n";
  std::vector<float> payload(depth.values.size());
  for (size_t i = 0; i < depth.values.size(); ++i) {
    payload[i] = static_cast<float>(depth.values[i]);
  }
  static_assert(std::endian::native == std::endian::little,
                "MDPT1 writer assumes a little-endian host");
  fs.write(reinterpret_cast<const char*>(payload.data()),
           static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!fs) throw IoError("write failed: " + path);
}

DepthFrame read_mdpt(const std::string& path) {
  std::ifstream fs(path, std::ios::binary);
  if (!fs) throw IoError("cannot open: " + path);
  std::string magic;
  int w = 0, h = 0;
  fs >> magic >> w >> h;
  if (magic != "MDPT1" || w <= 0 || h <= 0) throw IoError("bad MDPT1 header: " + path);
  fs.get();
  std::vector<float> payload(static_cast<size_t>(w) * h);
  fs.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!fs) throw IoError("truncated MDPT1: " + path);
  DepthFrame depth;
  depth.width = w;
  depth.height = h;
  depth.values.assign(payload.begin(), payload.end());
  return depth;
}

}  // namespace swnav
