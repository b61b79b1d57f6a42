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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "swnav/camgeom.hpp"
#include "swnav/errors.hpp"
#include "swnav/rng.hpp"

using namespace swnav;

namespace {

CameraModel identity_camera(int px) {
  // Camera frame == robot frame: useful for constructing analytic cases.
  CameraModel cam;
  cam.width = px;
  cam.height = px;
  cam.fx = cam.fy = px / 2.0;
  cam.cx = cam.cy = (px - 1) / 2.0;
  return cam;
}

DepthFrame random_depth(int px, Rng& rng, double invalid_p = 0.2) {
  DepthFrame d = DepthFrame::zero(px, px);
  for (double& v : d.values) {
    v = rng.bernoulli(invalid_p) ? 0.0 : rng.uniform(0.5, 10.0);
  }
  return d;
}

RgbFrame random_rgb(int px, Rng& rng) {
  RgbFrame f = RgbFrame::fill(px, px, 0, 0, 0);
  for (double& v : f.values) v = rng.uniform(0.0, 1.0);
  return f;
}

}  // namespace

TEST_CASE("unproject principal and 45-degree rays") {
  CameraModel cam = identity_camera(9);
  cam.fx = cam.fy = 4.0;
  cam.cx = cam.cy = 4.0;
  DepthFrame depth = DepthFrame::zero(9, 9);
  RgbFrame rgb = RgbFrame::fill(9, 9, 0.25, 0.5, 0.75);

  SUBCASE("principal ray") {
    depth.at(4, 4) = 2.0;
    const ColoredPointCloud cloud = unproject(depth, rgb, cam);
    REQUIRE(cloud.points.size() == 1);
    CHECK(cloud.points[0].xyz.x() == doctest::Approx(0.0));
    CHECK(cloud.points[0].xyz.y() == doctest::Approx(0.0));
    CHECK(cloud.points[0].xyz.z() == doctest::Approx(2.0));
    CHECK(cloud.points[0].rgb[0] == doctest::Approx(0.25));
  }
  SUBCASE("45-degree ray") {
    depth.at(8, 4) = 1.0;  // u = cx + fx
    const ColoredPointCloud cloud = unproject(depth, rgb, cam);
    REQUIRE(cloud.points.size() == 1);
    CHECK(cloud.points[0].xyz.x() == doctest::Approx(1.0));
    CHECK(cloud.points[0].xyz.y() == doctest::Approx(0.0));
    CHECK(cloud.points[0].xyz.z() == doctest::Approx(1.0));
  }
  SUBCASE("all-invalid depth gives an empty cloud") {
    const ColoredPointCloud cloud = unproject(depth, rgb, cam);
    CHECK(cloud.points.empty());
  }
}

TEST_CASE("unproject point count equals valid pixels") {
  Rng rng(5);
  const CameraModel cam = identity_camera(16);
  const DepthFrame depth = random_depth(16, rng);
  const RgbFrame rgb = random_rgb(16, rng);
  size_t valid = 0;
  for (int v = 0; v < 16; ++v) {
    for (int u = 0; u < 16; ++u) {
      if (depth.valid(u, v)) ++valid;
    }
  }
  CHECK(unproject(depth, rgb, cam).points.size() == valid);
}

TEST_CASE("unproject rejects mismatched dimensions") {
  const CameraModel cam = identity_camera(8);
  const DepthFrame depth = DepthFrame::zero(9, 9);
  const RgbFrame rgb = RgbFrame::fill(8, 8, 0, 0, 0);
  CHECK_THROWS_AS(unproject(depth, rgb, cam), DimensionMismatch);
}

TEST_CASE("compose_rigid basics") {
  SUBCASE("identity pose and extrinsic") {
    const Rigid3 tf = compose_rigid(Pose{0, 0, 0}, Rigid3{});
    CHECK((tf.R - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(tf.t.norm() < 1e-12);
  }
  SUBCASE("yaw pi then -pi cancels") {
    const Rigid3 a = pose_to_rigid(Pose{0, 0, M_PI});
    const Rigid3 b = pose_to_rigid(Pose{0, 0, -M_PI});
    const Rigid3 c = a.compose(b);
    CHECK((c.R - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  }
  SUBCASE("translations commute") {
    const Rigid3 a = pose_to_rigid(Pose{1, 0, 0});
    const Rigid3 b = pose_to_rigid(Pose{0, 1, 0});
    const Rigid3 c = a.compose(b);
    CHECK(c.t.x() == doctest::Approx(1.0));
    CHECK(c.t.y() == doctest::Approx(1.0));
  }
}

TEST_CASE("projection inverts unprojection within half a pixel") {
  Rng rng(9);
  const int px = 16;
  const CameraModel cam = identity_camera(px);
  const DepthFrame depth = random_depth(px, rng, 0.0);
  const RgbFrame rgb = random_rgb(px, rng);
  const ColoredPointCloud cloud = unproject(depth, rgb, cam);
  const Rigid3 world_to_cam = compose_rigid(Pose{0, 0, 0}, cam.extrinsic());
  size_t i = 0;
  for (int v = 0; v < px; ++v) {
    for (int u = 0; u < px; ++u) {
      const Eigen::Vector3d p = world_to_cam.apply(cloud.points[i++].xyz);
      const double up = cam.fx * p.x() / p.z() + cam.cx;
      const double vp = cam.fy * p.y() / p.z() + cam.cy;
      CHECK(std::abs(up - u) < 0.5);
      CHECK(std::abs(vp - v) < 0.5);
    }
  }
}

TEST_CASE("splat round trip reproduces source colors") {
  Rng rng(13);
  const int px = 16;
  const CameraModel cam = identity_camera(px);
  for (int trial = 0; trial < 5; ++trial) {
    const DepthFrame depth = random_depth(px, rng);
    const RgbFrame rgb = random_rgb(px, rng);
    const ColoredPointCloud cloud = unproject(depth, rgb, cam);
    const SplatResult res = splat_render(cloud, cam, Pose{0, 0, 0}, 1);
    for (int v = 0; v < px; ++v) {
      for (int u = 0; u < px; ++u) {
        const size_t idx = static_cast<size_t>(v) * px + u;
        CHECK(res.coverage[idx] == (depth.valid(u, v) ? 1 : 0));
        if (res.coverage[idx]) {
          for (int ch = 0; ch < 3; ++ch) {
            CHECK(res.image.px(u, v)[ch] ==
                  doctest::Approx(rgb.px(u, v)[ch]).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("z-buffer keeps the nearest point") {
  const CameraModel cam = identity_camera(9);  // integer principal point (4, 4)
  ColoredPointCloud cloud;
  // Two points on the principal ray at depths 1 and 2.
  cloud.points.push_back({Eigen::Vector3d(0, 0, 2), {1, 0, 0}});
  cloud.points.push_back({Eigen::Vector3d(0, 0, 1), {0, 1, 0}});
  const SplatResult res = splat_render(cloud, cam, Pose{0, 0, 0}, 1);
  const int u = static_cast<int>(cam.cx);
  CHECK(res.image.px(u, u)[1] == doctest::Approx(1.0));
  CHECK(res.depth.at(u, u) == doctest::Approx(1.0));
}

TEST_CASE("splat result is independent of point order") {
  Rng rng(17);
  const CameraModel cam = identity_camera(12);
  const DepthFrame depth = random_depth(12, rng);
  const RgbFrame rgb = random_rgb(12, rng);
  ColoredPointCloud cloud = unproject(depth, rgb, cam);
  const SplatResult base = splat_render(cloud, cam, Pose{0, 0, 0}, 2);
  for (int trial = 0; trial < 4; ++trial) {
    for (size_t i = cloud.points.size(); i > 1; --i) {
      std::swap(cloud.points[i - 1], cloud.points[rng.uniform_int(i)]);
    }
    const SplatResult shuffled = splat_render(cloud, cam, Pose{0, 0, 0}, 2);
    CHECK(shuffled.image.values == base.image.values);
    CHECK(shuffled.coverage == base.coverage);
  }
}

TEST_CASE("lateral cloud shift moves the image by fx*d/z pixels") {
  const int px = 32;
  const CameraModel cam = identity_camera(px);  // fx = 16
  // Fronto-parallel textured plane at depth 2 (camera frame == world frame).
  const double z0 = 2.0;
  ColoredPointCloud cloud;
  Rng rng(21);
  for (int v = 0; v < px; ++v) {
    for (int u = 0; u < px; ++u) {
      const double x = z0 * (u - cam.cx) / cam.fx;
      const double y = z0 * (v - cam.cy) / cam.fy;
      cloud.points.push_back(
          {Eigen::Vector3d(x, y, z0),
           {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)}});
    }
  }
  const SplatResult base = splat_render(cloud, cam, Pose{0, 0, 0}, 1);
  // Shift the plane by d along camera x: pixels shift by fx*d/z0 = 4 columns.
  const double d = 0.5;
  const int shift = static_cast<int>(cam.fx * d / z0);
  ColoredPointCloud moved = cloud;
  for (auto& p : moved.points) p.xyz.x() += d;
  const SplatResult res = splat_render(moved, cam, Pose{0, 0, 0}, 1);
  for (int v = 0; v < px; ++v) {
    for (int u = 0; u < px; ++u) {
      if (u - shift < 0) continue;
      if (!base.coverage[v * px + (u - shift)]) continue;
      if (!res.coverage[v * px + u]) continue;
      for (int ch = 0; ch < 3; ++ch) {
        CHECK(res.image.px(u, v)[ch] ==
              doctest::Approx(base.image.px(u - shift, v)[ch]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("forward_facing camera axes") {
  const CameraModel cam = CameraModel::forward_facing(32, 32, M_PI / 2,
                                                      Eigen::Vector3d(0, 0, 0.4));
  const Eigen::Matrix3d r = cam.extrinsic().R;
  // Optical axis (camera z) points along robot +x.
  CHECK((r * Eigen::Vector3d::UnitZ() - Eigen::Vector3d::UnitX()).norm() < 1e-9);
  // Image right (camera x) points along robot -y; image down along -z.
  CHECK((r * Eigen::Vector3d::UnitX() + Eigen::Vector3d::UnitY()).norm() < 1e-9);
  CHECK((r * Eigen::Vector3d::UnitY() + Eigen::Vector3d::UnitZ()).norm() < 1e-9);
}

TEST_CASE("feature vector round trip") {
  const CameraModel cam = CameraModel::forward_facing(64, 64, M_PI / 2,
                                                      Eigen::Vector3d(0.15, 0, 0.4),
                                                      0.45);
  const CameraModel back = CameraModel::from_feature_vector(cam.feature_vector());
  CHECK(back.fx == cam.fx);
  CHECK(back.cx == cam.cx);
  CHECK(back.width == cam.width);
  CHECK(back.yaw == cam.yaw);
  CHECK(back.pitch == cam.pitch);
  CHECK(back.roll == cam.roll);
  CHECK((back.extrinsic().R - cam.extrinsic().R).norm() < 1e-12);
}

TEST_CASE("image and depth file round trips") {
  Rng rng(29);
  const auto dir = std::filesystem::temp_directory_path();
  const RgbFrame rgb = random_rgb(16, rng);
  const std::string ppm = (dir / "swnav_test.ppm").string();
  write_ppm(ppm, rgb);
  const RgbFrame rgb_back = read_ppm(ppm);
  REQUIRE(rgb_back.width == 16);
  for (size_t i = 0; i < rgb.values.size(); ++i) {
    CHECK(std::abs(rgb_back.values[i] - rgb.values[i]) <= 0.5 / 255.0 + 1e-12);
  }

  const DepthFrame depth = random_depth(16, rng);
  const std::string mdpt = (dir / "swnav_test.mdpt").string();
  write_mdpt(mdpt, depth);
  const DepthFrame depth_back = read_mdpt(mdpt);
  REQUIRE(depth_back.width == 16);
  for (size_t i = 0; i < depth.values.size(); ++i) {
    CHECK(depth_back.values[i] ==
          doctest::Approx(depth.values[i]).epsilon(1e-6));
  }
  std::filesystem::remove(ppm);
  std::filesystem::remove(mdpt);
}
