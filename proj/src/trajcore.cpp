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

#include "swnav/trajcore.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "swnav/errors.hpp"

namespace swnav {

double wrap_angle(double theta) {
  double t = std::fmod(theta, 2.0 * M_PI);
  if (t <= -M_PI) t += 2.0 * M_PI;
  if (t > M_PI) t -= 2.0 * M_PI;
  return t;
}

Pose transform_pose_to_ego(const Pose& world, const Pose& anchor) {
  const double c = std::cos(anchor.psi);
  const double s = std::sin(anchor.psi);
  const double dx = world.x - anchor.x;
  const double dy = world.y - anchor.y;
  return Pose{c * dx + s * dy, -s * dx + c * dy, wrap_angle(world.psi - anchor.psi)};
}

Pose transform_pose_to_world(const Pose& ego, const Pose& anchor) {
  const double c = std::cos(anchor.psi);
  const double s = std::sin(anchor.psi);
  return Pose{anchor.x + c * ego.x - s * ego.y, anchor.y + s * ego.x + c * ego.y,
              wrap_angle(ego.psi + anchor.psi)};
}

Vec2 transform_point_to_ego(const Vec2& world, const Pose& anchor) {
  const Pose p = transform_pose_to_ego(Pose{world.x, world.y, 0.0}, anchor);
  return Vec2{p.x, p.y};
}

Vec2 transform_point_to_world(const Vec2& ego, const Pose& anchor) {
  const Pose p = transform_pose_to_world(Pose{ego.x, ego.y, 0.0}, anchor);
  return Vec2{p.x, p.y};
}

Trajectory transform_to_ego(const Trajectory& world_traj, const Pose& anchor_pose) {
  Trajectory out = world_traj;
  out.frame_id = "ego";
  for (auto& p : out.poses) p = transform_pose_to_ego(p, anchor_pose);
  return out;
}

Trajectory transform_to_world(const Trajectory& ego_traj, const Pose& anchor_pose) {
  Trajectory out = ego_traj;
  out.frame_id = "world";
  for (auto& p : out.poses) p = transform_pose_to_world(p, anchor_pose);
  return out;
}

GoalEncoding encode_goal(const Vec2& goal_xy) {
  const double d = std::hypot(goal_xy.x, goal_xy.y);
  if (d == 0.0) return GoalEncoding{0.0, 1.0, 0.0};
  return GoalEncoding{d, goal_xy.x / d, goal_xy.y / d};
}

double arc_length(const Trajectory& traj) {
  double total = 0.0;
  for (size_t i = 1; i < traj.poses.size(); ++i) {
    total += std::hypot(traj.poses[i].x - traj.poses[i - 1].x,
                        traj.poses[i].y - traj.poses[i - 1].y);
  }
  return total;
}

double slerp_heading(double psi_a, double psi_b, double u) {
  return wrap_angle(psi_a + u * wrap_angle(psi_b - psi_a));
}

Trajectory resample_constant_velocity(const Trajectory& traj, int n_out,
                                      bool* zero_length) {
  if (traj.size() < 2) throw TooShort("resample_constant_velocity: need >= 2 poses");
  if (n_out < 2) throw TooShort("resample_constant_velocity: n_out must be >= 2");
  if (zero_length) *zero_length = false;

  const int n = traj.size();
  std::vector<double> cum(n, 0.0);
  for (int i = 1; i < n; ++i) {
    cum[i] = cum[i - 1] + std::hypot(traj.poses[i].x - traj.poses[i - 1].x,
                                     traj.poses[i].y - traj.poses[i - 1].y);
  }
  const double total = cum[n - 1];

  Trajectory out;
  out.rate_hz = traj.rate_hz;
  out.frame_id = traj.frame_id;
  out.poses.resize(n_out);

  if (total == 0.0) {
    if (zero_length) *zero_length = true;
    for (auto& p : out.poses) p = traj.poses.front();
    return out;
  }

  int seg = 0;  // cursor into the input polyline
  for (int k = 0; k < n_out; ++k) {
    if (k == 0) {
      out.poses[0] = traj.poses.front();
      continue;
    }
    if (k == n_out - 1) {
      out.poses[n_out - 1] = traj.poses.back();
      continue;
    }
    const double s = total * static_cast<double>(k) / (n_out - 1);
    while (seg < n - 2 && cum[seg + 1] < s) ++seg;
    // Skip zero-length input segments: advance until cum strictly brackets s.
    while (seg < n - 2 && cum[seg + 1] <= cum[seg]) ++seg;
    const double seg_len = cum[seg + 1] - cum[seg];
    const double u = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
    const Pose& a = traj.poses[seg];
    const Pose& b = traj.poses[seg + 1];
    out.poses[k] = Pose{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y),
                        slerp_heading(a.psi, b.psi, u)};
  }
  return out;
}

std::vector<EgoState> TrajLog::ego_states() const {
  std::vector<EgoState> out(traj.poses.size());
  for (size_t i = 0; i < traj.poses.size(); ++i) {
    out[i].pose = traj.poses[i];
    out[i].v = i < v.size() ? v[i] : 0.0;
    out[i].omega = i < omega.size() ? omega[i] : 0.0;
  }
  return out;
}

void write_traj_log(const std::string& path, const TrajLog& log) {
  std::ofstream fs(path);
  if (!fs) throw IoError("cannot open for write: " + path);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "#TRAJ v1 rate_hz=%.17g frame=%s\n",
                log.traj.rate_hz, log.traj.frame_id.c_str());
  fs << buf;
  for (size_t i = 0; i < log.traj.poses.size(); ++i) {
    const Pose& p = log.traj.poses[i];
    const double v = i < log.v.size() ? log.v[i] : 0.0;
    const double w = i < log.omega.size() ? log.omega[i] : 0.0;
    std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %.17g %.17g %.17g\n", i, p.x,
                  p.y, p.psi, v, w);
    fs << buf;
  }
  if (!fs) throw IoError("write failed: " + path);
}

TrajLog read_traj_log(const std::string& path) {
  std::ifstream fs(path);
  if (!fs) throw IoError("cannot open: " + path);
  std::string header;
  std::getline(fs, header);
  TrajLog log;
  double rate = 0.0;
  char frame[128] = "world";
  if (std::sscanf(header.c_str(), "#TRAJ v1 rate_hz=%lg frame=%127s", &rate, frame) != 2 ||
      rate <= 0.0) {
    throw IoError("bad trajectory log header in " + path);
  }
  log.traj.rate_hz = rate;
  log.traj.frame_id = frame;
  std::string line;
  while (std::getline(fs, line)) {
    if (line.empty() || line[0] == '#') continue;
    size_t idx;
    Pose p;
    double v, w;
    if (std::sscanf(line.c_str(), "%zu %lg %lg %lg %lg %lg", &idx, &p.x, &p.y, &p.psi,
                    &v, &w) != 6) {
      throw IoError("bad trajectory record in " + path + ": " + line);
    }
    log.traj.poses.push_back(p);
    log.v.push_back(v);
    log.omega.push_back(w);
  }
  if (log.traj.poses.empty()) throw IoError("empty trajectory log: " + path);
  return log;
}

}  // namespace swnav
