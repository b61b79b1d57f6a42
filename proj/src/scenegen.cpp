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

#include "swnav/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "swnav/errors.hpp"
#include "swnav/rng.hpp"

namespace swnav {

namespace fs = std::filesystem;

namespace {

struct Centerline {
  std::vector<Pose> pts;
  std::vector<double> cum;  // cumulative arc length
  std::vector<double> curv;

  double length() const { return cum.empty() ? 0.0 : cum.back(); }

  Pose at(double s) const {
    if (pts.empty()) return Pose{};
    s = std::clamp(s, 0.0, length());
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    size_t i = it == cum.begin() ? 0 : static_cast<size_t>(it - cum.begin()) - 1;
    if (i + 1 >= pts.size()) return pts.back();
    const double seg = cum[i + 1] - cum[i];
    const double u = seg > 0 ? (s - cum[i]) / seg : 0.0;
    const Pose& a = pts[i];
    const Pose& b = pts[i + 1];
    return Pose{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y),
                slerp_heading(a.psi, b.psi, u)};
  }

  double curvature_at(double s) const {
    if (pts.empty()) return 0.0;
    s = std::clamp(s, 0.0, length());
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    size_t i = it == cum.begin() ? 0 : static_cast<size_t>(it - cum.begin()) - 1;
    return curv[std::min(i, curv.size() - 1)];
  }
};

Centerline centerline_from(const World& world) {
  Centerline cl;
  cl.pts = world.corridor;
  cl.cum.resize(cl.pts.size(), 0.0);
  cl.curv.resize(cl.pts.size(), 0.0);
  for (size_t i = 1; i < cl.pts.size(); ++i) {
    cl.cum[i] = cl.cum[i - 1] + std::hypot(cl.pts[i].x - cl.pts[i - 1].x,
                                           cl.pts[i].y - cl.pts[i - 1].y);
    const double ds = cl.cum[i] - cl.cum[i - 1];
    cl.curv[i - 1] = ds > 0 ? wrap_angle(cl.pts[i].psi - cl.pts[i - 1].psi) / ds : 0.0;
  }
  return cl;
}

double aabb_distance_2d(const Box& b, double px, double py) {
  const double dx = std::max({b.center.x() - b.half.x() - px, 0.0, px - b.center.x() - b.half.x()});
  const double dy = std::max({b.center.y() - b.half.y() - py, 0.0, py - b.center.y() - b.half.y()});
  return std::hypot(dx, dy);
}

double clearance_to_corridor(const std::vector<Pose>& corridor, const Box& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const Pose& p : corridor) {
    best = std::min(best, aabb_distance_2d(b, p.x, p.y));
  }
  return best;
}

std::array<double, 3> box_palette(Rng& rng) {
  // Bright-ish distinct colors.
  const double h = rng.uniform(0.0, 6.0);
  const double s = rng.uniform(0.55, 0.95);
  const double v = rng.uniform(0.6, 0.95);
  const int i = static_cast<int>(h);
  const double f = h - i;
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  switch (i % 6) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

}  // namespace

World generate_world(uint64_t seed, double difficulty, const ScenarioConfig& cfg) {
  Rng rng = Rng(seed).derive(0xC0'11'AB'5EULL);
  World world;
  world.ground_seed = Rng::mix(seed, 0x6706);

  // Corridor centerline: straight / curved stretches.
  const double target_len = 55.0;
  const double ds = world.corridor_step;
  Pose cursor{0.0, 0.0, 0.0};
  double built = 0.0;
  world.corridor.push_back(cursor);
  while (built < target_len) {
    const double seg_len = rng.uniform(5.0, 9.0);
    double curvature = 0.0;
    if (difficulty > 0.0 && !rng.bernoulli(0.45)) {
      const double mag = rng.uniform(0.05, 0.05 + 0.20 * std::min(1.0, difficulty));
      curvature = rng.bernoulli(0.5) ? mag : -mag;
    }
    const int n = std::max(1, static_cast<int>(seg_len / ds));
    for (int i = 0; i < n; ++i) {
      cursor.x += ds * std::cos(cursor.psi);
      cursor.y += ds * std::sin(cursor.psi);
      cursor.psi = wrap_angle(cursor.psi + curvature * ds);
      world.corridor.push_back(cursor);
      built += ds;
    }
  }

  if (difficulty <= 0.0) return world;  // empty straight corridor

  const Centerline cl = centerline_from(world);

  // Walls: short cubes along both corridor edges, in stretches with gaps.
  const double wall_half = 0.18;
  const double wall_h = rng.uniform(0.7, 1.0);
  for (int side = -1; side <= 1; side += 2) {
    double s = 2.0;
    while (s < built - 1.0) {
      const bool present = rng.bernoulli(0.8);
      const double stretch = rng.uniform(2.5, 5.0);
      if (present) {
        for (double w = 0; w < stretch && s + w < built - 1.0; w += 0.55) {
          const Pose q = cl.at(s + w);
          const double nx = -std::sin(q.psi), ny = std::cos(q.psi);
          Box b;
          b.center = Eigen::Vector3d(q.x + side * cfg.corridor_half_width * nx,
                                     q.y + side * cfg.corridor_half_width * ny,
                                     wall_h / 2);
          b.half = Eigen::Vector3d(wall_half, wall_half, wall_h / 2);
          b.rgb = {0.55, 0.5, 0.45};
          b.wall = true;
          world.boxes.push_back(b);
        }
      }
      s += stretch;
    }
  }

  // Obstacles: boxes near (but clear of) the path.
  const int n_obs = static_cast<int>(std::lround(difficulty * 6.0));
  for (int k = 0; k < n_obs; ++k) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double s = rng.uniform(6.0, cl.length() - 4.0);
      const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
      const double lat = rng.uniform(0.95, cfg.corridor_half_width - 0.15);
      const double hx = rng.uniform(0.15, 0.35);
      const double hy = rng.uniform(0.15, 0.35);
      const double hz = rng.uniform(0.25, 0.55);
      const Pose q = cl.at(s);
      const double nx = -std::sin(q.psi), ny = std::cos(q.psi);
      Box b;
      b.center = Eigen::Vector3d(q.x + side * lat * nx, q.y + side * lat * ny, hz);
      b.half = Eigen::Vector3d(hx, hy, hz);
      b.rgb = box_palette(rng);
      b.wall = false;
      if (clearance_to_corridor(world.corridor, b) >= cfg.r_robot + 0.05) {
        world.boxes.push_back(b);
        break;
      }
    }
  }
  return world;
}

TrajLog plan_expert(const World& world, uint64_t seed, const ScenarioConfig& cfg) {
  if (world.corridor.size() < 2) throw Infeasible("plan_expert: empty corridor");
  Rng rng = Rng(seed).derive(0xE8'9E'47ULL);
  const Centerline cl = centerline_from(world);

  const double base_v = rng.uniform(0.7, 1.4);
  const bool has_stop = rng.bernoulli(0.75);
  const double stop_s = rng.uniform(0.25, 0.6) * cl.length();
  const double stop_dur = rng.uniform(1.0, 2.5);
  const double accel = 1.0;

  TrajLog log;
  log.traj.rate_hz = cfg.rate_hz;
  log.traj.frame_id = "world";
  const double dt = 1.0 / cfg.rate_hz;

  double s = 1.0;
  double v = base_v;
  double stop_timer = -1.0;
  bool stopped_done = false;
  Pose prev = cl.at(s);
  for (int t = 0; t < cfg.n_frames; ++t) {
    const Pose p = cl.at(s);
    const double omega = t == 0 ? 0.0 : wrap_angle(p.psi - prev.psi) / dt;
    log.traj.poses.push_back(p);
    log.v.push_back(v);
    log.omega.push_back(omega);
    prev = p;

    // Speed target: slow in curves, zero during a stop event or at the end.
    double v_target = base_v * (1.0 - 0.55 * std::min(1.0, std::abs(cl.curvature_at(s)) / 0.25));
    if (has_stop && !stopped_done && s >= stop_s) {
      if (stop_timer < 0.0) stop_timer = stop_dur;
      if (stop_timer > 0.0) {
        v_target = 0.0;
        stop_timer -= dt;
      } else {
        stopped_done = true;
      }
    }
    if (s >= cl.length() - 2.0) v_target = 0.0;

    const double dv = std::clamp(v_target - v, -accel * dt, accel * dt);
    v += dv;
    if (v < 1e-3) v = 0.0;
    s += v * dt;
  }
  return log;
}

Scenario make_scenario(uint64_t seed, const ScenarioConfig& cfg) {
  Scenario sc;
  sc.seed = seed;
  sc.world = generate_world(seed, cfg.difficulty, cfg);
  sc.expert = plan_expert(sc.world, Rng::mix(seed, 0x9a37), cfg);
  sc.cam = CameraModel::forward_facing(
      cfg.image_px, cfg.image_px, cfg.hfov,
      Eigen::Vector3d(cfg.cam_forward, 0.0, cfg.cam_height), cfg.cam_tilt_down);
  return sc;
}

// --- rendering ---

namespace {

std::array<double, 3> ground_color(double x, double y, uint64_t seed) {
  const int64_t cx = static_cast<int64_t>(std::floor(x / 0.5));
  const int64_t cy = static_cast<int64_t>(std::floor(y / 0.5));
  const uint64_t h =
      Rng::mix(seed, Rng::mix(static_cast<uint64_t>(cx) * 0x9E3779B1ULL,
                              static_cast<uint64_t>(cy)));
  const double jitter = ((h >> 8) & 0xFFFF) / 65535.0;  // [0,1]
  const double base = ((cx + cy) & 1) ? 0.50 : 0.42;
  const double g = base + 0.10 * jitter;
  return {g * 0.96, g, g * 0.88};
}

constexpr std::array<double, 3> kSkyColor = {0.70, 0.84, 0.95};

// Slab test; on hit sets *s_hit (camera-z parameter) and *axis/*neg for the
// entered face. Returns false on miss.
bool ray_aabb(const Eigen::Vector3d& o, const Eigen::Vector3d& d, const Box& b,
              double* s_hit, int* axis, bool* neg) {
  double tmin = 1e-9, tmax = std::numeric_limits<double>::infinity();
  int best_axis = -1;
  bool best_neg = false;
  for (int a = 0; a < 3; ++a) {
    const double lo = b.center[a] - b.half[a];
    const double hi = b.center[a] + b.half[a];
    const double inv = 1.0 / d[a];
    double t0 = (lo - o[a]) * inv;
    double t1 = (hi - o[a]) * inv;
    bool entered_low = true;
    if (t0 > t1) {
      std::swap(t0, t1);
      entered_low = false;
    }
    if (t0 > tmin) {
      tmin = t0;
      best_axis = a;
      best_neg = entered_low;
    }
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return false;
  }
  if (best_axis < 0) return false;  // origin inside the box
  *s_hit = tmin;
  *axis = best_axis;
  *neg = best_neg;
  return true;
}

}  // namespace

void render_frame(const World& world, const CameraModel& cam, const Pose& pose,
                  RgbFrame* rgb, DepthFrame* depth, double render_far) {
  *rgb = RgbFrame::fill(cam.width, cam.height, kSkyColor[0], kSkyColor[1], kSkyColor[2]);
  *depth = DepthFrame::zero(cam.width, cam.height);

  const Rigid3 cam_to_world = pose_to_rigid(pose).compose(cam.extrinsic());
  const Eigen::Matrix3d& R = cam_to_world.R;
  const Eigen::Vector3d& O = cam_to_world.t;

  // Frustum-ish cull: keep boxes within range and not far behind the robot.
  std::vector<const Box*> candidates;
  candidates.reserve(world.boxes.size());
  const double fwd_x = std::cos(pose.psi), fwd_y = std::sin(pose.psi);
  for (const Box& b : world.boxes) {
    const double dx = b.center.x() - O.x(), dy = b.center.y() - O.y();
    const double radius = b.half.head<2>().norm();
    if (std::hypot(dx, dy) > render_far + radius) continue;
    if (dx * fwd_x + dy * fwd_y < -(radius + 1.0)) continue;
    candidates.push_back(&b);
  }

  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      // dir_cam.z = 1, so the ray parameter s equals camera-frame depth.
      const Eigen::Vector3d dir_cam((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
      const Eigen::Vector3d D = R * dir_cam;

      double best_s = std::numeric_limits<double>::infinity();
      std::array<double, 3> color = kSkyColor;

      if (D.z() < -1e-12) {
        const double s = -O.z() / D.z();
        if (s > 1e-9 && s < best_s) {
          best_s = s;
          const Eigen::Vector3d hit = O + s * D;
          color = ground_color(hit.x(), hit.y(), world.ground_seed);
        }
      }
      for (const Box* b : candidates) {
        double s;
        int axis;
        bool neg;
        if (ray_aabb(O, D, *b, &s, &axis, &neg) && s < best_s) {
          best_s = s;
          const double shade = axis == 2 ? 1.0 : (axis == 0 ? 0.82 : 0.68);
          color = {b->rgb[0] * shade, b->rgb[1] * shade, b->rgb[2] * shade};
        }
      }

      if (best_s <= render_far) {
        depth->at(u, v) = best_s;
        double* px = rgb->px(u, v);
        px[0] = color[0];
        px[1] = color[1];
        px[2] = color[2];
      }
    }
  }
}

double point_to_polyline_distance(const std::vector<Pose>& poses, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < poses.size(); ++i) {
    const double ax = poses[i].x, ay = poses[i].y;
    const double bx = poses[i + 1].x, by = poses[i + 1].y;
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double u = len2 > 0 ? ((p.x - ax) * vx + (p.y - ay) * vy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    best = std::min(best, std::hypot(p.x - (ax + u * vx), p.y - (ay + u * vy)));
  }
  if (poses.size() == 1) best = std::hypot(p.x - poses[0].x, p.y - poses[0].y);
  return best;
}

// --- bundles ---

void save_scenario_bundle(const std::string& dir, const Scenario& scenario) {
  fs::create_directories(fs::path(dir) / "frames");
  char buf[512];

  {
    std::ofstream ws(fs::path(dir) / "world.txt");
    if (!ws) throw IoError("cannot write world.txt in " + dir);
    ws << "#WORLD v1\n";
    ws << "ground_seed " << scenario.world.ground_seed << "\n";
    ws << "corridor_step " << scenario.world.corridor_step << "\n";
    for (const Box& b : scenario.world.boxes) {
      std::snprintf(buf, sizeof(buf),
                    "box %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %s\n",
                    b.center.x(), b.center.y(), b.center.z(), b.half.x(), b.half.y(),
                    b.half.z(), b.rgb[0], b.rgb[1], b.rgb[2],
                    b.wall ? "wall" : "obstacle");
      ws << buf;
    }
    for (const Pose& p : scenario.world.corridor) {
      std::snprintf(buf, sizeof(buf), "corridor %.17g %.17g %.17g\n", p.x, p.y, p.psi);
      ws << buf;
    }
  }
  {
    std::ofstream cs(fs::path(dir) / "cam.txt");
    if (!cs) throw IoError("cannot write cam.txt in " + dir);
    const CameraModel& c = scenario.cam;
    std::snprintf(buf, sizeof(buf),
                  "#CAM v1\n%.17g %.17g %.17g %.17g %d %d %.17g %.17g %.17g %.17g "
                  "%.17g %.17g\n",
                  c.fx, c.fy, c.cx, c.cy, c.width, c.height, c.t_cam.x(), c.t_cam.y(),
                  c.t_cam.z(), c.yaw, c.pitch, c.roll);
    cs << buf;
  }
  write_traj_log((fs::path(dir) / "traj.log").string(), scenario.expert);

  std::ofstream ms(fs::path(dir) / "manifest.txt");
  if (!ms) throw IoError("cannot write manifest.txt in " + dir);
  ms << "#SCEN v1 seed=" << scenario.seed
     << " frames=" << scenario.expert.traj.poses.size()
     << " rate_hz=" << scenario.expert.traj.rate_hz << "\n";
  for (size_t i = 0; i < scenario.expert.traj.poses.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "frames/f%04zu.ppm", i);
    const std::string rgb_rel = buf;
    std::snprintf(buf, sizeof(buf), "frames/d%04zu.mdpt", i);
    const std::string dep_rel = buf;
    RgbFrame rgb;
    DepthFrame depth;
    render_frame(scenario.world, scenario.cam, scenario.expert.traj.poses[i], &rgb,
                 &depth);
    write_ppm((fs::path(dir) / rgb_rel).string(), rgb);
    write_mdpt((fs::path(dir) / dep_rel).string(), depth);
    ms << "frame " << i << " " << rgb_rel << " " << dep_rel << "\n";
  }
}

ScenarioBundle load_scenario_bundle(const std::string& dir) {
  ScenarioBundle bundle;
  bundle.dir = dir;

  {
    std::ifstream ws(fs::path(dir) / "world.txt");
    if (!ws) throw IoError("cannot open world.txt in " + dir);
    std::string line;
    std::getline(ws, line);
    if (line.rfind("#WORLD v1", 0) != 0) throw IoError("bad world.txt header in " + dir);
    while (std::getline(ws, line)) {
      if (line.rfind("ground_seed ", 0) == 0) {
        bundle.scenario.world.ground_seed = std::stoull(line.substr(12));
      } else if (line.rfind("corridor_step ", 0) == 0) {
        bundle.scenario.world.corridor_step = std::stod(line.substr(14));
      } else if (line.rfind("box ", 0) == 0) {
        Box b;
        char kind[32];
        if (std::sscanf(line.c_str(), "box %lg %lg %lg %lg %lg %lg %lg %lg %lg %31s",
                        &b.center.x(), &b.center.y(), &b.center.z(), &b.half.x(),
                        &b.half.y(), &b.half.z(), &b.rgb[0], &b.rgb[1], &b.rgb[2],
                        kind) != 10) {
          throw IoError("bad box record in " + dir);
        }
        b.wall = std::string(kind) == "wall";
        bundle.scenario.world.boxes.push_back(b);
      } else if (line.rfind("corridor ", 0) == 0) {
        Pose p;
        if (std::sscanf(line.c_str(), "corridor %lg %lg %lg", &p.x, &p.y, &p.psi) != 3) {
          throw IoError("bad corridor record in " + dir);
        }
        bundle.scenario.world.corridor.push_back(p);
      }
    }
  }
  {
    std::ifstream cs(fs::path(dir) / "cam.txt");
    if (!cs) throw IoError("cannot open cam.txt in " + dir);
    std::string header;
    std::getline(cs, header);
    CameraModel& c = bundle.scenario.cam;
    std::string body;
    std::getline(cs, body);
    if (std::sscanf(body.c_str(), "%lg %lg %lg %lg %d %d %lg %lg %lg %lg %lg %lg",
                    &c.fx, &c.fy, &c.cx, &c.cy, &c.width, &c.height, &c.t_cam.x(),
                    &c.t_cam.y(), &c.t_cam.z(), &c.yaw, &c.pitch, &c.roll) != 12) {
      throw IoError("bad cam.txt in " + dir);
    }
  }
  bundle.scenario.expert = read_traj_log((fs::path(dir) / "traj.log").string());

  std::ifstream ms(fs::path(dir) / "manifest.txt");
  if (!ms) throw IoError("cannot open manifest.txt in " + dir);
  std::string line;
  std::getline(ms, line);
  uint64_t seed = 0;
  if (std::sscanf(line.c_str(), "#SCEN v1 seed=%zu", &seed) == 1) {
    bundle.scenario.seed = seed;
  }
  while (std::getline(ms, line)) {
    char rgb_rel[256], dep_rel[256];
    size_t idx;
    if (std::sscanf(line.c_str(), "frame %zu %255s %255s", &idx, rgb_rel, dep_rel) == 3) {
      bundle.rgb_paths.push_back((fs::path(dir) / rgb_rel).string());
      bundle.depth_paths.push_back((fs::path(dir) / dep_rel).string());
    }
  }
  if (bundle.rgb_paths.size() != bundle.scenario.expert.traj.poses.size()) {
    throw IoError("manifest frame count mismatch in " + dir);
  }
  return bundle;
}

// --- rollout ---

namespace {

double nearest_arc_position(const Centerline& cl, double x, double y) {
  double best_d = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  for (size_t i = 0; i + 1 < cl.pts.size(); ++i) {
    const double ax = cl.pts[i].x, ay = cl.pts[i].y;
    const double bx = cl.pts[i + 1].x, by = cl.pts[i + 1].y;
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double u = len2 > 0 ? ((x - ax) * vx + (y - ay) * vy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    const double d = std::hypot(x - (ax + u * vx), y - (ay + u * vy));
    if (d < best_d) {
      best_d = d;
      best_s = cl.cum[i] + u * (cl.cum[i + 1] - cl.cum[i]);
    }
  }
  return best_s;
}

Pose unicycle_step(const Pose& p, double v, double omega, double dt) {
  Pose out;
  if (std::abs(omega) > 1e-9) {
    out.x = p.x + v / omega * (std::sin(p.psi + omega * dt) - std::sin(p.psi));
    out.y = p.y - v / omega * (std::cos(p.psi + omega * dt) - std::cos(p.psi));
  } else {
    out.x = p.x + v * dt * std::cos(p.psi);
    out.y = p.y + v * dt * std::sin(p.psi);
  }
  out.psi = wrap_angle(p.psi + omega * dt);
  return out;
}

}  // namespace

RolloutStats rollout(const RolloutPolicy& policy, const Scenario& scenario,
                     const RolloutConfig& cfg) {
  const auto& expert = scenario.expert.traj.poses;
  if (static_cast<int>(expert.size()) < cfg.history_len + 2) {
    throw TooShort("rollout: expert shorter than the history window");
  }
  Centerline expert_cl;
  {
    World tmp;
    tmp.corridor = expert;
    expert_cl = centerline_from(tmp);
  }
  const Vec2 goal_pt{expert.back().x, expert.back().y};

  std::vector<RgbFrame> history_frames;
  std::vector<Pose> history_poses;
  // Warm-up: replay the expert for the first history window.
  for (int i = 0; i < cfg.history_len; ++i) {
    RgbFrame rgb;
    DepthFrame depth;
    render_frame(scenario.world, scenario.cam, expert[i], &rgb, &depth);
    history_frames.push_back(std::move(rgb));
    history_poses.push_back(expert[i]);
  }

  RolloutStats stats;
  Pose sim = expert[cfg.history_len - 1];
  double dev_sum = 0.0;
  for (int step = 0; step < cfg.max_steps; ++step) {
    RolloutObs obs;
    obs.cam = &scenario.cam;
    for (const auto& f : history_frames) obs.frames.push_back(&f);
    obs.poses = history_poses;
    const double s_here = nearest_arc_position(expert_cl, sim.x, sim.y);
    const Pose target =
        expert_cl.at(std::min(s_here + cfg.goal_ahead_m, expert_cl.length()));
    obs.goal = encode_goal(transform_point_to_ego(Vec2{target.x, target.y}, sim));

    const Trajectory plan = policy(obs);
    if (plan.poses.empty()) break;
    const Pose& wp = plan.poses.front();
    double v = std::hypot(wp.x, wp.y) / cfg.dt;
    if (wp.x < 0.0) v = 0.0;  // no reverse
    v = std::clamp(v, 0.0, cfg.v_max);
    const double omega = std::clamp(wrap_angle(wp.psi) / cfg.dt, -cfg.omega_max, cfg.omega_max);

    sim = unicycle_step(sim, v, omega, cfg.dt);
    stats.trace.push_back(sim);
    stats.steps = step + 1;

    const double dev = point_to_polyline_distance(expert, Vec2{sim.x, sim.y});
    stats.max_lateral_dev = std::max(stats.max_lateral_dev, dev);
    dev_sum += dev;

    if (std::hypot(sim.x - goal_pt.x, sim.y - goal_pt.y) < cfg.goal_radius) {
      stats.goal_reached = true;
      break;
    }

    RgbFrame rgb;
    DepthFrame depth;
    render_frame(scenario.world, scenario.cam, sim, &rgb, &depth);
    history_frames.erase(history_frames.begin());
    history_poses.erase(history_poses.begin());
    history_frames.push_back(std::move(rgb));
    history_poses.push_back(sim);
  }
  stats.mean_lateral_dev = stats.steps > 0 ? dev_sum / stats.steps : 0.0;
  return stats;
}

RolloutStats stats_from_trace(const std::vector<Pose>& trace,
                              const Scenario& scenario, const RolloutConfig& cfg) {
  RolloutStats stats;
  stats.trace = trace;
  stats.steps = static_cast<int>(trace.size());
  double dev_sum = 0.0;
  const auto& expert = scenario.expert.traj.poses;
  const Vec2 goal_pt{expert.back().x, expert.back().y};
  for (const Pose& p : trace) {
    const double dev = point_to_polyline_distance(expert, Vec2{p.x, p.y});
    stats.max_lateral_dev = std::max(stats.max_lateral_dev, dev);
    dev_sum += dev;
    if (std::hypot(p.x - goal_pt.x, p.y - goal_pt.y) < cfg.goal_radius) {
      stats.goal_reached = true;
    }
  }
  stats.mean_lateral_dev = stats.steps > 0 ? dev_sum / stats.steps : 0.0;
  return stats;
}

}  // namespace swnav
