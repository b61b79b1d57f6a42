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

#include "swnav/curation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "swnav/errors.hpp"

namespace swnav {

namespace fs = std::filesystem;

Behavior classify_behavior(const Trajectory& segment, const CurationConfig& cfg) {
  if (segment.size() < 2) throw TooShort("classify_behavior: need >= 2 poses");
  const double duration = (segment.size() - 1) / segment.rate_hz;
  const double mean_speed = arc_length(segment) / duration;
  if (mean_speed < cfg.v_stop) return Behavior::kStop;
  double net_turn = 0.0;
  for (int i = 1; i < segment.size(); ++i) {
    net_turn += wrap_angle(segment.poses[i].psi - segment.poses[i - 1].psi);
  }
  if (net_turn > cfg.theta_turn) return Behavior::kTurnLeft;
  if (net_turn < -cfg.theta_turn) return Behavior::kTurnRight;
  return Behavior::kStraight;
}

std::vector<int> balance_by_behavior(const std::vector<Behavior>& labels,
                                     double straight_cap, Rng& rng) {
  if (labels.empty()) throw EmptyInput("balance_by_behavior: no samples");
  std::vector<int> straight, others;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    (labels[i] == Behavior::kStraight ? straight : others).push_back(i);
  }
  size_t keep_straight = straight.size();
  if (straight_cap < 1.0) {
    // k straights against R others keeps the straight share at k/(k+R).
    const double cap_count = straight_cap / (1.0 - straight_cap) *
                             static_cast<double>(others.size());
    keep_straight = std::min(straight.size(),
                             static_cast<size_t>(std::floor(cap_count)));
  }
  // Seeded Fisher-Yates, then restore index order for a stable output.
  for (size_t i = straight.size(); i > 1; --i) {
    std::swap(straight[i - 1], straight[rng.uniform_int(static_cast<uint64_t>(i))]);
  }
  straight.resize(keep_straight);
  std::vector<int> kept = others;
  kept.insert(kept.end(), straight.begin(), straight.end());
  std::sort(kept.begin(), kept.end());
  return kept;
}

FilterDecision filter_abnormal(const Trajectory& segment,
                               const std::vector<EgoState>& states,
                               const CurationConfig& cfg) {
  if (segment.poses.size() != states.size()) {
    throw LengthMismatch("filter_abnormal: trajectory/state lengths disagree");
  }
  int rotation_run = 0;
  for (const EgoState& s : states) {
    if (std::abs(s.omega) > cfg.omega_max && s.v < cfg.v_stop) {
      if (++rotation_run >= cfg.n_abn) return {false, "rotation-while-still"};
    } else {
      rotation_run = 0;
    }
  }
  int backward_run = 0;
  for (size_t i = 0; i + 1 < segment.poses.size(); ++i) {
    const Pose& a = segment.poses[i];
    const Pose& b = segment.poses[i + 1];
    const double vx = (b.x - a.x) * segment.rate_hz;
    const double vy = (b.y - a.y) * segment.rate_hz;
    const double projected = vx * std::cos(a.psi) + vy * std::sin(a.psi);
    if (projected < -cfg.v_back) {
      if (++backward_run >= cfg.n_abn) return {false, "backward"};
    } else {
      backward_run = 0;
    }
  }
  return {true, ""};
}

namespace {

struct ArcTable {
  std::vector<double> cum;
  const Trajectory* traj;

  double total() const { return cum.back(); }

  Vec2 point_at(double s) const {
    const auto& poses = traj->poses;
    s = std::clamp(s, 0.0, total());
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    size_t i = it == cum.begin() ? 0 : static_cast<size_t>(it - cum.begin()) - 1;
    if (i + 1 >= poses.size()) return Vec2{poses.back().x, poses.back().y};
    const double seg = cum[i + 1] - cum[i];
    const double u = seg > 0 ? (s - cum[i]) / seg : 0.0;
    return Vec2{poses[i].x + u * (poses[i + 1].x - poses[i].x),
                poses[i].y + u * (poses[i + 1].y - poses[i].y)};
  }
};

ArcTable arc_table(const Trajectory& traj) {
  ArcTable t;
  t.traj = &traj;
  t.cum.resize(traj.poses.size(), 0.0);
  for (size_t i = 1; i < traj.poses.size(); ++i) {
    t.cum[i] = t.cum[i - 1] + std::hypot(traj.poses[i].x - traj.poses[i - 1].x,
                                         traj.poses[i].y - traj.poses[i - 1].y);
  }
  return t;
}

}  // namespace

Vec2 define_goal_world(const Trajectory& traj, int t, GoalMode mode, Rng& rng) {
  const int n = traj.size();
  if (mode == GoalMode::kRandomAhead) {
    if (t + 5 > n - 1) throw TooShort("define_goal: fewer than 5 future frames");
    int k = static_cast<int>(rng.uniform_int(5, 20));
    k = std::min(k, n - 1 - t);
    const Pose& p = traj.poses[t + k];
    return Vec2{p.x, p.y};
  }
  // Equal-arc-length split into N segments; nearest endpoint strictly ahead.
  const int segments = static_cast<int>(rng.uniform_int(3, 7));
  const ArcTable arcs = arc_table(traj);
  const double total = arcs.total();
  if (total <= 0.0) throw TooShort("define_goal: zero-length trajectory");
  const double s_t = arcs.cum[t];
  for (int j = 1; j <= segments; ++j) {
    const double s_j = total * j / segments;
    if (s_j > s_t) return arcs.point_at(s_j);
  }
  throw TooShort("define_goal: no segment endpoint strictly ahead");
}

Vec2 define_goal(const Trajectory& traj, int t, GoalMode mode, Rng& rng) {
  return transform_point_to_ego(define_goal_world(traj, t, mode, rng), traj.poses[t]);
}

std::vector<BuiltSample> build_samples(const TrajLog& log,
                                       const std::vector<std::string>& rgb_paths,
                                       const std::vector<std::string>& depth_paths,
                                       const CameraModel& cam,
                                       const CurationConfig& cfg, Rng& rng,
                                       const std::string& log_id) {
  const int t_h = cfg.history_len;
  const int t_fut = cfg.horizon;
  const int window = t_h + t_fut;
  const int n = log.traj.size();
  if (n < window) throw TooShort("build_samples: log shorter than one window");
  if (static_cast<int>(rgb_paths.size()) != n ||
      static_cast<int>(depth_paths.size()) != n) {
    throw LengthMismatch("build_samples: frame path count mismatch");
  }

  std::vector<BuiltSample> out;
  for (int w = 0; w + window <= n; w += cfg.stride) {
    Trajectory slice;
    slice.rate_hz = log.traj.rate_hz;
    slice.frame_id = log.traj.frame_id;
    slice.poses.assign(log.traj.poses.begin() + w, log.traj.poses.begin() + w + window);

    const Trajectory resampled = resample_constant_velocity(slice, window);
    const Pose anchor = resampled.poses[t_h - 1];

    BuiltSample sample;
    sample.window_start = w;
    sample.window.history_ego.rate_hz = log.traj.rate_hz;
    sample.window.history_ego.frame_id = "ego";
    sample.window.future_ego.rate_hz = log.traj.rate_hz;
    sample.window.future_ego.frame_id = "ego";
    for (int i = 0; i < t_h; ++i) {
      sample.window.history_ego.poses.push_back(
          transform_pose_to_ego(resampled.poses[i], anchor));
      sample.window.frame_world_poses.push_back(log.traj.poses[w + i]);
    }
    for (int i = t_h; i < window; ++i) {
      sample.window.future_ego.poses.push_back(
          transform_pose_to_ego(resampled.poses[i], anchor));
    }

    SampleRecord& rec = sample.record;
    rec.id = log_id + "_w" + std::to_string(w);
    rec.provenance = Provenance::kOriginal;
    rec.anchor_world = anchor;
    rec.cam_features = cam.feature_vector();
    const GoalMode mode = rng.bernoulli(cfg.goal_segment_prob)
                              ? GoalMode::kSegmentEndpoint
                              : GoalMode::kRandomAhead;
    rec.goal_world = define_goal_world(log.traj, w + t_h - 1, mode, rng);
    rec.goal = encode_goal(transform_point_to_ego(rec.goal_world, anchor));
    for (int i = 0; i < t_h; ++i) {
      rec.rgb_paths.push_back(rgb_paths[w + i]);
      rec.depth_paths.push_back(depth_paths[w + i]);
    }

    // Behavior label from the raw action segment (current pose onward).
    Trajectory action;
    action.rate_hz = log.traj.rate_hz;
    action.poses.assign(log.traj.poses.begin() + w + t_h - 1,
                        log.traj.poses.begin() + w + window);
    rec.behavior = classify_behavior(action, cfg);

    out.push_back(std::move(sample));
  }
  return out;
}

std::string CurationReport::to_text() const {
  std::ostringstream os;
  os << "curation report\n";
  os << "  windows scanned          " << windows << "\n";
  os << "  dropped rotation-still   " << dropped_rotation << "\n";
  os << "  dropped backward         " << dropped_backward << "\n";
  os << "  balanced out (straight)  " << balanced_out << "\n";
  os << "  kept                     " << kept << "\n";
  for (const auto& [b, count] : by_behavior) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "  kept %-12s %d\n", to_string(b), count);
    os << buf;
  }
  return os.str();
}

SampleStore curate_bundles(const std::vector<ScenarioBundle>& bundles,
                           const CurationConfig& cfg, uint64_t seed,
                           const std::string& out_dir, CurationReport* report) {
  if (bundles.empty()) throw EmptyInput("curate_bundles: no scenario bundles");
  CurationReport rep;
  Rng root(seed);

  std::vector<BuiltSample> candidates;
  for (size_t b = 0; b < bundles.size(); ++b) {
    const ScenarioBundle& bundle = bundles[b];
    Rng log_rng = root.derive(Rng::mix(0x10c, b));
    const std::string log_id = "s" + std::to_string(bundle.scenario.seed);
    auto samples = build_samples(bundle.scenario.expert, bundle.rgb_paths,
                                 bundle.depth_paths, bundle.scenario.cam, cfg,
                                 log_rng, log_id);
    const auto states = bundle.scenario.expert.ego_states();
    for (auto& s : samples) {
      ++rep.windows;
      Trajectory raw;
      raw.rate_hz = bundle.scenario.expert.traj.rate_hz;
      raw.poses.assign(
          bundle.scenario.expert.traj.poses.begin() + s.window_start,
          bundle.scenario.expert.traj.poses.begin() + s.window_start +
              cfg.history_len + cfg.horizon);
      std::vector<EgoState> raw_states(
          states.begin() + s.window_start,
          states.begin() + s.window_start + cfg.history_len + cfg.horizon);
      const FilterDecision decision = filter_abnormal(raw, raw_states, cfg);
      if (!decision.keep) {
        if (decision.reason == "backward") ++rep.dropped_backward;
        else ++rep.dropped_rotation;
        continue;
      }
      candidates.push_back(std::move(s));
    }
  }

  std::vector<Behavior> labels;
  labels.reserve(candidates.size());
  for (const auto& s : candidates) labels.push_back(s.record.behavior);
  std::vector<int> kept_idx;
  if (!candidates.empty()) {
    Rng balance_rng = root.derive(0xba1a);
    kept_idx = balance_by_behavior(labels, cfg.straight_cap, balance_rng);
  }
  rep.balanced_out = static_cast<int>(candidates.size() - kept_idx.size());

  SampleStore store;
  store.history_len = cfg.history_len;
  store.horizon = cfg.horizon;
  store.rate_hz = bundles[0].scenario.expert.traj.rate_hz;
  store.dir = out_dir;
  fs::create_directories(fs::path(out_dir) / "windows");
  for (int idx : kept_idx) {
    BuiltSample& s = candidates[idx];
    const std::string window_path =
        (fs::path(out_dir) / "windows" / (s.record.id + ".win")).string();
    write_sample_window(window_path, s.window);
    s.record.window_path = window_path;
    ++rep.kept;
    ++rep.by_behavior[s.record.behavior];
    store.records.push_back(std::move(s.record));
  }
  write_sample_store(store);
  if (report) *report = rep;
  return store;
}

}  // namespace swnav
