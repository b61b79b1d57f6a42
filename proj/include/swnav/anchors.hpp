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

#ifndef SWNAV_ANCHORS_HPP_
#define SWNAV_ANCHORS_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "swnav/trajcore.hpp"

namespace swnav {

/// Cluster-center trajectories for one temporal horizon, in the ego frame.
struct AnchorSet {
  int horizon_index = 1;  // 1..4
  int horizon_len = 0;    // waypoints
  int num_modes = 0;      // M
  std::vector<Trajectory> anchors;

  Vec2 endpoint(int m) const {
    const Pose& p = anchors[m].poses.back();
    return Vec2{p.x, p.y};
  }
};

struct KmeansResult {
  std::vector<std::vector<double>> centers;  // K x D
  std::vector<int> assignment;               // N
  double inertia = 0.0;
  std::vector<double> inertia_history;  // one entry per Lloyd iteration
};

/// Lloyd's algorithm from k-means++ seeding. Empty clusters are reseeded to
/// the point farthest from its assigned center. Deterministic given seed.
KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    uint64_t seed, int max_iter = 100);

/// Split a length-T future into prefixes of lengths {T/8, T/4, T/2, T}.
std::array<Trajectory, 4> horizon_split(const Trajectory& future);

/// Cluster the (x, y) waypoints of each horizon prefix into M anchors per
/// horizon. Anchor headings are recomputed from consecutive positions.
std::array<AnchorSet, 4> build_anchor_sets(const std::vector<Trajectory>& futures,
                                           int num_modes, uint64_t seed);

/// Index of the anchor whose (x, y) endpoint is closest to the ground-truth
/// prefix endpoint; ties resolve to the lowest index.
int nearest_anchor_by_endpoint(const AnchorSet& anchors, const Trajectory& gt_prefix);

/// Recompute per-waypoint headings from consecutive (x, y) positions. The
/// final heading copies its predecessor; a single waypoint aims from the
/// origin.
void recompute_headings(Trajectory* traj);

/// Header `#ANCH v1 horizon=<i> len=<Ti> M=<m>`, one anchor per line as
/// space-separated x y psi triples.
void write_anchor_file(const std::string& path, const AnchorSet& set);
AnchorSet read_anchor_file(const std::string& path);

void save_anchor_sets(const std::string& dir, const std::array<AnchorSet, 4>& sets);
std::array<AnchorSet, 4> load_anchor_sets(const std::string& dir);

}  // namespace swnav

#endif  // SWNAV_ANCHORS_HPP_
