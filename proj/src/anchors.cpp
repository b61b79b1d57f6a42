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

#include "swnav/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "swnav/errors.hpp"
#include "swnav/rng.hpp"

namespace swnav {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    uint64_t seed, int max_iter) {
  const int n = static_cast<int>(points.size());
  if (n < k) throw TooFewPoints("kmeans: need at least K points");
  if (k <= 0) throw TooFewPoints("kmeans: K must be positive");
  const size_t dim = points[0].size();

  Rng rng(seed);
  KmeansResult res;
  res.centers.reserve(k);

  // k-means++ seeding.
  res.centers.push_back(points[rng.uniform_int(static_cast<uint64_t>(n))]);
  std::vector<double> d2(n);
  while (static_cast<int>(res.centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : res.centers) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n)));
    } else {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
      }
    }
    res.centers.push_back(points[pick]);
  }

  res.assignment.assign(n, -1);
  for (int iter = 0; iter < max_iter; ++iter) {
    // Assignment step.
    bool changed = false;
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = sq_dist(points[i], res.centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.assignment[i] != best) {
        res.assignment[i] = best;
        changed = true;
      }
      inertia += best_d;
    }
    res.inertia = inertia;
    res.inertia_history.push_back(inertia);
    if (!changed && iter > 0) break;

    // Update step, fixed accumulation order.
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      const int c = res.assignment[i];
      ++counts[c];
      for (size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (size_t d = 0; d < dim; ++d) res.centers[c][d] = sums[c][d] / counts[c];
      } else {
        // Reseed an empty cluster to the point farthest from its center.
        int far_i = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d = sq_dist(points[i], res.centers[res.assignment[i]]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        res.centers[c] = points[far_i];
      }
    }
  }

  // Final inertia against the final centers.
  double inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double d = sq_dist(points[i], res.centers[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    res.assignment[i] = best;
    inertia += best_d;
  }
  res.inertia = inertia;
  return res;
}

std::array<Trajectory, 4> horizon_split(const Trajectory& future) {
  const int t = future.size();
  if (t % 8 != 0) throw IndivisibleHorizon("horizon_split: length must be divisible by 8");
  const std::array<int, 4> lens = {t / 8, t / 4, t / 2, t};
  std::array<Trajectory, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i].rate_hz = future.rate_hz;
    out[i].frame_id = future.frame_id;
    out[i].poses.assign(future.poses.begin(), future.poses.begin() + lens[i]);
  }
  return out;
}

void recompute_headings(Trajectory* traj) {
  auto& poses = traj->poses;
  if (poses.empty()) return;
  if (poses.size() == 1) {
    poses[0].psi = (poses[0].x == 0.0 && poses[0].y == 0.0)
                       ? 0.0
                       : std::atan2(poses[0].y, poses[0].x);
    return;
  }
  for (size_t i = 0; i + 1 < poses.size(); ++i) {
    const double dx = poses[i + 1].x - poses[i].x;
    const double dy = poses[i + 1].y - poses[i].y;
    if (dx != 0.0 || dy != 0.0) {
      poses[i].psi = std::atan2(dy, dx);
    } else if (i > 0) {
      poses[i].psi = poses[i - 1].psi;
    } else {
      poses[i].psi = 0.0;
    }
  }
  poses.back().psi = poses[poses.size() - 2].psi;
}

std::array<AnchorSet, 4> build_anchor_sets(const std::vector<Trajectory>& futures,
                                           int num_modes, uint64_t seed) {
  if (static_cast<int>(futures.size()) < num_modes) {
    throw TooFewPoints("build_anchor_sets: fewer futures than modes");
  }
  const int t = futures[0].size();
  for (const auto& f : futures) {
    if (f.size() != t) throw LengthMismatch("build_anchor_sets: unequal future lengths");
  }

  std::array<AnchorSet, 4> sets;
  const std::array<int, 4> lens = {t / 8, t / 4, t / 2, t};
  if (t % 8 != 0) throw IndivisibleHorizon("build_anchor_sets: T must be divisible by 8");

  for (int h = 0; h < 4; ++h) {
    const int len = lens[h];
    std::vector<std::vector<double>> feats;
    feats.reserve(futures.size());
    for (const auto& f : futures) {
      std::vector<double> v(2 * len);
      for (int j = 0; j < len; ++j) {
        v[2 * j] = f.poses[j].x;
        v[2 * j + 1] = f.poses[j].y;
      }
      feats.push_back(std::move(v));
    }
    const KmeansResult km = kmeans(feats, num_modes, Rng::mix(seed, h), 100);

    AnchorSet& set = sets[h];
    set.horizon_index = h + 1;
    set.horizon_len = len;
    set.num_modes = num_modes;
    set.anchors.resize(num_modes);
    for (int m = 0; m < num_modes; ++m) {
      Trajectory& a = set.anchors[m];
      a.rate_hz = futures[0].rate_hz;
      a.frame_id = "ego";
      a.poses.resize(len);
      for (int j = 0; j < len; ++j) {
        a.poses[j].x = km.centers[m][2 * j];
        a.poses[j].y = km.centers[m][2 * j + 1];
      }
      recompute_headings(&a);
    }
  }
  return sets;
}

int nearest_anchor_by_endpoint(const AnchorSet& anchors, const Trajectory& gt_prefix) {
  if (gt_prefix.size() != anchors.horizon_len) {
    throw LengthMismatch("nearest_anchor_by_endpoint: prefix length mismatch");
  }
  const Pose& g = gt_prefix.poses.back();
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int m = 0; m < anchors.num_modes; ++m) {
    const Vec2 e = anchors.endpoint(m);
    const double d = std::hypot(e.x - g.x, e.y - g.y);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

void write_anchor_file(const std::string& path, const AnchorSet& set) {
  std::ofstream fs(path);
  if (!fs) throw IoError("cannot open for write: " + path);
  fs << "#ANCH v1 horizon=" << set.horizon_index << " len=" << set.horizon_len
     << " M=" << set.num_modes << "\n";
  char buf[96];
  for (const auto& a : set.anchors) {
    for (int j = 0; j < a.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%s%.17g %.17g %.17g", j == 0 ? "" : " ",
                    a.poses[j].x, a.poses[j].y, a.poses[j].psi);
      fs << buf;
    }
    fs << "\n";
  }
  if (!fs) throw IoError("write failed: " + path);
}

AnchorSet read_anchor_file(const std::string& path) {
  std::ifstream fs(path);
  if (!fs) throw IoError("cannot open: " + path);
  std::string header;
  std::getline(fs, header);
  AnchorSet set;
  if (std::sscanf(header.c_str(), "#ANCH v1 horizon=%d len=%d M=%d",
                  &set.horizon_index, &set.horizon_len, &set.num_modes) != 3) {
    throw IoError("bad anchor header in " + path);
  }
  std::string line;
  while (std::getline(fs, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    Trajectory a;
    a.frame_id = "ego";
    Pose p;
    while (ss >> p.x >> p.y >> p.psi) a.poses.push_back(p);
    if (a.size() != set.horizon_len) throw IoError("bad anchor row in " + path);
    set.anchors.push_back(std::move(a));
  }
  if (static_cast<int>(set.anchors.size()) != set.num_modes) {
    throw IoError("anchor count mismatch in " + path);
  }
  return set;
}

void save_anchor_sets(const std::string& dir, const std::array<AnchorSet, 4>& sets) {
  std::filesystem::create_directories(dir);
  for (int h = 0; h < 4; ++h) {
    write_anchor_file(dir + "/anchors_h" + std::to_string(h + 1) + ".anch", sets[h]);
  }
}

std::array<AnchorSet, 4> load_anchor_sets(const std::string& dir) {
  std::array<AnchorSet, 4> sets;
  for (int h = 0; h < 4; ++h) {
    sets[h] = read_anchor_file(dir + "/anchors_h" + std::to_string(h + 1) + ".anch");
  }
  return sets;
}

}  // namespace swnav
