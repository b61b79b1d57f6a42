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

#include "swnav/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "swnav/errors.hpp"

namespace swnav {

namespace {

int horizon_steps(double horizon_s, double rate_hz, int available,
                  const char* what) {
  const int n = static_cast<int>(std::lround(horizon_s * rate_hz));
  if (n < 1 || n > available) {
    throw HorizonExceedsPrediction(std::string(what) +
                                   ": horizon outside the predicted span");
  }
  return n;
}

double endpoint_dist(const Trajectory& a, const Trajectory& b, int idx) {
  return std::hypot(a.poses[idx].x - b.poses[idx].x, a.poses[idx].y - b.poses[idx].y);
}

}  // namespace

double min_ade(const std::vector<Trajectory>& candidates, const Trajectory& gt,
               double horizon_s, double rate_hz) {
  if (candidates.empty()) throw EmptyInput("min_ade: no candidates");
  int n = horizon_steps(horizon_s, rate_hz, gt.size(), "min_ade");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    if (c.size() < n) throw HorizonExceedsPrediction("min_ade: candidate too short");
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      sum += std::hypot(c.poses[j].x - gt.poses[j].x, c.poses[j].y - gt.poses[j].y);
    }
    best = std::min(best, sum / n);
  }
  return best;
}

double min_fde(const std::vector<Trajectory>& candidates, const Trajectory& gt,
               double horizon_s, double rate_hz) {
  if (candidates.empty()) throw EmptyInput("min_fde: no candidates");
  const int n = horizon_steps(horizon_s, rate_hz, gt.size(), "min_fde");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    if (c.size() < n) throw HorizonExceedsPrediction("min_fde: candidate too short");
    best = std::min(best, endpoint_dist(c, gt, n - 1));
  }
  return best;
}

double average_precision(const std::vector<PredictionSample>& samples,
                         const EvalConfig& cfg) {
  struct Entry {
    double conf;
    int sample;
    int mode;
    bool within;
  };
  std::vector<Entry> pool;
  int n_gt = 0;
  for (int s = 0; s < static_cast<int>(samples.size()); ++s) {
    const auto& ps = samples[s];
    if (ps.candidates.empty()) continue;
    ++n_gt;
    const int n = horizon_steps(cfg.match_time_s, ps.gt.rate_hz, ps.gt.size(),
                                "average_precision");
    for (int m = 0; m < static_cast<int>(ps.candidates.size()); ++m) {
      const double d = endpoint_dist(ps.candidates[m], ps.gt, n - 1);
      pool.push_back(Entry{ps.confidences[m], s, m, d <= cfg.match_radius_m});
    }
  }
  if (n_gt == 0 || pool.empty()) return 0.0;

  std::sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) {
    if (a.conf != b.conf) return a.conf > b.conf;
    if (a.sample != b.sample) return a.sample < b.sample;
    return a.mode < b.mode;
  });

  std::vector<bool> matched(samples.size(), false);
  std::vector<double> precision(pool.size()), recall(pool.size());
  int tp = 0;
  for (size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].within && !matched[pool[i].sample]) {
      matched[pool[i].sample] = true;
      ++tp;
    }
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / n_gt;
  }

  // Precision envelope (all-point interpolation), integrated over recall.
  for (size_t i = pool.size() - 1; i > 0; --i) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (size_t i = 0; i < pool.size(); ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

double l2_at(const std::vector<Trajectory>& candidates,
             const std::vector<double>& confidences, const Trajectory& gt,
             double horizon_s, double rate_hz) {
  if (candidates.empty()) throw EmptyInput("l2_at: no candidates");
  if (candidates.size() != confidences.size()) {
    throw LengthMismatch("l2_at: confidences/candidates size mismatch");
  }
  int best = 0;
  for (int m = 1; m < static_cast<int>(candidates.size()); ++m) {
    if (confidences[m] > confidences[best]) best = m;
  }
  const int n = horizon_steps(horizon_s, rate_hz, gt.size(), "l2_at");
  if (candidates[best].size() < n) {
    throw HorizonExceedsPrediction("l2_at: best candidate too short");
  }
  return endpoint_dist(candidates[best], gt, n - 1);
}

std::vector<int> endpoint_nms(const std::vector<Trajectory>& candidates,
                              const std::vector<double>& confidences, int top_k,
                              double radius) {
  const int m = static_cast<int>(candidates.size());
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (confidences[a] != confidences[b]) return confidences[a] > confidences[b];
    return a < b;
  });

  std::vector<int> kept;
  std::vector<bool> suppressed(m, false);
  for (int idx : order) {
    if (suppressed[idx]) continue;
    kept.push_back(idx);
    if (static_cast<int>(kept.size()) >= top_k) break;
    const Pose& e = candidates[idx].poses.back();
    for (int other : order) {
      if (suppressed[other] || other == idx) continue;
      const Pose& o = candidates[other].poses.back();
      if (std::hypot(e.x - o.x, e.y - o.y) <= radius) suppressed[other] = true;
    }
  }
  return kept;
}

EvalReport evaluate(const std::vector<PredictionSample>& samples,
                    const EvalConfig& cfg, double rate_hz) {
  EvalReport rep;
  rep.l2.assign(cfg.l2_horizons_s.size(), 0.0);
  if (samples.empty()) return rep;

  double ade_sum = 0.0, fde_sum = 0.0;
  std::vector<double> l2_sum(cfg.l2_horizons_s.size(), 0.0);
  bool multimodal = true;
  for (const auto& s : samples) {
    ade_sum += min_ade(s.candidates, s.gt, cfg.match_time_s, rate_hz);
    fde_sum += min_fde(s.candidates, s.gt, cfg.match_time_s, rate_hz);
    for (size_t h = 0; h < cfg.l2_horizons_s.size(); ++h) {
      l2_sum[h] += l2_at(s.candidates, s.confidences, s.gt, cfg.l2_horizons_s[h], rate_hz);
    }
    if (s.candidates.size() < 2) multimodal = false;
  }
  const double n = static_cast<double>(samples.size());
  rep.min_ade_1s = ade_sum / n;
  rep.min_fde_1s = fde_sum / n;
  for (size_t h = 0; h < cfg.l2_horizons_s.size(); ++h) rep.l2[h] = l2_sum[h] / n;
  if (multimodal) rep.map = average_precision(samples, cfg);
  rep.sample_count = static_cast<int>(samples.size());
  return rep;
}

std::string format_report(const EvalReport& report, const EvalConfig& cfg,
                          const std::string& title) {
  std::ostringstream os;
  char buf[512];
  os << "== " << title << " (" << report.sample_count << " samples) ==\n";
  os << "  minADE_1s  minFDE_1s       mAP";
  for (double h : cfg.l2_horizons_s) {
    std::snprintf(buf, sizeof(buf), "    L2_%gs", h);
    os << buf;
  }
  os << "\n";
  std::snprintf(buf, sizeof(buf), "  %9.4f  %9.4f", report.min_ade_1s,
                report.min_fde_1s);
  os << buf;
  if (report.map.has_value()) {
    std::snprintf(buf, sizeof(buf), "  %8.4f", *report.map);
  } else {
    std::snprintf(buf, sizeof(buf), "  %8s", "-");
  }
  os << buf;
  for (double v : report.l2) {
    std::snprintf(buf, sizeof(buf), "  %7.4f", v);
    os << buf;
  }
  os << "\n";

  os << "minADE=" << report.min_ade_1s << " minFDE=" << report.min_fde_1s;
  os << " mAP=" << (report.map.has_value() ? std::to_string(*report.map) : "n/a");
  for (size_t h = 0; h < cfg.l2_horizons_s.size(); ++h) {
    std::snprintf(buf, sizeof(buf), " L2_%gs=%.17g", cfg.l2_horizons_s[h],
                  report.l2[h]);
    os << buf;
  }
  if (report.nll.has_value()) os << " nll=" << *report.nll;
  os << " n=" << report.sample_count << "\n";
  return os.str();
}

}  // namespace swnav
