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

#ifndef SWNAV_METRICS_HPP_
#define SWNAV_METRICS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "swnav/trajcore.hpp"

namespace swnav {

struct EvalConfig {
  double match_time_s = 1.0;
  double match_radius_m = 1.0;
  std::vector<double> l2_horizons_s = {1.0, 2.0, 4.0, 8.0};
  int nms_top_k = 6;
  double nms_radius_m = 0.5;
};

struct EvalReport {
  double min_ade_1s = 0.0;
  double min_fde_1s = 0.0;
  std::optional<double> map;  // absent when no multi-modal head is active
  std::vector<double> l2;     // one entry per configured horizon
  std::optional<double> nll;
  int sample_count = 0;
};

/// One evaluated sample: candidate modes (ego frame), confidences, ground
/// truth future.
struct PredictionSample {
  std::vector<Trajectory> candidates;
  std::vector<double> confidences;
  Trajectory gt;
};

/// Min over candidates of mean (x, y) displacement over the first
/// horizon_s * rate_hz waypoints.
double min_ade(const std::vector<Trajectory>& candidates, const Trajectory& gt,
               double horizon_s, double rate_hz);

/// Min over candidates of endpoint displacement at the horizon index.
double min_fde(const std::vector<Trajectory>& candidates, const Trajectory& gt,
               double horizon_s, double rate_hz);

/// Single-ground-truth average precision: predictions pooled over samples and
/// ranked by confidence (ties by sample, then mode); a prediction is a true
/// positive when its endpoint at match_time_s lies within match_radius_m of
/// its own sample's ground truth and that ground truth is still unmatched.
/// Area under the precision envelope.
double average_precision(const std::vector<PredictionSample>& samples,
                         const EvalConfig& cfg);

/// Endpoint displacement at horizon_s between the most-confident candidate
/// and the ground truth.
double l2_at(const std::vector<Trajectory>& candidates,
             const std::vector<double>& confidences, const Trajectory& gt,
             double horizon_s, double rate_hz);

/// Greedy non-maximum suppression on full-horizon endpoints. Returns kept
/// indices in selection order (confidence non-increasing).
std::vector<int> endpoint_nms(const std::vector<Trajectory>& candidates,
                              const std::vector<double>& confidences, int top_k,
                              double radius);

/// Aggregate report over a set of samples (means for displacement metrics,
/// pooled AP).
EvalReport evaluate(const std::vector<PredictionSample>& samples,
                    const EvalConfig& cfg, double rate_hz);

/// Text table in Table-style column order, plus one machine-readable line.
std::string format_report(const EvalReport& report, const EvalConfig& cfg,
                          const std::string& title);

}  // namespace swnav

#endif  // SWNAV_METRICS_HPP_
