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

#ifndef SWNAV_EVALRUN_HPP_
#define SWNAV_EVALRUN_HPP_

#include <vector>

#include "swnav/dataset.hpp"
#include "swnav/metrics.hpp"
#include "swnav/policynet.hpp"
#include "swnav/scenegen.hpp"

namespace swnav {

struct EvalOptions {
  std::vector<Provenance> provenance_filter;  // empty = all records
  EvalConfig metrics;
  double nll_sigma = 0.5;
};

/// Eval-mode forward; candidates come from the longest enabled horizon of the
/// final layer, or from the query-free head when no horizon head is active.
PredictionSample predict_sample(PolicyNet* net, const TrainItem& item);

EvalReport evaluate_items(PolicyNet* net, const std::vector<TrainItem>& items,
                          const EvalOptions& opts, double rate_hz);

EvalReport evaluate_store(PolicyNet* net, const SampleStore& store,
                          FrameCache* cache, const EvalOptions& opts);

/// Raw full-horizon anchors with uniform confidence as the candidate set.
EvalReport evaluate_anchor_baseline(const std::array<AnchorSet, 4>& anchors,
                                    const SampleStore& store,
                                    const EvalOptions& opts);

/// Closed-loop adapter: renders -> bytes -> net, returns the most-confident
/// full-horizon trajectory (query-free when no horizon head is enabled).
RolloutPolicy make_net_policy(PolicyNet* net);

}  // namespace swnav

#endif  // SWNAV_EVALRUN_HPP_
