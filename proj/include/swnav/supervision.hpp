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

#ifndef SWNAV_SUPERVISION_HPP_
#define SWNAV_SUPERVISION_HPP_

#include <array>
#include <iosfwd>
#include <vector>

#include "swnav/anchors.hpp"
#include "swnav/autodiff.hpp"
#include "swnav/dataset.hpp"
#include "swnav/policynet.hpp"
#include "swnav/trajcore.hpp"

namespace swnav {

/// Positive mode per horizon, decided by anchor endpoints against the
/// ground-truth prefix endpoint. Layer-independent.
struct AssignedTargets {
  std::array<int, 4> positive = {0, 0, 0, 0};
  std::array<Trajectory, 4> gt_prefix;
};

AssignedTargets assign_targets(const std::array<AnchorSet, 4>& anchors,
                               const Trajectory& gt_future);

/// Smooth-L1 over (x, y) plus w_psi-weighted smooth-L1 over the wrapped
/// heading difference, averaged over waypoints.
double regression_loss(const Trajectory& pred, const Trajectory& gt, double w_psi);

/// Mean over modes of binary cross-entropy against a one-hot target, with
/// confidences clamped to [eps, 1-eps].
double classification_loss(const std::vector<double>& conf, int positive,
                           double eps = 1e-7);

struct LossReport {
  double total = 0.0;
  double reg = 0.0;  // winner-take-all regression, summed over horizons
  double cls = 0.0;  // lambda-weighted classification term
  double qf = 0.0;
  std::vector<double> layer_total;
};

/// Tape handles for the differentiable loss.
struct LossIds {
  Tape::Id total = -1;
  std::vector<Tape::Id> layer_total;
  std::vector<Tape::Id> layer_reg;
  std::vector<Tape::Id> layer_cls;
  std::vector<Tape::Id> layer_qf;
};

/// Builds the multi-scale loss on the tape: per layer, winner-take-all
/// regression + lambda * BCE over the enabled horizons plus the query-free
/// term; the total averages the layers.
LossIds build_total_loss(Tape& tape, const PolicyNet& net, const BundleIds& bundle,
                         const AssignedTargets& targets, const Trajectory& gt_future);

LossReport read_loss_report(const Tape& tape, const LossIds& ids);

// --- GMM NLL ---

struct GmmParams {
  std::vector<double> weights;             // M, >= 0, sums to 1
  std::vector<Trajectory> means;           // M trajectories
  std::vector<std::vector<double>> sigma;  // M x T per-waypoint stddev, > 0

  void validate() const;
};

/// -log sum_m w_m prod_t N(a_t; mu_{m,t}, sigma^2 I_2) over (x, y), computed
/// in log space.
double gmm_nll(const GmmParams& params, const Trajectory& action);

// --- training loop ---

struct TrainConfig {
  int epochs = 20;
  int batch_size = 8;
  double lr0 = 1e-4;
  double momentum = 0.9;
  uint64_t seed = 0;
};

double cosine_lr(double lr0, int epoch, int total_epochs);

struct EpochStats {
  double total = 0.0, reg = 0.0, cls = 0.0, qf = 0.0, lr = 0.0;
};

/// Mini-batch SGD with momentum under a cosine schedule. Deterministic given
/// the seed. When `log` is set, emits one `epoch total reg cls qf lr` line per
/// epoch.
std::vector<EpochStats> train(PolicyNet* net, const std::vector<TrainItem>& items,
                              const TrainConfig& cfg, std::ostream* log = nullptr);

}  // namespace swnav

#endif  // SWNAV_SUPERVISION_HPP_
