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

#include "swnav/supervision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "swnav/errors.hpp"
#include "swnav/rng.hpp"

namespace swnav {

AssignedTargets assign_targets(const std::array<AnchorSet, 4>& anchors,
                               const Trajectory& gt_future) {
  const auto prefixes = horizon_split(gt_future);
  AssignedTargets targets;
  for (int i = 0; i < 4; ++i) {
    targets.positive[i] = nearest_anchor_by_endpoint(anchors[i], prefixes[i]);
    targets.gt_prefix[i] = prefixes[i];
  }
  return targets;
}

namespace {

double smooth_l1_scalar(double e) {
  return std::abs(e) < 1.0 ? 0.5 * e * e : std::abs(e) - 0.5;
}

}  // namespace

double regression_loss(const Trajectory& pred, const Trajectory& gt, double w_psi) {
  if (pred.size() != gt.size()) throw LengthMismatch("regression_loss: length mismatch");
  double xy = 0.0, psi = 0.0;
  for (int j = 0; j < pred.size(); ++j) {
    xy += smooth_l1_scalar(pred.poses[j].x - gt.poses[j].x);
    xy += smooth_l1_scalar(pred.poses[j].y - gt.poses[j].y);
    psi += smooth_l1_scalar(wrap_angle(pred.poses[j].psi - gt.poses[j].psi));
  }
  return (xy + w_psi * psi) / pred.size();
}

double classification_loss(const std::vector<double>& conf, int positive,
                           double eps) {
  if (conf.empty()) throw EmptyInput("classification_loss: no confidences");
  double sum = 0.0;
  for (int m = 0; m < static_cast<int>(conf.size()); ++m) {
    const double p = std::clamp(conf[m], eps, 1.0 - eps);
    const double y = m == positive ? 1.0 : 0.0;
    sum += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  }
  return sum / static_cast<double>(conf.size());
}

namespace {

// Ground-truth prefix flattened to the head layout: [x y interleaved | psi].
Tensor gt_xy_tensor(const Trajectory& gt) {
  Tensor t(1, 2 * gt.size());
  for (int j = 0; j < gt.size(); ++j) {
    t.at(0, 2 * j) = gt.poses[j].x;
    t.at(0, 2 * j + 1) = gt.poses[j].y;
  }
  return t;
}

Tensor gt_psi_tensor(const Trajectory& gt) {
  Tensor t(1, gt.size());
  for (int j = 0; j < gt.size(); ++j) t.at(0, j) = gt.poses[j].psi;
  return t;
}

// Regression term for a single flattened trajectory row on the tape.
Tape::Id tape_regression(Tape& tape, Tape::Id pred_row, const Trajectory& gt,
                         double w_psi) {
  const int len = gt.size();
  const Tape::Id xy_pred = tape.slice_cols(pred_row, 0, 2 * len);
  const Tape::Id psi_pred = tape.slice_cols(pred_row, 2 * len, 3 * len);
  const Tape::Id xy_err = tape.sub(xy_pred, tape.input(gt_xy_tensor(gt)));
  const Tape::Id psi_err =
      tape.wrap_angle(tape.sub(psi_pred, tape.input(gt_psi_tensor(gt))));
  const Tape::Id xy_term =
      tape.affine(tape.reduce_sum(tape.smooth_l1(xy_err)), 1.0 / len);
  const Tape::Id psi_term =
      tape.affine(tape.reduce_sum(tape.smooth_l1(psi_err)), w_psi / len);
  return tape.add(xy_term, psi_term);
}

}  // namespace

LossIds build_total_loss(Tape& tape, const PolicyNet& net, const BundleIds& bundle,
                         const AssignedTargets& targets,
                         const Trajectory& gt_future) {
  const PolicyConfig& cfg = net.config();
  const int m = cfg.num_modes;
  const double eps = cfg.conf_eps;
  LossIds ids;

  std::vector<Tape::Id> layer_totals;
  for (const auto& layer : bundle.layers) {
    Tape::Id reg_sum = -1, cls_sum = -1;
    for (int i = 0; i < 4; ++i) {
      if (layer.traj[i] < 0) continue;
      const int h = targets.positive[i];
      const Tape::Id winner = tape.slice_rows(layer.traj[i], h, h + 1);
      const Tape::Id reg_i =
          tape_regression(tape, winner, targets.gt_prefix[i], cfg.w_psi);
      reg_sum = reg_sum < 0 ? reg_i : tape.add(reg_sum, reg_i);

      // BCE over all modes against the one-hot target.
      Tensor y(m, 1), y_neg(m, 1);
      for (int mm = 0; mm < m; ++mm) {
        y.at(mm, 0) = mm == h ? 1.0 : 0.0;
        y_neg.at(mm, 0) = mm == h ? 0.0 : 1.0;
      }
      const Tape::Id p = tape.clamp(layer.conf[i], eps, 1.0 - eps);
      const Tape::Id log_p = tape.log(p);
      const Tape::Id log_q = tape.log(tape.affine(p, -1.0, 1.0));
      const Tape::Id bce = tape.affine(
          tape.reduce_mean(tape.add(tape.mul(tape.input(y), log_p),
                                    tape.mul(tape.input(y_neg), log_q))),
          -1.0);
      cls_sum = cls_sum < 0 ? bce : tape.add(cls_sum, bce);
    }

    Tape::Id qf_id = -1;
    if (layer.qf >= 0) {
      Trajectory qf_gt;
      qf_gt.rate_hz = gt_future.rate_hz;
      qf_gt.poses.assign(gt_future.poses.begin(),
                         gt_future.poses.begin() + cfg.qf_len());
      qf_id = tape_regression(tape, layer.qf, qf_gt, cfg.w_psi);
    }

    Tape::Id layer_total = -1;
    Tape::Id cls_weighted = -1;
    if (cls_sum >= 0) cls_weighted = tape.affine(cls_sum, cfg.lambda_cls);
    for (Tape::Id part : {reg_sum, cls_weighted, qf_id}) {
      if (part < 0) continue;
      layer_total = layer_total < 0 ? part : tape.add(layer_total, part);
    }
    if (layer_total < 0) {
      layer_total = tape.input(Tensor::scalar(0.0));
    }
    ids.layer_reg.push_back(reg_sum);
    ids.layer_cls.push_back(cls_weighted);
    ids.layer_qf.push_back(qf_id);
    ids.layer_total.push_back(layer_total);
    layer_totals.push_back(layer_total);
  }

  Tape::Id sum = layer_totals[0];
  for (size_t k = 1; k < layer_totals.size(); ++k) sum = tape.add(sum, layer_totals[k]);
  ids.total = tape.affine(sum, 1.0 / static_cast<double>(layer_totals.size()));
  return ids;
}

LossReport read_loss_report(const Tape& tape, const LossIds& ids) {
  LossReport rep;
  rep.total = tape.value(ids.total).data[0];
  const double k = static_cast<double>(ids.layer_total.size());
  for (size_t i = 0; i < ids.layer_total.size(); ++i) {
    rep.layer_total.push_back(tape.value(ids.layer_total[i]).data[0]);
    if (ids.layer_reg[i] >= 0) rep.reg += tape.value(ids.layer_reg[i]).data[0] / k;
    if (ids.layer_cls[i] >= 0) rep.cls += tape.value(ids.layer_cls[i]).data[0] / k;
    if (ids.layer_qf[i] >= 0) rep.qf += tape.value(ids.layer_qf[i]).data[0] / k;
  }
  return rep;
}

// --- GMM NLL ---

void GmmParams::validate() const {
  if (weights.empty() || weights.size() != means.size() ||
      weights.size() != sigma.size()) {
    throw LengthMismatch("GmmParams: component count mismatch");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw Error("GmmParams: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("GmmParams: weights must sum to 1");
  for (size_t m = 0; m < sigma.size(); ++m) {
    if (sigma[m].size() != means[m].poses.size()) {
      throw LengthMismatch("GmmParams: sigma length mismatch");
    }
    for (double s : sigma[m]) {
      if (!(s > 0.0)) throw DegenerateSigma("GmmParams: sigma must be positive");
    }
  }
}

double gmm_nll(const GmmParams& params, const Trajectory& action) {
  params.validate();
  const int t = action.size();
  std::vector<double> log_terms;
  log_terms.reserve(params.weights.size());
  for (size_t m = 0; m < params.weights.size(); ++m) {
    if (params.means[m].size() != t) {
      throw LengthMismatch("gmm_nll: action/mean length mismatch");
    }
    if (params.weights[m] == 0.0) continue;
    double lp = std::log(params.weights[m]);
    for (int j = 0; j < t; ++j) {
      const double s2 = params.sigma[m][j] * params.sigma[m][j];
      const double dx = action.poses[j].x - params.means[m].poses[j].x;
      const double dy = action.poses[j].y - params.means[m].poses[j].y;
      lp += -std::log(2.0 * M_PI * s2) - (dx * dx + dy * dy) / (2.0 * s2);
    }
    log_terms.push_back(lp);
  }
  if (log_terms.empty()) throw Error("gmm_nll: all weights zero");
  const double mx = *std::max_element(log_terms.begin(), log_terms.end());
  double acc = 0.0;
  for (double lp : log_terms) acc += std::exp(lp - mx);
  return -(mx + std::log(acc));
}

// --- training ---

double cosine_lr(double lr0, int epoch, int total_epochs) {
  if (total_epochs <= 0) return lr0;
  return lr0 * 0.5 * (1.0 + std::cos(M_PI * static_cast<double>(epoch) /
                                     static_cast<double>(total_epochs)));
}

std::vector<EpochStats> train(PolicyNet* net, const std::vector<TrainItem>& items,
                              const TrainConfig& cfg, std::ostream* log) {
  if (items.empty()) throw EmptyDataset("train: no samples");
  const PolicyConfig& pc = net->config();

  std::vector<AssignedTargets> targets;
  targets.reserve(items.size());
  for (const auto& item : items) {
    targets.push_back(assign_targets(net->anchor_sets(), item.gt_future));
  }

  Rng root(cfg.seed);
  std::vector<int> order(items.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  std::vector<EpochStats> history;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cosine_lr(cfg.lr0, epoch, cfg.epochs);
    Rng shuffle_rng = root.derive(Rng::mix(0x5f, epoch));
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.uniform_int(static_cast<uint64_t>(i))]);
    }

    EpochStats stats;
    stats.lr = lr;
    size_t cursor = 0;
    while (cursor < order.size()) {
      const size_t batch_end = std::min(cursor + cfg.batch_size, order.size());
      const int batch_n = static_cast<int>(batch_end - cursor);
      net->zero_grads();
      for (size_t b = cursor; b < batch_end; ++b) {
        const int idx = order[b];
        const TrainItem& item = items[idx];
        std::vector<const std::vector<uint8_t>*> frames;
        frames.reserve(item.frames.size());
        for (const auto& f : item.frames) frames.push_back(f.get());
        const PolicyInput input = build_input(frames, item.goal, item.cam, pc);

        Rng mask_rng(Rng::mix(cfg.seed, Rng::mix(epoch, idx)));
        Tape tape;
        const BundleIds bundle = net->forward(tape, input, true, &mask_rng);
        const LossIds ids =
            build_total_loss(tape, *net, bundle, targets[idx], item.gt_future);
        tape.backward(ids.total);
        net->accumulate_param_grads(tape);

        const LossReport rep = read_loss_report(tape, ids);
        stats.total += rep.total;
        stats.reg += rep.reg;
        stats.cls += rep.cls;
        stats.qf += rep.qf;
      }
      // Mean gradient over the batch.
      for (auto& [name, p] : net->params()) {
        for (double& g : p.grad.data) g /= batch_n;
      }
      net->sgd_momentum_step(lr, cfg.momentum);
      cursor = batch_end;
    }
    const double n = static_cast<double>(items.size());
    stats.total /= n;
    stats.reg /= n;
    stats.cls /= n;
    stats.qf /= n;
    history.push_back(stats);
    if (log) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f %.3e\n", epoch,
                    stats.total, stats.reg, stats.cls, stats.qf, lr);
      (*log) << buf;
    }
  }
  return history;
}

}  // namespace swnav
