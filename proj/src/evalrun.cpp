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

#include "swnav/evalrun.hpp"

#include <algorithm>
#include <cmath>

#include "swnav/errors.hpp"
#include "swnav/supervision.hpp"

namespace swnav {

namespace {

int longest_enabled_horizon(const PolicyConfig& cfg) {
  for (int i = 3; i >= 0; --i) {
    if (cfg.head_enabled[i]) return i;
  }
  return -1;
}

// Keep only L2 horizons the candidates can reach.
EvalConfig clip_horizons(const EvalConfig& cfg, int span_steps, double rate_hz) {
  EvalConfig out = cfg;
  out.l2_horizons_s.clear();
  for (double h : cfg.l2_horizons_s) {
    if (static_cast<int>(std::lround(h * rate_hz)) <= span_steps) {
      out.l2_horizons_s.push_back(h);
    }
  }
  return out;
}

}  // namespace

PredictionSample predict_sample(PolicyNet* net, const TrainItem& item) {
  const PolicyConfig& cfg = net->config();
  std::vector<const std::vector<uint8_t>*> frames;
  frames.reserve(item.frames.size());
  for (const auto& f : item.frames) frames.push_back(f.get());
  const PolicyInput input = build_input(frames, item.goal, item.cam, cfg);

  Tape tape;
  const BundleIds ids = net->forward(tape, input, false);
  const PredictionBundle bundle = net->extract(tape, ids);
  const auto& last = bundle.layers.back();

  PredictionSample sample;
  sample.gt = item.gt_future;
  const int horizon = longest_enabled_horizon(cfg);
  if (horizon >= 0) {
    const int len = cfg.horizon_lens()[horizon];
    sample.candidates = PolicyNet::to_trajectories(last.traj[horizon], len, cfg.rate_hz);
    sample.confidences = PolicyNet::to_confidences(last.conf[horizon]);
  } else if (cfg.qf_enabled) {
    sample.candidates =
        PolicyNet::to_trajectories(last.qf, cfg.qf_len(), cfg.rate_hz);
    sample.confidences = {1.0};
  } else {
    throw Error("predict_sample: no prediction head enabled");
  }
  return sample;
}

EvalReport evaluate_items(PolicyNet* net, const std::vector<TrainItem>& items,
                          const EvalOptions& opts, double rate_hz) {
  if (items.empty()) throw EmptyDataset("evaluate_items: no samples");
  std::vector<PredictionSample> samples;
  samples.reserve(items.size());
  for (const auto& item : items) samples.push_back(predict_sample(net, item));

  const int span = samples.front().candidates.front().size();
  EvalReport report =
      evaluate(samples, clip_horizons(opts.metrics, span, rate_hz), rate_hz);

  // Mixture NLL of the ground truth under the predicted modes, fixed sigma.
  if (samples.front().candidates.size() > 1) {
    double nll_sum = 0.0;
    for (const auto& s : samples) {
      GmmParams gmm;
      double total_conf = 0.0;
      for (double c : s.confidences) total_conf += c;
      for (size_t m = 0; m < s.candidates.size(); ++m) {
        gmm.weights.push_back(total_conf > 0.0
                                  ? s.confidences[m] / total_conf
                                  : 1.0 / static_cast<double>(s.candidates.size()));
        gmm.means.push_back(s.candidates[m]);
        gmm.sigma.emplace_back(s.candidates[m].size(), opts.nll_sigma);
      }
      Trajectory gt_clip = s.gt;
      gt_clip.poses.resize(s.candidates.front().size());
      nll_sum += gmm_nll(gmm, gt_clip);
    }
    report.nll = nll_sum / static_cast<double>(samples.size());
  }
  return report;
}

EvalReport evaluate_store(PolicyNet* net, const SampleStore& store,
                          FrameCache* cache, const EvalOptions& opts) {
  const auto items = load_train_items(store, cache, opts.provenance_filter);
  if (items.empty()) throw EmptyDataset("evaluate_store: no matching samples");
  return evaluate_items(net, items, opts, store.rate_hz);
}

EvalReport evaluate_anchor_baseline(const std::array<AnchorSet, 4>& anchors,
                                    const SampleStore& store,
                                    const EvalOptions& opts) {
  const AnchorSet& full = anchors[3];
  std::vector<double> uniform(full.num_modes,
                              1.0 / static_cast<double>(full.num_modes));
  std::vector<PredictionSample> samples;
  for (const SampleRecord& r : store.records) {
    if (!opts.provenance_filter.empty() &&
        std::find(opts.provenance_filter.begin(), opts.provenance_filter.end(),
                  r.provenance) == opts.provenance_filter.end()) {
      continue;
    }
    PredictionSample s;
    s.candidates = full.anchors;
    for (auto& c : s.candidates) c.rate_hz = store.rate_hz;
    s.confidences = uniform;
    const SampleWindow window = read_sample_window(r.window_path, store.history_len,
                                                   store.horizon, store.rate_hz);
    s.gt = window.future_ego;
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw EmptyDataset("evaluate_anchor_baseline: no samples");
  return evaluate(samples, clip_horizons(opts.metrics, full.horizon_len, store.rate_hz),
                  store.rate_hz);
}

RolloutPolicy make_net_policy(PolicyNet* net) {
  return [net](const RolloutObs& obs) -> Trajectory {
    const PolicyConfig& cfg = net->config();
    std::vector<std::vector<uint8_t>> frame_bytes;
    std::vector<const std::vector<uint8_t>*> frames;
    frame_bytes.reserve(obs.frames.size());
    for (const RgbFrame* f : obs.frames) frame_bytes.push_back(rgb_to_bytes(*f));
    for (const auto& b : frame_bytes) frames.push_back(&b);
    const PolicyInput input =
        build_input(frames, obs.goal, obs.cam->feature_vector(), cfg);

    Tape tape;
    const BundleIds ids = net->forward(tape, input, false);
    const PredictionBundle bundle = net->extract(tape, ids);
    const auto& last = bundle.layers.back();

    const int horizon = longest_enabled_horizon(cfg);
    if (horizon < 0) {
      return PolicyNet::to_trajectories(last.qf, cfg.qf_len(), cfg.rate_hz)[0];
    }
    const auto candidates = PolicyNet::to_trajectories(
        last.traj[horizon], cfg.horizon_lens()[horizon], cfg.rate_hz);
    const auto conf = PolicyNet::to_confidences(last.conf[horizon]);
    int best = 0;
    for (size_t m = 1; m < conf.size(); ++m) {
      if (conf[m] > conf[best]) best = static_cast<int>(m);
    }
    return candidates[best];
  };
}

}  // namespace swnav
