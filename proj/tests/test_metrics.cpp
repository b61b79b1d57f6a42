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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "swnav/errors.hpp"
#include "swnav/metrics.hpp"
#include "swnav/rng.hpp"

using namespace swnav;

namespace {

Trajectory make_path(std::initializer_list<std::pair<double, double>> pts,
                     double rate = 5.0) {
  Trajectory t;
  t.rate_hz = rate;
  for (const auto& [x, y] : pts) t.poses.push_back(Pose{x, y, 0});
  return t;
}

Trajectory random_path(int len, Rng& rng) {
  Trajectory t;
  t.rate_hz = 5.0;
  Pose p{0, 0, 0};
  for (int i = 0; i < len; ++i) {
    p.x += rng.uniform(-0.3, 0.5);
    p.y += rng.uniform(-0.4, 0.4);
    t.poses.push_back(p);
  }
  return t;
}

// --- brute-force oracles, written independently of the implementations ---

double oracle_min_ade(const std::vector<Trajectory>& cands, const Trajectory& gt,
                      int steps) {
  double best = 1e300;
  for (const auto& c : cands) {
    double acc = 0;
    for (int j = 0; j < steps; ++j) {
      const double dx = c.poses[j].x - gt.poses[j].x;
      const double dy = c.poses[j].y - gt.poses[j].y;
      acc += std::sqrt(dx * dx + dy * dy);
    }
    if (acc / steps < best) best = acc / steps;
  }
  return best;
}

double oracle_min_fde(const std::vector<Trajectory>& cands, const Trajectory& gt,
                      int steps) {
  double best = 1e300;
  for (const auto& c : cands) {
    const double dx = c.poses[steps - 1].x - gt.poses[steps - 1].x;
    const double dy = c.poses[steps - 1].y - gt.poses[steps - 1].y;
    best = std::min(best, std::sqrt(dx * dx + dy * dy));
  }
  return best;
}

double oracle_ap(const std::vector<PredictionSample>& samples, double radius,
                 int steps) {
  struct Row {
    double conf;
    int sample, mode;
  };
  std::vector<Row> rows;
  for (int s = 0; s < static_cast<int>(samples.size()); ++s) {
    for (int m = 0; m < static_cast<int>(samples[s].candidates.size()); ++m) {
      rows.push_back({samples[s].confidences[m], s, m});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.conf != b.conf) return a.conf > b.conf;
    if (a.sample != b.sample) return a.sample < b.sample;
    return a.mode < b.mode;
  });
  std::vector<int> used(samples.size(), 0);
  std::vector<int> is_tp;
  for (const Row& r : rows) {
    const auto& c = samples[r.sample].candidates[r.mode].poses[steps - 1];
    const auto& g = samples[r.sample].gt.poses[steps - 1];
    const double d = std::hypot(c.x - g.x, c.y - g.y);
    if (d <= radius && !used[r.sample]) {
      used[r.sample] = 1;
      is_tp.push_back(1);
    } else {
      is_tp.push_back(0);
    }
  }
  // Integrate max-precision-to-the-right over recall steps.
  const int n_gt = static_cast<int>(samples.size());
  double ap = 0;
  int tp = 0;
  for (size_t k = 0; k < is_tp.size(); ++k) {
    if (!is_tp[k]) continue;
    ++tp;
    // Precision envelope at this recall level: best precision at any cutoff
    // j >= k.
    double best_prec = 0;
    int tp2 = 0;
    for (size_t j = 0; j < is_tp.size(); ++j) {
      tp2 += is_tp[j];
      if (j >= k) best_prec = std::max(best_prec, tp2 / static_cast<double>(j + 1));
    }
    ap += best_prec / n_gt;
  }
  return ap;
}

std::vector<int> oracle_nms(const std::vector<Trajectory>& cands,
                            const std::vector<double>& conf, int top_k,
                            double radius) {
  std::vector<int> alive(cands.size(), 1);
  std::vector<int> kept;
  while (static_cast<int>(kept.size()) < top_k) {
    int pick = -1;
    for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
      if (!alive[i]) continue;
      if (pick < 0 || conf[i] > conf[pick]) pick = i;
    }
    if (pick < 0) break;
    kept.push_back(pick);
    alive[pick] = 0;
    for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
      if (!alive[i]) continue;
      const auto& a = cands[pick].poses.back();
      const auto& b = cands[i].poses.back();
      if (std::hypot(a.x - b.x, a.y - b.y) <= radius) alive[i] = 0;
    }
  }
  return kept;
}

}  // namespace

TEST_CASE("min_ade examples") {
  const Trajectory gt = make_path({{0.2, 0}, {0.4, 0}, {0.6, 0}, {0.8, 0}, {1.0, 0}});
  SUBCASE("a candidate equal to gt scores zero") {
    CHECK(min_ade({gt, make_path({{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}})}, gt, 1.0,
                  5.0) == doctest::Approx(0.0));
  }
  SUBCASE("constant offset") {
    Trajectory off = gt;
    for (auto& p : off.poses) p.y += 0.3;
    CHECK(min_ade({off}, gt, 1.0, 5.0) == doctest::Approx(0.3));
  }
  SUBCASE("horizon beyond prediction throws") {
    CHECK_THROWS_AS(min_ade({gt}, gt, 2.0, 5.0), HorizonExceedsPrediction);
  }
}

TEST_CASE("min_fde examples") {
  const Trajectory gt = make_path({{0.2, 0}, {0.4, 0}, {0.6, 0}, {0.8, 0}, {1.0, 0}});
  SUBCASE("endpoint-only metric ignores the path shape") {
    Trajectory weird = make_path({{5, 5}, {-3, 2}, {0, 0}, {9, 9}, {1.0, 0}});
    CHECK(min_fde({weird}, gt, 1.0, 5.0) == doctest::Approx(0.0));
  }
  SUBCASE("all endpoints at distance 2") {
    Trajectory a = gt, b = gt;
    a.poses.back().y += 2.0;
    b.poses.back().x += 2.0;
    CHECK(min_fde({a, b}, gt, 1.0, 5.0) == doctest::Approx(2.0));
  }
}

TEST_CASE("metric oracles agree on random instances") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform_int(8ULL));
    const int len = 5 + static_cast<int>(rng.uniform_int(8ULL));
    const Trajectory gt = random_path(len, rng);
    std::vector<Trajectory> cands;
    std::vector<double> conf;
    for (int i = 0; i < m; ++i) {
      cands.push_back(random_path(len, rng));
      conf.push_back(rng.uniform(0.0, 1.0));
    }
    const int steps = 5;
    CHECK(min_ade(cands, gt, 1.0, 5.0) ==
          doctest::Approx(oracle_min_ade(cands, gt, steps)).epsilon(1e-12));
    CHECK(min_fde(cands, gt, 1.0, 5.0) ==
          doctest::Approx(oracle_min_fde(cands, gt, steps)).epsilon(1e-12));

    const auto kept = endpoint_nms(cands, conf, 3, 0.5);
    const auto kept_oracle = oracle_nms(cands, conf, 3, 0.5);
    CHECK(kept == kept_oracle);
  }
}

TEST_CASE("min_ade and min_fde are candidate-permutation invariant") {
  Rng rng(33);
  const Trajectory gt = random_path(6, rng);
  std::vector<Trajectory> cands;
  for (int i = 0; i < 5; ++i) cands.push_back(random_path(6, rng));
  const double ade = min_ade(cands, gt, 1.0, 5.0);
  const double fde = min_fde(cands, gt, 1.0, 5.0);
  std::reverse(cands.begin(), cands.end());
  CHECK(min_ade(cands, gt, 1.0, 5.0) == ade);
  CHECK(min_fde(cands, gt, 1.0, 5.0) == fde);
}

TEST_CASE("average precision basics") {
  EvalConfig cfg;
  auto endpoint_path = [](double x, double y) {
    Trajectory t;
    t.rate_hz = 5.0;
    for (int i = 0; i < 5; ++i) t.poses.push_back(Pose{x * (i + 1) / 5, y * (i + 1) / 5, 0});
    return t;
  };

  SUBCASE("perfect ranking gives AP 1") {
    std::vector<PredictionSample> samples(3);
    for (auto& s : samples) {
      s.gt = endpoint_path(1, 0);
      s.candidates = {endpoint_path(1, 0), endpoint_path(9, 9)};
      s.confidences = {0.9, 0.1};
    }
    CHECK(average_precision(samples, cfg) == doctest::Approx(1.0));
  }
  SUBCASE("no prediction within radius gives AP 0") {
    std::vector<PredictionSample> samples(2);
    for (auto& s : samples) {
      s.gt = endpoint_path(1, 0);
      s.candidates = {endpoint_path(9, 9)};
      s.confidences = {0.9};
    }
    CHECK(average_precision(samples, cfg) == doctest::Approx(0.0));
  }
  SUBCASE("hand-computed two-sample case") {
    // Pool sorted by confidence: TP(0.9), FP(0.85), FP(0.8, gt already
    // matched), TP(0.7). Envelope integration gives 0.5*1 + 0.5*0.5 = 0.75.
    std::vector<PredictionSample> samples(2);
    samples[0].gt = endpoint_path(1, 0);
    samples[0].candidates = {endpoint_path(1, 0), endpoint_path(1.1, 0)};
    samples[0].confidences = {0.9, 0.8};
    samples[1].gt = endpoint_path(1, 0);
    samples[1].candidates = {endpoint_path(9, 9), endpoint_path(1, 0.1)};
    samples[1].confidences = {0.85, 0.7};
    CHECK(average_precision(samples, cfg) == doctest::Approx(0.75).epsilon(1e-12));
  }
}

TEST_CASE("average precision matches the oracle on random instances") {
  Rng rng(35);
  EvalConfig cfg;
  for (int trial = 0; trial < 40; ++trial) {
    const int n_samples = 1 + static_cast<int>(rng.uniform_int(4ULL));
    std::vector<PredictionSample> samples(n_samples);
    for (auto& s : samples) {
      s.gt = random_path(6, rng);
      const int m = 1 + static_cast<int>(rng.uniform_int(8ULL));
      for (int i = 0; i < m; ++i) {
        Trajectory c = s.gt;
        for (auto& p : c.poses) {
          p.x += rng.uniform(-1.5, 1.5);
          p.y += rng.uniform(-1.5, 1.5);
        }
        s.candidates.push_back(c);
        s.confidences.push_back(rng.uniform(0.0, 1.0));
      }
    }
    const double ap = average_precision(samples, cfg);
    CHECK(ap == doctest::Approx(oracle_ap(samples, cfg.match_radius_m, 5))
                    .epsilon(1e-12));

    // Strictly monotone confidence transforms leave AP unchanged.
    std::vector<PredictionSample> squashed = samples;
    for (auto& s : squashed) {
      for (double& c : s.confidences) c = 1.0 / (1.0 + std::exp(-3.0 * c));
    }
    CHECK(average_precision(squashed, cfg) == doctest::Approx(ap).epsilon(1e-12));
  }
}

TEST_CASE("l2_at uses the most-confident candidate") {
  const Trajectory gt = make_path({{0.2, 0}, {0.4, 0}, {0.6, 0}, {0.8, 0}, {1.0, 0}});
  Trajectory close = gt;
  Trajectory far = gt;
  for (auto& p : far.poses) p.y += 1.0;

  SUBCASE("best equals gt") {
    CHECK(l2_at({gt, far}, {0.9, 0.1}, gt, 1.0, 5.0) == doctest::Approx(0.0));
  }
  SUBCASE("constant offset") {
    CHECK(l2_at({far}, {1.0}, gt, 1.0, 5.0) == doctest::Approx(1.0));
  }
  SUBCASE("differs from minFDE when confidence picks the worse mode") {
    const double l2 = l2_at({far, close}, {0.9, 0.1}, gt, 1.0, 5.0);
    const double fde = min_fde({far, close}, gt, 1.0, 5.0);
    CHECK(l2 == doctest::Approx(1.0));
    CHECK(fde == doctest::Approx(0.0));
    CHECK(l2 > fde);
  }
  SUBCASE("single mode: minFDE equals l2") {
    CHECK(min_fde({far}, gt, 1.0, 5.0) ==
          doctest::Approx(l2_at({far}, {0.7}, gt, 1.0, 5.0)));
  }
}

TEST_CASE("endpoint_nms basics") {
  auto path_to = [](double x, double y) {
    Trajectory t;
    t.rate_hz = 5;
    t.poses = {Pose{x / 2, y / 2, 0}, Pose{x, y, 0}};
    return t;
  };
  SUBCASE("identical endpoints collapse to one") {
    const std::vector<Trajectory> cands = {path_to(1, 0), path_to(1, 0),
                                           path_to(1, 0)};
    CHECK(endpoint_nms(cands, {0.5, 0.9, 0.1}, 6, 0.5) == std::vector<int>{1});
  }
  SUBCASE("well-separated endpoints all survive") {
    const std::vector<Trajectory> cands = {path_to(1, 0), path_to(3, 0),
                                           path_to(5, 0)};
    const auto kept = endpoint_nms(cands, {0.5, 0.9, 0.1}, 6, 0.5);
    CHECK(kept.size() == 3);
    CHECK(kept[0] == 1);  // confidence order
  }
  SUBCASE("kept confidences are non-increasing") {
    Rng rng(37);
    std::vector<Trajectory> cands;
    std::vector<double> conf;
    for (int i = 0; i < 10; ++i) {
      cands.push_back(path_to(rng.uniform(-2, 2), rng.uniform(-2, 2)));
      conf.push_back(rng.uniform(0, 1));
    }
    const auto kept = endpoint_nms(cands, conf, 6, 0.5);
    for (size_t i = 1; i < kept.size(); ++i) {
      CHECK(conf[kept[i]] <= conf[kept[i - 1]]);
    }
  }
}

TEST_CASE("metrics are invariant under joint rigid transforms") {
  Rng rng(39);
  EvalConfig cfg;
  cfg.l2_horizons_s = {1.0};
  for (int trial = 0; trial < 20; ++trial) {
    PredictionSample s;
    s.gt = random_path(6, rng);
    for (int i = 0; i < 4; ++i) {
      s.candidates.push_back(random_path(6, rng));
      s.confidences.push_back(rng.uniform(0, 1));
    }
    const double ade = min_ade(s.candidates, s.gt, 1.0, 5.0);
    const double fde = min_fde(s.candidates, s.gt, 1.0, 5.0);
    const double l2 = l2_at(s.candidates, s.confidences, s.gt, 1.0, 5.0);

    const double theta = rng.uniform(-M_PI, M_PI);
    const double tx = rng.uniform(-5, 5), ty = rng.uniform(-5, 5);
    auto rigid = [&](Trajectory& t) {
      for (auto& p : t.poses) {
        const double x = std::cos(theta) * p.x - std::sin(theta) * p.y + tx;
        const double y = std::sin(theta) * p.x + std::cos(theta) * p.y + ty;
        p.x = x;
        p.y = y;
      }
    };
    rigid(s.gt);
    for (auto& c : s.candidates) rigid(c);
    CHECK(min_ade(s.candidates, s.gt, 1.0, 5.0) == doctest::Approx(ade).epsilon(1e-9));
    CHECK(min_fde(s.candidates, s.gt, 1.0, 5.0) == doctest::Approx(fde).epsilon(1e-9));
    CHECK(l2_at(s.candidates, s.confidences, s.gt, 1.0, 5.0) ==
          doctest::Approx(l2).epsilon(1e-9));
  }
}

TEST_CASE("evaluate aggregates and formats a report") {
  Rng rng(41);
  EvalConfig cfg;
  cfg.l2_horizons_s = {1.0};
  std::vector<PredictionSample> samples(3);
  for (auto& s : samples) {
    s.gt = random_path(6, rng);
    s.candidates = {s.gt, random_path(6, rng)};
    s.confidences = {0.8, 0.2};
  }
  const EvalReport rep = evaluate(samples, cfg, 5.0);
  CHECK(rep.min_ade_1s == doctest::Approx(0.0));
  CHECK(rep.map.has_value());
  CHECK(*rep.map == doctest::Approx(1.0));
  const std::string text = format_report(rep, cfg, "test");
  CHECK(text.find("minADE=") != std::string::npos);
  CHECK(text.find("mAP=") != std::string::npos);
}
