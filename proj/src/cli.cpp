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

#include "swnav/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "swnav/errors.hpp"
#include "swnav/evalrun.hpp"
#include "swnav/rng.hpp"

namespace swnav {

namespace fs = std::filesystem;

void RunConfig::define(const std::string& key, const std::string& default_value,
                       const std::string& description) {
  values_[key] = default_value;
  desc_[key] = description + " [default: " + default_value + "]";
}

RunConfig::RunConfig() {
  define("seed", "0", "master seed for the command");
  // scenario generation
  define("scenarios", "64", "number of scenarios to generate");
  define("difficulty", "0.5", "obstacle density / curvature scale");
  define("frames", "150", "frames per scenario");
  define("rate_hz", "5", "log sampling rate");
  define("image_px", "64", "camera resolution (square)");
  define("cam_tilt", "0.45", "camera downward tilt, radians");
  define("render_far", "60", "render distance cutoff, meters");
  // paths
  define("data", "data", "scenario bundle directory");
  define("store", "store", "sample store directory (input)");
  define("store_out", "", "output store for expand (empty: <store>_x)");
  define("anchors", "anchors", "anchor set directory");
  define("ckpt", "policy.mnet", "checkpoint path");
  define("report", "", "optional report output file");
  define("inputs", "", "comma-separated report files for `report`");
  define("loss_curve", "", "loss curve output (empty: <ckpt>.curve)");
  // curation
  define("T_h", "16", "history length, frames");
  define("T", "40", "prediction horizon, frames");
  define("stride", "5", "sliding-window stride, frames");
  define("v_stop", "0.1", "stop threshold, m/s");
  define("theta_turn", "0.5235987755982988", "turn threshold, radians");
  define("omega_max", "0.5", "spin-in-place threshold, rad/s");
  define("v_back", "0.05", "backward-motion threshold, m/s");
  define("n_abn", "5", "consecutive abnormal frames before dropping");
  define("straight_cap", "0.5", "max straight fraction after balancing");
  define("goal_segment_prob", "0.5", "probability of segment-endpoint goals");
  // expansion
  define("corrective", "0", "expand with corrective pairs (0/1)");
  define("relight", "0", "expand with relit frames (0/1)");
  define("corrective_frac", "0.5", "fraction of originals to expand correctively");
  define("relight_frac", "0.5", "fraction of originals to relight");
  define("alpha_min", "0.2", "min perturbation displacement, meters");
  define("alpha_max", "1.0", "max perturbation displacement, meters");
  define("lateral_prob", "0.8", "probability of lateral (vs longitudinal) drift");
  define("c_min", "0.6", "min synthesized-frame coverage");
  define("d_max", "50", "unprojection depth cutoff, meters");
  define("d_split", "8", "foreground/background depth split, meters");
  define("splat_px", "2", "splat size, pixels");
  // model
  define("M", "64", "anchors / modes per horizon");
  define("hidden", "512", "embedding width");
  define("layers", "4", "decoder layers");
  define("heads", "1", "attention heads");
  define("patch_px", "8", "patch size, pixels");
  define("lambda", "1.0", "classification loss weight");
  define("w_psi", "0.5", "heading weight inside the regression loss");
  define("goal_mask_p", "0.5", "train-time goal token mask probability");
  define("token_mask_p", "0.2", "train-time mask probability for other tokens");
  define("pos_embed", "1", "learned positional embedding on fine tokens (0/1)");
  define("heads_enabled", "1111", "per-horizon head toggle, e.g. 0001");
  define("qf_enabled", "1", "query-free head toggle (0/1)");
  define("film_embed", "16", "sinusoid width for the FiLM time embedding");
  // training
  define("epochs", "20", "training epochs");
  define("batch", "8", "batch size");
  define("lr0", "1e-4", "initial learning rate (cosine decay)");
  define("momentum", "0.9", "SGD momentum");
  // evaluation
  define("split", "regular", "eval split: regular | recovery");
  define("match_time", "1.0", "AP match horizon, seconds");
  define("match_radius", "1.0", "AP match radius, meters");
  define("nms_topk", "6", "endpoint NMS keep count");
  define("nms_radius", "0.5", "endpoint NMS radius, meters");
  define("nll_sigma", "0.5", "fixed sigma for eval NLL");
  // rollout
  define("rollout_scenarios", "10", "scenarios to roll out");
  define("goal_ahead", "3.0", "rollout goal distance along the path, meters");
  define("max_steps", "200", "rollout step cap");
  define("v_max", "1.5", "rollout speed clamp, m/s");
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw Error("unknown config key: " + key);
  it->second = value;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("bad config line: " + line);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto strip = [](std::string& s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.pop_back();
      }
    };
    strip(key);
    strip(value);
    set(key, value);
  }
}

const std::string& RunConfig::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw Error("unknown config key: " + key);
  return it->second;
}

double RunConfig::num(const std::string& key) const { return std::stod(str(key)); }
int RunConfig::integer(const std::string& key) const { return std::stoi(str(key)); }
uint64_t RunConfig::u64(const std::string& key) const { return std::stoull(str(key)); }

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = str(key);
  return v == "1" || v == "true" || v == "yes";
}

std::string RunConfig::help_text() const {
  std::ostringstream os;
  for (const auto& [key, description] : desc_) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "  --%-18s %s\n", key.c_str(),
                  description.c_str());
    os << buf;
  }
  return os.str();
}

ScenarioConfig RunConfig::scenario_config() const {
  ScenarioConfig sc;
  sc.difficulty = num("difficulty");
  sc.n_frames = integer("frames");
  sc.rate_hz = num("rate_hz");
  sc.image_px = integer("image_px");
  sc.cam_tilt_down = num("cam_tilt");
  sc.render_far = num("render_far");
  return sc;
}

CurationConfig RunConfig::curation_config() const {
  CurationConfig cc;
  cc.v_stop = num("v_stop");
  cc.theta_turn = num("theta_turn");
  cc.omega_max = num("omega_max");
  cc.v_back = num("v_back");
  cc.n_abn = integer("n_abn");
  cc.straight_cap = num("straight_cap");
  cc.history_len = integer("T_h");
  cc.horizon = integer("T");
  cc.stride = integer("stride");
  cc.goal_segment_prob = num("goal_segment_prob");
  return cc;
}

ExpansionConfig RunConfig::expansion_config() const {
  ExpansionConfig ec;
  ec.c_min = num("c_min");
  ec.splat_px = integer("splat_px");
  ec.d_max = num("d_max");
  ec.d_split = num("d_split");
  ec.alpha_min = num("alpha_min");
  ec.alpha_max = num("alpha_max");
  ec.lateral_prob = num("lateral_prob");
  return ec;
}

PolicyConfig RunConfig::policy_config() const {
  PolicyConfig pc;
  pc.history_len = integer("T_h");
  pc.horizon = integer("T");
  pc.rate_hz = num("rate_hz");
  pc.num_modes = integer("M");
  pc.hidden = integer("hidden");
  pc.layers = integer("layers");
  pc.heads = integer("heads");
  pc.image_px = integer("image_px");
  pc.patch_px = integer("patch_px");
  pc.lambda_cls = num("lambda");
  pc.w_psi = num("w_psi");
  pc.goal_mask_p = num("goal_mask_p");
  pc.token_mask_p = num("token_mask_p");
  pc.use_pos_embed = flag("pos_embed");
  const std::string& he = str("heads_enabled");
  if (he.size() != 4) throw Error("heads_enabled must have 4 digits");
  for (int i = 0; i < 4; ++i) pc.head_enabled[i] = he[i] == '1';
  pc.qf_enabled = flag("qf_enabled");
  pc.film_embed = integer("film_embed");
  return pc;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig tc;
  tc.epochs = integer("epochs");
  tc.batch_size = integer("batch");
  tc.lr0 = num("lr0");
  tc.momentum = num("momentum");
  tc.seed = u64("seed");
  return tc;
}

EvalConfig RunConfig::eval_config() const {
  EvalConfig ec;
  ec.match_time_s = num("match_time");
  ec.match_radius_m = num("match_radius");
  ec.nms_top_k = integer("nms_topk");
  ec.nms_radius_m = num("nms_radius");
  return ec;
}

RolloutConfig RunConfig::rollout_config() const {
  RolloutConfig rc;
  rc.history_len = integer("T_h");
  rc.goal_ahead_m = num("goal_ahead");
  rc.max_steps = integer("max_steps");
  rc.v_max = num("v_max");
  return rc;
}

// --- subcommands ---

std::vector<ScenarioBundle> load_bundles(const std::string& data_dir) {
  std::vector<std::string> dirs;
  if (!fs::is_directory(data_dir)) throw IoError("no such data directory: " + data_dir);
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.txt")) {
      dirs.push_back(entry.path().string());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<ScenarioBundle> bundles;
  bundles.reserve(dirs.size());
  for (const auto& d : dirs) bundles.push_back(load_scenario_bundle(d));
  if (bundles.empty()) throw EmptyInput("no scenario bundles under " + data_dir);
  return bundles;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  const ScenarioConfig sc = cfg.scenario_config();
  const int n = cfg.integer("scenarios");
  const uint64_t seed = cfg.u64("seed");
  const std::string data_dir = cfg.str("data");
  fs::create_directories(data_dir);
  for (int i = 0; i < n; ++i) {
    const Scenario scenario = make_scenario(Rng::mix(seed, i), sc);
    char name[64];
    std::snprintf(name, sizeof(name), "scen_%04d", i);
    save_scenario_bundle((fs::path(data_dir) / name).string(), scenario);
    out << name << " seed=" << scenario.seed
        << " frames=" << scenario.expert.traj.poses.size()
        << " boxes=" << scenario.world.boxes.size() << "\n";
  }
  out << "generated " << n << " scenario bundles under " << data_dir << "\n";
  return 0;
}

int cmd_curate(const RunConfig& cfg, std::ostream& out) {
  const auto bundles = load_bundles(cfg.str("data"));
  CurationReport report;
  curate_bundles(bundles, cfg.curation_config(), cfg.u64("seed"), cfg.str("store"),
                 &report);
  out << report.to_text();
  std::ofstream rf(fs::path(cfg.str("store")) / "curation.txt");
  rf << report.to_text();
  return 0;
}

int cmd_expand(const RunConfig& cfg, std::ostream& out) {
  const SampleStore store = read_sample_store(cfg.str("store"));
  std::string out_dir = cfg.str("store_out");
  if (out_dir.empty()) out_dir = cfg.str("store") + "_x";
  const bool corrective = cfg.flag("corrective");
  const bool relight = cfg.flag("relight");
  const ExpansionConfig ec = cfg.expansion_config();
  const uint64_t seed = cfg.u64("seed");

  SampleStore expanded = store;
  expanded.dir = out_dir;
  fs::create_directories(fs::path(out_dir) / "frames");
  fs::create_directories(fs::path(out_dir) / "windows");

  FrameCache cache;
  Rng root(seed);
  int n_corrective = 0, n_relit = 0, n_skipped = 0;

  for (const SampleRecord& rec : store.records) {
    if (rec.provenance != Provenance::kOriginal) continue;
    const uint64_t rec_hash = Rng::hash_str(rec.id);

    if (corrective) {
      Rng rng = root.derive(Rng::mix(0xC0, rec_hash));
      if (rng.uniform() < cfg.num("corrective_frac")) {
        const double alpha = rng.uniform(ec.alpha_min, ec.alpha_max);
        const PerturbDirection dir = rng.bernoulli(ec.lateral_prob)
                                         ? PerturbDirection::kLateral
                                         : PerturbDirection::kLongitudinal;
        const SampleWindow window = read_sample_window(
            rec.window_path, store.history_len, store.horizon, store.rate_hz);
        std::vector<std::shared_ptr<const std::vector<uint8_t>>> rgb_keep;
        std::vector<std::shared_ptr<const DepthFrame>> depth_keep;
        std::vector<const RgbFrame*> rgbs;
        std::vector<const DepthFrame*> depths;
        std::vector<RgbFrame> rgb_frames;
        const CameraModel cam = CameraModel::from_feature_vector(rec.cam_features);
        for (int i = 0; i < store.history_len; ++i) {
          auto bytes = cache.rgb(rec.rgb_paths[i]);
          rgb_keep.push_back(bytes);
          rgb_frames.push_back(rgb_from_bytes(*bytes, cam.width, cam.height));
          depth_keep.push_back(cache.depth(rec.depth_paths[i]));
        }
        for (int i = 0; i < store.history_len; ++i) {
          rgbs.push_back(&rgb_frames[i]);
          depths.push_back(depth_keep[i].get());
        }
        try {
          const CorrectivePair pair =
              synthesize_corrective_pair(window, rec.anchor_world, rec.goal_world,
                                         rgbs, depths, cam, alpha, dir, ec);
          SampleRecord nr = rec;
          nr.id = rec.id + "_c";
          nr.provenance = Provenance::kCorrective;
          nr.alpha = alpha;
          nr.direction = dir;
          nr.anchor_world = pair.anchor_world;
          nr.goal = pair.goal;
          nr.rgb_paths.clear();
          nr.depth_paths.clear();
          SampleWindow nw;
          nw.history_ego = transform_to_ego(
              Trajectory{pair.perturbed_history_world, store.rate_hz, "world"},
              pair.anchor_world);
          nw.future_ego = pair.recovery_future;
          nw.frame_world_poses = pair.perturbed_history_world;
          for (int i = 0; i < store.history_len; ++i) {
            char fb[64];
            std::snprintf(fb, sizeof(fb), "frames/%s_f%02d.ppm", nr.id.c_str(), i);
            const std::string rgb_path = (fs::path(out_dir) / fb).string();
            write_ppm(rgb_path, pair.history_frames[i]);
            std::snprintf(fb, sizeof(fb), "frames/%s_d%02d.mdpt", nr.id.c_str(), i);
            const std::string depth_path = (fs::path(out_dir) / fb).string();
            write_mdpt(depth_path, pair.history_depths[i]);
            nr.rgb_paths.push_back(rgb_path);
            nr.depth_paths.push_back(depth_path);
          }
          nr.window_path =
              (fs::path(out_dir) / "windows" / (nr.id + ".win")).string();
          write_sample_window(nr.window_path, nw);
          expanded.records.push_back(std::move(nr));
          ++n_corrective;
        } catch (const InsufficientCoverage&) {
          ++n_skipped;
        }
      }
    }

    if (relight) {
      Rng rng = root.derive(Rng::mix(0x5e, rec_hash));
      if (rng.uniform() < cfg.num("relight_frac")) {
        RelightParams params;
        params.gain = rng.uniform(0.7, 1.4);
        params.gamma = rng.uniform(0.7, 1.3);
        for (double& t : params.tint) t = rng.uniform(0.7, 1.3);
        SampleRecord nr = rec;
        nr.id = rec.id + "_r";
        nr.provenance = Provenance::kRelit;
        nr.rgb_paths.clear();
        const int px = static_cast<int>(rec.cam_features[4]);
        for (int i = 0; i < store.history_len; ++i) {
          const RgbFrame frame = rgb_from_bytes(*cache.rgb(rec.rgb_paths[i]), px, px);
          const DepthFrame& depth = *cache.depth(rec.depth_paths[i]);
          const RgbFrame relit = relight_blend(frame, depth, params, ec.d_split);
          char fb[64];
          std::snprintf(fb, sizeof(fb), "frames/%s_f%02d.ppm", nr.id.c_str(), i);
          const std::string path = (fs::path(out_dir) / fb).string();
          write_ppm(path, relit);
          nr.rgb_paths.push_back(path);
        }
        expanded.records.push_back(std::move(nr));
        ++n_relit;
      }
    }
  }

  write_sample_store(expanded);
  out << "expanded store: " << expanded.records.size() << " records ("
      << n_corrective << " corrective, " << n_relit << " relit, " << n_skipped
      << " skipped for coverage) -> " << out_dir << "\n";
  return 0;
}

int cmd_anchors(const RunConfig& cfg, std::ostream& out) {
  const SampleStore store = read_sample_store(cfg.str("store"));
  std::vector<Trajectory> futures;
  for (const SampleRecord& r : store.records) {
    futures.push_back(read_sample_window(r.window_path, store.history_len,
                                         store.horizon, store.rate_hz)
                          .future_ego);
  }
  const auto sets = build_anchor_sets(futures, cfg.integer("M"), cfg.u64("seed"));
  save_anchor_sets(cfg.str("anchors"), sets);
  out << "built " << cfg.integer("M") << "-mode anchor sets from "
      << futures.size() << " futures -> " << cfg.str("anchors") << "\n";
  return 0;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  const SampleStore store = read_sample_store(cfg.str("store"));
  const auto anchors = load_anchor_sets(cfg.str("anchors"));
  FrameCache cache;
  const auto items = load_train_items(store, &cache, {});
  PolicyNet net(cfg.policy_config(), anchors, cfg.u64("seed"));
  std::string curve_path = cfg.str("loss_curve");
  if (curve_path.empty()) curve_path = cfg.str("ckpt") + ".curve";
  std::ofstream curve(curve_path);
  const auto history = train(&net, items, cfg.train_config(), &curve);
  net.save_checkpoint(cfg.str("ckpt"));
  out << "trained on " << items.size() << " samples for " << history.size()
      << " epochs; final loss " << (history.empty() ? 0.0 : history.back().total)
      << "; checkpoint -> " << cfg.str("ckpt") << "\n";
  return 0;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const SampleStore store = read_sample_store(cfg.str("store"));
  const auto anchors = load_anchor_sets(cfg.str("anchors"));
  PolicyNet net(cfg.policy_config(), anchors, cfg.u64("seed"));
  net.load_checkpoint(cfg.str("ckpt"));

  EvalOptions opts;
  opts.metrics = cfg.eval_config();
  opts.nll_sigma = cfg.num("nll_sigma");
  const std::string& split = cfg.str("split");
  if (split == "regular") {
    opts.provenance_filter = {Provenance::kOriginal};
  } else if (split == "recovery") {
    opts.provenance_filter = {Provenance::kCorrective};
  } else {
    throw Error("unknown split: " + split);
  }

  FrameCache cache;
  const EvalReport report = evaluate_store(&net, store, &cache, opts);
  const std::string text = format_report(report, opts.metrics, "eval " + split);
  out << text;
  if (!cfg.str("report").empty()) {
    std::ofstream rf(cfg.str("report"));
    rf << text;
  }
  return 0;
}

int cmd_rollout(const RunConfig& cfg, std::ostream& out) {
  const auto bundles = load_bundles(cfg.str("data"));
  const auto anchors = load_anchor_sets(cfg.str("anchors"));
  PolicyNet net(cfg.policy_config(), anchors, cfg.u64("seed"));
  net.load_checkpoint(cfg.str("ckpt"));
  const RolloutPolicy policy = make_net_policy(&net);
  const RolloutConfig rc = cfg.rollout_config();

  const int n = std::min<int>(cfg.integer("rollout_scenarios"),
                              static_cast<int>(bundles.size()));
  double max_dev_sum = 0.0, mean_dev_sum = 0.0;
  int reached = 0;
  for (int i = 0; i < n; ++i) {
    const RolloutStats stats = rollout(policy, bundles[i].scenario, rc);
    max_dev_sum += stats.max_lateral_dev;
    mean_dev_sum += stats.mean_lateral_dev;
    reached += stats.goal_reached ? 1 : 0;
    out << "scenario " << i << ": max_dev=" << stats.max_lateral_dev
        << " mean_dev=" << stats.mean_lateral_dev
        << " goal=" << (stats.goal_reached ? "yes" : "no")
        << " steps=" << stats.steps << "\n";
  }
  out << "rollout summary: n=" << n << " avg_max_dev=" << max_dev_sum / n
      << " avg_mean_dev=" << mean_dev_sum / n << " reached=" << reached << "/" << n
      << "\n";
  return 0;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  std::stringstream names(cfg.str("inputs"));
  std::string name;
  out << "file: machine-readable summary\n";
  int count = 0;
  while (std::getline(names, name, ',')) {
    if (name.empty()) continue;
    std::ifstream in(name);
    if (!in) throw IoError("cannot open report: " + name);
    std::string line, machine;
    while (std::getline(in, line)) {
      if (line.rfind("minADE=", 0) == 0) machine = line;
    }
    out << name << ": " << machine << "\n";
    ++count;
  }
  if (count == 0) throw EmptyInput("report: no input files given");
  return 0;
}

}  // namespace swnav

#include <CLI11.hpp>

namespace swnav {

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"swnav: sidewalk-navigation imitation learning toolkit"};
  app.require_subcommand(0, 1);

  struct Command {
    const char* name;
    const char* desc;
    int (*fn)(const RunConfig&, std::ostream&);
  };
  const std::vector<Command> commands = {
      {"gen", "generate synthetic scenario bundles", cmd_gen},
      {"curate", "build a sample store from scenario bundles", cmd_curate},
      {"expand", "add corrective / relit samples to a store", cmd_expand},
      {"anchors", "cluster futures into per-horizon anchor sets", cmd_anchors},
      {"train", "train the policy on a sample store", cmd_train},
      {"eval", "open-loop evaluation of a checkpoint", cmd_eval},
      {"rollout", "closed-loop probe of a checkpoint", cmd_rollout},
      {"report", "merge machine-readable eval reports", cmd_report},
  };

  struct SubState {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
  };
  const RunConfig defaults;
  std::map<std::string, SubState> states;
  for (const Command& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.desc);
    SubState& state = states[command.name];
    sub->add_option("--config", state.config_path, "key=value config file");
    for (const auto& [key, description] : defaults.descriptions()) {
      sub->add_option_function<std::string>(
          "--" + key,
          [&state, key = key](const std::string& v) {
            state.overrides.emplace_back(key, v);
          },
          description);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    for (const Command& command : commands) {
      if (app.got_subcommand(command.name)) {
        out << app.get_subcommand(command.name)->help();
        return 0;
      }
    }
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  for (const Command& command : commands) {
    if (!app.got_subcommand(command.name)) continue;
    try {
      RunConfig cfg;
      const SubState& state = states.at(command.name);
      if (!state.config_path.empty()) cfg.load_file(state.config_path);
      for (const auto& [key, value] : state.overrides) cfg.set(key, value);
      return command.fn(cfg, out);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  out << app.help();
  return 2;
}

}  // namespace swnav
