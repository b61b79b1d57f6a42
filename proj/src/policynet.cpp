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

#include "swnav/policynet.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "swnav/errors.hpp"

namespace swnav {

void PolicyConfig::validate() const {
  if (horizon % 8 != 0) throw IndivisibleHorizon("PolicyConfig: horizon must divide by 8");
  if (history_len < 1) throw ShapeMismatch("PolicyConfig: history_len < 1");
  if (image_px % patch_px != 0) throw ShapeMismatch("PolicyConfig: image/patch mismatch");
  if (fine_tokens() != 64) throw ShapeMismatch("PolicyConfig: fine token count must be 64");
  if (hidden % heads != 0) throw ShapeMismatch("PolicyConfig: hidden % heads != 0");
  if (film_embed % 2 != 0) throw ShapeMismatch("PolicyConfig: film_embed must be even");
  if (num_modes < 1 || layers < 1) throw ShapeMismatch("PolicyConfig: bad M or K");
}

Tensor patchify(const uint8_t* rgb, int image_px, int patch_px) {
  const int grid = image_px / patch_px;
  const int pd = 3 * patch_px * patch_px;
  Tensor out(grid * grid, pd);
  for (int gy = 0; gy < grid; ++gy) {
    for (int gx = 0; gx < grid; ++gx) {
      double* row = &out.at(gy * grid + gx, 0);
      int k = 0;
      for (int py = 0; py < patch_px; ++py) {
        const int y = gy * patch_px + py;
        for (int px = 0; px < patch_px; ++px) {
          const int x = gx * patch_px + px;
          const uint8_t* p = rgb + 3 * (static_cast<size_t>(y) * image_px + x);
          row[k++] = p[0] / 255.0;
          row[k++] = p[1] / 255.0;
          row[k++] = p[2] / 255.0;
        }
      }
    }
  }
  return out;
}

PolicyInput build_input(const std::vector<const std::vector<uint8_t>*>& frames,
                        const GoalEncoding& goal, const std::array<double, 16>& cam,
                        const PolicyConfig& cfg) {
  if (static_cast<int>(frames.size()) != cfg.history_len) {
    throw ShapeMismatch("build_input: expected history_len frames");
  }
  PolicyInput input;
  input.frame_patches.reserve(frames.size());
  for (const auto* f : frames) {
    if (static_cast<int>(f->size()) != 3 * cfg.image_px * cfg.image_px) {
      throw ShapeMismatch("build_input: frame byte size mismatch");
    }
    input.frame_patches.push_back(patchify(f->data(), cfg.image_px, cfg.patch_px));
  }
  input.goal = Tensor(1, 3);
  input.goal.data = {goal.d, goal.cos_phi, goal.sin_phi};
  input.cam = Tensor(1, 16);
  input.cam.data.assign(cam.begin(), cam.end());
  return input;
}

namespace {

Tensor sinusoidal_embedding(int rows, int dim) {
  // Row i embeds the offset of frame i from the newest frame.
  Tensor out(rows, dim);
  for (int i = 0; i < rows; ++i) {
    const double off = rows - 1 - i;
    for (int j = 0; j < dim / 2; ++j) {
      const double freq = std::pow(10000.0, -2.0 * j / dim);
      out.at(i, 2 * j) = std::sin(off * freq);
      out.at(i, 2 * j + 1) = std::cos(off * freq);
    }
  }
  return out;
}

Tensor anchor_head_layout(const AnchorSet& set) {
  // [x0 y0 x1 y1 ... | psi0 psi1 ...] per anchor row.
  const int len = set.horizon_len;
  Tensor out(set.num_modes, 3 * len);
  for (int m = 0; m < set.num_modes; ++m) {
    for (int j = 0; j < len; ++j) {
      out.at(m, 2 * j) = set.anchors[m].poses[j].x;
      out.at(m, 2 * j + 1) = set.anchors[m].poses[j].y;
      out.at(m, 2 * len + j) = set.anchors[m].poses[j].psi;
    }
  }
  return out;
}

Tensor anchor_xy_layout(const AnchorSet& set) {
  const int len = set.horizon_len;
  Tensor out(set.num_modes, 2 * len);
  for (int m = 0; m < set.num_modes; ++m) {
    for (int j = 0; j < len; ++j) {
      out.at(m, 2 * j) = set.anchors[m].poses[j].x;
      out.at(m, 2 * j + 1) = set.anchors[m].poses[j].y;
    }
  }
  return out;
}

}  // namespace

PolicyNet::PolicyNet(const PolicyConfig& cfg,
                     const std::array<AnchorSet, 4>& anchor_sets, uint64_t seed)
    : cfg_(cfg), anchor_sets_(anchor_sets) {
  cfg_.validate();
  const auto lens = cfg_.horizon_lens();
  for (int i = 0; i < 4; ++i) {
    if (anchor_sets_[i].horizon_len != lens[i]) {
      throw ShapeMismatch("PolicyNet: anchor horizon length mismatch");
    }
    if (anchor_sets_[i].num_modes != cfg_.num_modes) {
      throw ShapeMismatch("PolicyNet: anchor mode count mismatch");
    }
    anchor_full_[i] = anchor_head_layout(anchor_sets_[i]);
    anchor_xy_[i] = anchor_xy_layout(anchor_sets_[i]);
  }
  film_embed_ = sinusoidal_embedding(cfg_.history_len, cfg_.film_embed);
  init_params(seed);
}

Tensor& PolicyNet::create_param(const std::string& name, int rows, int cols) {
  Param p;
  p.value = Tensor(rows, cols);
  p.grad = Tensor(rows, cols);
  p.momentum = Tensor(rows, cols);
  auto [it, inserted] = params_.emplace(name, std::move(p));
  if (!inserted) throw Error("duplicate parameter name: " + name);
  return it->second.value;
}

void PolicyNet::init_params(uint64_t seed) {
  const int c = cfg_.hidden;
  const int pd = cfg_.patch_dim();
  const int f = cfg_.film_embed;
  const auto lens = cfg_.horizon_lens();

  // Xavier-uniform for trunk weights; heads and FiLM output start at zero so
  // predictions begin exactly at the anchors.
  Rng rng(Rng::mix(seed, 0x9e7));
  auto xavier = [&](const std::string& name, int rows, int cols) {
    Tensor& t = create_param(name, rows, cols);
    const double lim = std::sqrt(6.0 / (rows + cols));
    for (double& v : t.data) v = rng.uniform(-lim, lim);
  };
  auto zeros = [&](const std::string& name, int rows, int cols) {
    create_param(name, rows, cols);
  };
  auto ones = [&](const std::string& name, int rows, int cols) {
    Tensor& t = create_param(name, rows, cols);
    for (double& v : t.data) v = 1.0;
  };
  auto linear_pair = [&](const std::string& prefix, int in, int out) {
    xavier(prefix + ".w", in, out);
    zeros(prefix + ".b", 1, out);
  };
  auto ln_pair = [&](const std::string& prefix) {
    ones(prefix + ".g", 1, c);
    zeros(prefix + ".b", 1, c);
  };

  linear_pair("enc.patch", pd, c);
  linear_pair("enc.trunk", c, c);
  linear_pair("enc.coarse1", c, c);
  linear_pair("enc.coarse2", c, c);
  linear_pair("enc.film1", f, c);
  // FiLM output starts at zero: gamma = 1 + 0, beta = 0 (identity modulation).
  zeros("enc.film2.w", c, 2 * c);
  zeros("enc.film2.b", 1, 2 * c);
  linear_pair("enc.fine", c, c);
  {
    Tensor& pos = create_param("enc.fine.pos", cfg_.fine_tokens(), c);
    for (double& v : pos.data) v = rng.normal(0.0, 0.02);
  }
  linear_pair("enc.goal1", 3, c);
  linear_pair("enc.goal2", c, c);
  linear_pair("enc.cam1", 16, c);
  linear_pair("enc.cam2", c, c);
  ln_pair("enc.ln");

  for (int i = 0; i < 4; ++i) {
    linear_pair("dec.qinit.h" + std::to_string(i), 2 * lens[i], c);
  }

  for (int k = 0; k < cfg_.layers; ++k) {
    const std::string p = "dec" + std::to_string(k);
    ln_pair(p + ".ln_ctx");
    ln_pair(p + ".ln_kv");
    ln_pair(p + ".ln_q");
    ln_pair(p + ".ln_ffn");
    for (const char* att : {".self", ".cross"}) {
      linear_pair(p + att + ".q", c, c);
      linear_pair(p + att + ".k", c, c);
      linear_pair(p + att + ".v", c, c);
      linear_pair(p + att + ".o", c, c);
    }
    linear_pair(p + ".ffn1", c, 2 * c);
    linear_pair(p + ".ffn2", 2 * c, c);
    for (int i = 0; i < 4; ++i) {
      const std::string h = p + ".head" + std::to_string(i);
      zeros(h + ".off.w", c, 3 * lens[i]);
      zeros(h + ".off.b", 1, 3 * lens[i]);
      zeros(h + ".conf.w", c, 1);
      zeros(h + ".conf.b", 1, 1);
    }
    linear_pair(p + ".qf1", c, c);
    zeros(p + ".qf2.w", c, 3 * cfg_.qf_len());
    zeros(p + ".qf2.b", 1, 3 * cfg_.qf_len());
  }
}

void PolicyNet::randomize(uint64_t seed, double scale) {
  Rng rng(Rng::mix(seed, 0x7a11));
  for (auto& [name, p] : params_) {
    const double s = scale / std::sqrt(static_cast<double>(p.value.rows));
    for (double& v : p.value.data) v = rng.normal(0.0, s);
  }
}

Tape::Id PolicyNet::bind(Tape& tape, const std::string& name) {
  auto it = bound_.find(name);
  if (it != bound_.end()) return it->second;
  const Tape::Id id = tape.input(params_.at(name).value);
  bound_.emplace(name, id);
  return id;
}

Tape::Id PolicyNet::linear(Tape& tape, Tape::Id x, const std::string& prefix) {
  return tape.add_rowvec(tape.matmul(x, bind(tape, prefix + ".w")),
                         bind(tape, prefix + ".b"));
}

Tape::Id PolicyNet::layer_norm(Tape& tape, Tape::Id x, const std::string& prefix) {
  const Tape::Id n = tape.layernorm_rows(x);
  return tape.add_rowvec(tape.mul_rowvec(n, bind(tape, prefix + ".g")),
                         bind(tape, prefix + ".b"));
}

Tape::Id PolicyNet::mha(Tape& tape, Tape::Id q_in, Tape::Id kv_in,
                        const std::string& prefix) {
  const int d = cfg_.hidden / cfg_.heads;
  const Tape::Id q = linear(tape, q_in, prefix + ".q");
  const Tape::Id k = linear(tape, kv_in, prefix + ".k");
  const Tape::Id v = linear(tape, kv_in, prefix + ".v");
  std::vector<Tape::Id> head_outs;
  head_outs.reserve(cfg_.heads);
  for (int h = 0; h < cfg_.heads; ++h) {
    const Tape::Id qh = tape.slice_cols(q, h * d, (h + 1) * d);
    const Tape::Id kh = tape.slice_cols(k, h * d, (h + 1) * d);
    const Tape::Id vh = tape.slice_cols(v, h * d, (h + 1) * d);
    Tape::Id scores = tape.matmul(qh, kh, false, true);
    scores = tape.affine(scores, 1.0 / std::sqrt(static_cast<double>(d)));
    const Tape::Id probs = tape.softmax_rows(scores);
    head_outs.push_back(tape.matmul(probs, vh));
  }
  const Tape::Id merged =
      cfg_.heads == 1 ? head_outs[0] : tape.concat_cols(head_outs);
  return linear(tape, merged, prefix + ".o");
}

BundleIds PolicyNet::forward(Tape& tape, const PolicyInput& input, bool train_mode,
                             Rng* rng) {
  if (static_cast<int>(input.frame_patches.size()) != cfg_.history_len) {
    throw ShapeMismatch("forward: history frame count mismatch");
  }
  bound_.clear();
  const int c = cfg_.hidden;
  const int t_h = cfg_.history_len;
  const int n_fine = cfg_.fine_tokens();
  const int m = cfg_.num_modes;

  // Per-frame trunk; the newest frame's patch features feed the fine tokens.
  std::vector<Tape::Id> pooled;
  pooled.reserve(t_h);
  Tape::Id last_trunk = -1;
  for (int i = 0; i < t_h; ++i) {
    const Tape::Id patches = tape.input(input.frame_patches[i]);
    Tape::Id x = tape.relu(linear(tape, patches, "enc.patch"));
    x = tape.relu(linear(tape, x, "enc.trunk"));
    pooled.push_back(tape.reduce_mean_rows(x));
    if (i == t_h - 1) last_trunk = x;
  }
  Tape::Id coarse = tape.concat_rows(pooled);  // t_h x c
  coarse = tape.relu(linear(tape, coarse, "enc.coarse1"));
  coarse = linear(tape, coarse, "enc.coarse2");

  // FiLM over coarse tokens conditioned on frame offset.
  {
    const Tape::Id embed = tape.input(film_embed_);
    const Tape::Id hidden = tape.relu(linear(tape, embed, "enc.film1"));
    const Tape::Id gb = linear(tape, hidden, "enc.film2");  // t_h x 2c
    const Tape::Id gamma = tape.affine(tape.slice_cols(gb, 0, c), 1.0, 1.0);
    const Tape::Id beta = tape.slice_cols(gb, c, 2 * c);
    coarse = tape.add(tape.mul(coarse, gamma), beta);
  }

  Tape::Id fine = linear(tape, last_trunk, "enc.fine");  // 64 x c
  if (cfg_.use_pos_embed) {
    fine = tape.add(fine, bind(tape, "enc.fine.pos"));
  }

  const Tape::Id goal_in = tape.input(input.goal);
  Tape::Id goal_tok = tape.relu(linear(tape, goal_in, "enc.goal1"));
  goal_tok = linear(tape, goal_tok, "enc.goal2");
  const Tape::Id cam_in = tape.input(input.cam);
  Tape::Id cam_tok = tape.relu(linear(tape, cam_in, "enc.cam1"));
  cam_tok = linear(tape, cam_tok, "enc.cam2");

  Tape::Id ctx = tape.concat_rows({coarse, fine, goal_tok, cam_tok});

  if (train_mode) {
    if (rng == nullptr) throw Error("forward: train mode needs an rng for masking");
    const int n_tok = cfg_.context_tokens();
    const int goal_row = t_h + n_fine;
    Tensor mask(n_tok, c);
    for (int r = 0; r < n_tok; ++r) {
      const double p = r == goal_row ? cfg_.goal_mask_p : cfg_.token_mask_p;
      const double keep = rng->bernoulli(p) ? 0.0 : 1.0;
      for (int col = 0; col < c; ++col) mask.at(r, col) = keep;
    }
    ctx = tape.mul(ctx, tape.input(std::move(mask)));
  }
  ctx = layer_norm(tape, ctx, "enc.ln");

  // Anchor-initialized queries, all horizons stacked.
  std::vector<Tape::Id> query_parts;
  for (int i = 0; i < 4; ++i) {
    const Tape::Id feats = tape.input(anchor_xy_[i]);
    query_parts.push_back(linear(tape, feats, "dec.qinit.h" + std::to_string(i)));
  }
  Tape::Id queries = tape.concat_rows(query_parts);  // 4m x c

  BundleIds bundle;
  bundle.layers.resize(cfg_.layers);
  for (int k = 0; k < cfg_.layers; ++k) {
    const std::string p = "dec" + std::to_string(k);
    // Context fusion.
    const Tape::Id ctx_norm = layer_norm(tape, ctx, p + ".ln_ctx");
    const Tape::Id fused = mha(tape, ctx_norm, ctx_norm, p + ".self");
    ctx = tape.add(ctx, fused);
    // Query refinement against the fused context.
    const Tape::Id kv = layer_norm(tape, ctx, p + ".ln_kv");
    const Tape::Id cross =
        mha(tape, layer_norm(tape, queries, p + ".ln_q"), kv, p + ".cross");
    queries = tape.add(queries, cross);
    const Tape::Id ff_in = layer_norm(tape, queries, p + ".ln_ffn");
    const Tape::Id ff =
        linear(tape, tape.relu(linear(tape, ff_in, p + ".ffn1")), p + ".ffn2");
    queries = tape.add(queries, ff);

    for (int i = 0; i < 4; ++i) {
      if (!cfg_.head_enabled[i]) continue;
      const std::string h = p + ".head" + std::to_string(i);
      const Tape::Id qi = tape.slice_rows(queries, i * m, (i + 1) * m);
      const Tape::Id off = linear(tape, qi, h + ".off");
      bundle.layers[k].traj[i] = tape.add(off, tape.input(anchor_full_[i]));
      bundle.layers[k].conf[i] = tape.sigmoid(linear(tape, qi, h + ".conf"));
    }
    if (cfg_.qf_enabled) {
      const Tape::Id pooled_ctx = tape.reduce_mean_rows(kv);
      const Tape::Id qh = tape.relu(linear(tape, pooled_ctx, p + ".qf1"));
      bundle.layers[k].qf = linear(tape, qh, p + ".qf2");
    }
  }
  return bundle;
}

void PolicyNet::accumulate_param_grads(const Tape& tape) {
  for (const auto& [name, id] : bound_) {
    const Tensor& g = tape.grad(id);
    Tensor& acc = params_.at(name).grad;
    for (size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += g.data[i];
  }
}

void PolicyNet::zero_grads() {
  for (auto& [name, p] : params_) {
    std::fill(p.grad.data.begin(), p.grad.data.end(), 0.0);
  }
}

void PolicyNet::sgd_momentum_step(double lr, double momentum) {
  for (auto& [name, p] : params_) {
    for (size_t i = 0; i < p.value.data.size(); ++i) {
      p.momentum.data[i] = momentum * p.momentum.data[i] - lr * p.grad.data[i];
      p.value.data[i] += p.momentum.data[i];
    }
  }
}

size_t PolicyNet::param_scalar_count() const {
  size_t n = 0;
  for (const auto& [name, p] : params_) n += p.value.size();
  return n;
}

PredictionBundle PolicyNet::extract(const Tape& tape, const BundleIds& ids) const {
  PredictionBundle out;
  out.layers.resize(ids.layers.size());
  for (size_t k = 0; k < ids.layers.size(); ++k) {
    for (int i = 0; i < 4; ++i) {
      if (ids.layers[k].traj[i] >= 0) {
        out.layers[k].traj[i] = tape.value(ids.layers[k].traj[i]);
        out.layers[k].conf[i] = tape.value(ids.layers[k].conf[i]);
      }
    }
    if (ids.layers[k].qf >= 0) out.layers[k].qf = tape.value(ids.layers[k].qf);
  }
  return out;
}

std::vector<Trajectory> PolicyNet::to_trajectories(const Tensor& traj,
                                                   int horizon_len, double rate_hz) {
  std::vector<Trajectory> out(traj.rows);
  for (int m = 0; m < traj.rows; ++m) {
    Trajectory& t = out[m];
    t.rate_hz = rate_hz;
    t.frame_id = "ego";
    t.poses.resize(horizon_len);
    for (int j = 0; j < horizon_len; ++j) {
      t.poses[j].x = traj.at(m, 2 * j);
      t.poses[j].y = traj.at(m, 2 * j + 1);
      t.poses[j].psi = wrap_angle(traj.at(m, 2 * horizon_len + j));
    }
  }
  return out;
}

std::vector<double> PolicyNet::to_confidences(const Tensor& conf) {
  std::vector<double> out(conf.rows);
  for (int m = 0; m < conf.rows; ++m) out[m] = conf.at(m, 0);
  return out;
}

// --- checkpoint I/O ---

namespace {

template <typename T>
void write_raw(std::ofstream& fs, const T& v) {
  fs.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& fs) {
  T v;
  fs.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void PolicyNet::save_checkpoint(const std::string& path) const {
  std::ofstream fs(path, std::ios::binary);
  if (!fs) throw IoError("cannot open for write: " + path);
  fs.write("MNET1", 5);
  write_raw<uint32_t>(fs, static_cast<uint32_t>(params_.size()));
  for (const auto& [name, p] : params_) {
    write_raw<uint32_t>(fs, static_cast<uint32_t>(name.size()));
    fs.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_raw<uint32_t>(fs, static_cast<uint32_t>(p.value.rows));
    write_raw<uint32_t>(fs, static_cast<uint32_t>(p.value.cols));
    fs.write(reinterpret_cast<const char*>(p.value.data.data()),
             static_cast<std::streamsize>(p.value.size() * sizeof(double)));
  }
  if (!fs) throw IoError("write failed: " + path);
}

void PolicyNet::load_checkpoint(const std::string& path) {
  std::ifstream fs(path, std::ios::binary);
  if (!fs) throw IoError("cannot open: " + path);
  char magic[5];
  fs.read(magic, 5);
  if (!fs || std::memcmp(magic, "MNET1", 5) != 0) {
    throw IoError("bad checkpoint magic: " + path);
  }
  const uint32_t count = read_raw<uint32_t>(fs);
  if (count != params_.size()) {
    throw IoError("checkpoint parameter count mismatch: " + path);
  }
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t name_len = read_raw<uint32_t>(fs);
    std::string name(name_len, '\0');
    fs.read(name.data(), name_len);
    const uint32_t rows = read_raw<uint32_t>(fs);
    const uint32_t cols = read_raw<uint32_t>(fs);
    auto it = params_.find(name);
    if (it == params_.end()) throw IoError("unknown parameter in checkpoint: " + name);
    Tensor& v = it->second.value;
    if (v.rows != static_cast<int>(rows) || v.cols != static_cast<int>(cols)) {
      throw IoError("shape mismatch for parameter " + name);
    }
    fs.read(reinterpret_cast<char*>(v.data.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!fs) throw IoError("truncated checkpoint: " + path);
  }
}

}  // namespace swnav
