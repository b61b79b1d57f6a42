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

#ifndef SWNAV_POLICYNET_HPP_
#define SWNAV_POLICYNET_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "swnav/anchors.hpp"
#include "swnav/autodiff.hpp"
#include "swnav/camgeom.hpp"
#include "swnav/rng.hpp"
#include "swnav/trajcore.hpp"

namespace swnav {

/// Architecture and training-time knobs. Defaults follow the reference
/// setting: 16 history frames at 5 Hz, 40-frame horizon, 64 anchors, 4
/// decoder layers, goal token masked at 0.5 and other tokens at 0.2.
struct PolicyConfig {
  int history_len = 16;  // frames fed to the encoder; the last one is "now"
  int horizon = 40;      // future waypoints (T), divisible by 8
  double rate_hz = 5.0;
  int num_modes = 64;  // anchors per horizon (M)
  int hidden = 512;    // embedding width (C)
  int layers = 4;      // decoder layers (K)
  int heads = 1;
  int image_px = 64;
  int patch_px = 8;  // (image_px / patch_px)^2 must give 64 fine tokens
  double lambda_cls = 1.0;
  double w_psi = 0.5;
  double goal_mask_p = 0.5;
  double token_mask_p = 0.2;
  double conf_eps = 1e-7;
  bool use_pos_embed = true;
  std::array<bool, 4> head_enabled = {true, true, true, true};
  bool qf_enabled = true;
  int film_embed = 16;  // sinusoidal embedding width, even

  int fine_tokens() const {
    const int grid = image_px / patch_px;
    return grid * grid;
  }
  int patch_dim() const { return 3 * patch_px * patch_px; }
  int context_tokens() const { return history_len + fine_tokens() + 2; }
  std::array<int, 4> horizon_lens() const {
    return {horizon / 8, horizon / 4, horizon / 2, horizon};
  }
  int qf_len() const { return horizon / 4; }
  void validate() const;
};

/// Per-sample network input: one patch matrix per history frame plus goal and
/// camera vectors. The newest frame doubles as the "current" frame for the
/// fine tokens.
struct PolicyInput {
  std::vector<Tensor> frame_patches;  // history_len tensors, each 64 x patch_dim
  Tensor goal;                        // 1x3: (d, cos, sin)
  Tensor cam;                         // 1x16
};

/// Patch matrix from an 8-bit RGB image (row-major interleaved), values
/// scaled to [0, 1]. Layout: one row per patch, row-major over the patch
/// grid; within a patch, pixels row-major, channels interleaved.
Tensor patchify(const uint8_t* rgb, int image_px, int patch_px);

PolicyInput build_input(const std::vector<const std::vector<uint8_t>*>& frames,
                        const GoalEncoding& goal, const std::array<double, 16>& cam,
                        const PolicyConfig& cfg);

/// Tape handles for one forward pass. Disabled heads stay at -1.
struct BundleIds {
  struct Layer {
    std::array<Tape::Id, 4> traj = {-1, -1, -1, -1};  // M x 3*T_i, [xy | psi]
    std::array<Tape::Id, 4> conf = {-1, -1, -1, -1};  // M x 1
    Tape::Id qf = -1;                                 // 1 x 3*qf_len
  };
  std::vector<Layer> layers;
};

/// Extracted prediction values: per layer, per horizon trajectories and
/// confidences plus the query-free trajectory.
struct PredictionBundle {
  struct Layer {
    std::array<Tensor, 4> traj;
    std::array<Tensor, 4> conf;
    Tensor qf;
  };
  std::vector<Layer> layers;
};

class PolicyNet {
 public:
  struct Param {
    Tensor value;
    Tensor grad;
    Tensor momentum;
  };

  PolicyNet(const PolicyConfig& cfg, const std::array<AnchorSet, 4>& anchor_sets,
            uint64_t seed);

  const PolicyConfig& config() const { return cfg_; }
  PolicyConfig& mutable_config() { return cfg_; }
  const std::array<AnchorSet, 4>& anchor_sets() const { return anchor_sets_; }

  /// Runs the encoder and K decoder layers on `tape`. In train mode, token
  /// masks are drawn from `rng`.
  BundleIds forward(Tape& tape, const PolicyInput& input, bool train_mode,
                    Rng* rng = nullptr);

  /// Pulls gradients of the parameter leaves bound by the last forward() into
  /// the parameter store (additive, for batch accumulation).
  void accumulate_param_grads(const Tape& tape);
  void zero_grads();
  void sgd_momentum_step(double lr, double momentum);

  std::map<std::string, Param>& params() { return params_; }
  const std::map<std::string, Param>& params() const { return params_; }
  size_t param_scalar_count() const;

  /// Test hook: re-draw every parameter from N(0, scale/sqrt(fan_in)).
  void randomize(uint64_t seed, double scale = 1.0);

  PredictionBundle extract(const Tape& tape, const BundleIds& ids) const;

  /// Unflatten a head tensor (M x 3*T_i, [xy | psi]) into trajectories.
  static std::vector<Trajectory> to_trajectories(const Tensor& traj, int horizon_len,
                                                 double rate_hz);
  static std::vector<double> to_confidences(const Tensor& conf);

  /// Anchor tensor in head layout (M x 3*T_i) for horizon i (0-based).
  const Tensor& anchor_tensor(int horizon) const { return anchor_full_[horizon]; }

  /// Checkpoint: magic MNET1, count-prefixed (name, shape, doubles) entries.
  /// The loader rejects unknown names and shape mismatches.
  void save_checkpoint(const std::string& path) const;
  void load_checkpoint(const std::string& path);

 private:
  Tensor& create_param(const std::string& name, int rows, int cols);
  void init_params(uint64_t seed);
  Tape::Id bind(Tape& tape, const std::string& name);
  Tape::Id linear(Tape& tape, Tape::Id x, const std::string& prefix);
  Tape::Id layer_norm(Tape& tape, Tape::Id x, const std::string& prefix);
  Tape::Id mha(Tape& tape, Tape::Id q_in, Tape::Id kv_in, const std::string& prefix);

  PolicyConfig cfg_;
  std::array<AnchorSet, 4> anchor_sets_;
  std::array<Tensor, 4> anchor_full_;  // M x 3*T_i, [xy | psi]
  std::array<Tensor, 4> anchor_xy_;    // M x 2*T_i, query-init features
  Tensor film_embed_;                  // history_len x film_embed
  std::map<std::string, Param> params_;
  std::map<std::string, Tape::Id> bound_;
};

}  // namespace swnav

#endif  // SWNAV_POLICYNET_HPP_
