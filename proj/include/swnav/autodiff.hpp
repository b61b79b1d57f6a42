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

#ifndef SWNAV_AUTODIFF_HPP_
#define SWNAV_AUTODIFF_HPP_

#include <functional>
#include <string>
#include <vector>

namespace swnav {

/// Dense row-major matrix of 64-bit floats. Row/column vectors are 1xN / Nx1.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  static Tensor zeros(int r, int c) { return Tensor(r, c); }
  static Tensor scalar(double v) {
    Tensor t(1, 1);
    t.data[0] = v;
    return t;
  }

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  size_t size() const { return data.size(); }
  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
};

/// Reverse-mode tape. Nodes append in creation order, which is a topological
/// order of the graph, so the backward pass is a single reverse sweep.
/// Gradients accumulate additively across fan-out.
class Tape {
 public:
  using Id = int;

  /// Leaf value. Gradients are always recorded; callers decide which leaves
  /// they read back.
  Id input(Tensor value);

  const Tensor& value(Id id) const { return nodes_[id].val; }
  const Tensor& grad(Id id) const { return nodes_[id].grad; }
  size_t node_count() const { return nodes_.size(); }

  // -- primitives --
  Id matmul(Id a, Id b, bool trans_a = false, bool trans_b = false);
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);
  /// a: NxC, row: 1xC broadcast over rows.
  Id add_rowvec(Id a, Id row);
  Id mul_rowvec(Id a, Id row);
  /// k * a + c elementwise.
  Id affine(Id a, double k, double c = 0.0);
  Id relu(Id a);
  Id sigmoid(Id a);
  Id softmax_rows(Id a);
  /// Row-wise normalization (x - mean) / sqrt(var + eps); no learned affine.
  Id layernorm_rows(Id a, double eps = 1e-5);
  Id log(Id a);
  Id clamp(Id a, double lo, double hi);
  /// Elementwise smooth-L1: 0.5 e^2 for |e| < 1, |e| - 0.5 otherwise.
  Id smooth_l1(Id a);
  /// Elementwise wrap to (-pi, pi]; derivative 1.
  Id wrap_angle(Id a);
  Id concat_rows(const std::vector<Id>& parts);
  Id concat_cols(const std::vector<Id>& parts);
  Id slice_rows(Id a, int r0, int r1);
  Id slice_cols(Id a, int c0, int c1);
  Id gather_rows(Id a, std::vector<int> rows);
  Id reduce_mean_rows(Id a);  // NxC -> 1xC
  Id reduce_sum(Id a);        // -> 1x1
  Id reduce_mean(Id a);       // -> 1x1

  /// Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse. `loss` must be
  /// a scalar node.
  void backward(Id loss);

  /// True when every forward value on the tape is finite.
  bool all_finite() const;

 private:
  struct Node {
    Tensor val;
    Tensor grad;
    std::function<void()> back;  // empty for leaves
  };

  Id push(Tensor val, std::function<void()> back = {});
  Tensor& grad_mut(Id id) { return nodes_[id].grad; }

  std::vector<Node> nodes_;
};

}  // namespace swnav

#endif  // SWNAV_AUTODIFF_HPP_
