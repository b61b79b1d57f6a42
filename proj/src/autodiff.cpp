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

#include "swnav/autodiff.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "swnav/errors.hpp"

namespace swnav {

namespace {

using MatMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>;
using CMatMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                               Eigen::Dynamic, Eigen::RowMajor>>;

CMatMap map(const Tensor& t) { return CMatMap(t.data.data(), t.rows, t.cols); }
MatMap map(Tensor& t) { return MatMap(t.data.data(), t.rows, t.cols); }

void require(bool ok, const char* what) {
  if (!ok) throw ShapeMismatch(what);
}

}  // namespace

Tape::Id Tape::push(Tensor val, std::function<void()> back) {
  Node node;
  node.grad = Tensor(val.rows, val.cols);
  node.val = std::move(val);
  node.back = std::move(back);
  nodes_.push_back(std::move(node));
  return static_cast<Id>(nodes_.size()) - 1;
}

Tape::Id Tape::input(Tensor value) { return push(std::move(value)); }

Tape::Id Tape::matmul(Id a, Id b, bool trans_a, bool trans_b) {
  require(!(trans_a && trans_b), "matmul: double transpose unsupported");
  const Tensor& A = nodes_[a].val;
  const Tensor& B = nodes_[b].val;
  const int m = trans_a ? A.cols : A.rows;
  const int ka = trans_a ? A.rows : A.cols;
  const int kb = trans_b ? B.cols : B.rows;
  const int n = trans_b ? B.rows : B.cols;
  require(ka == kb, "matmul: inner dimensions disagree");

  Tensor out(m, n);
  if (!trans_a && !trans_b) {
    map(out).noalias() = map(A) * map(B);
  } else if (trans_a) {
    map(out).noalias() = map(A).transpose() * map(B);
  } else {
    map(out).noalias() = map(A) * map(B).transpose();
  }
  const Id id = push(std::move(out));
  nodes_[id].back = [this, a, b, id, trans_a, trans_b]() {
    const auto G = map(nodes_[id].grad);
    auto dA = map(nodes_[a].grad);
    auto dB = map(nodes_[b].grad);
    const auto A = map(nodes_[a].val);
    const auto B = map(nodes_[b].val);
    if (!trans_a && !trans_b) {
      dA.noalias() += G * B.transpose();
      dB.noalias() += A.transpose() * G;
    } else if (trans_a) {
      // C = A^T B: dA = B G^T, dB = A G
      dA.noalias() += B * G.transpose();
      dB.noalias() += A * G;
    } else {
      // C = A B^T: dA = G B, dB = G^T A
      dA.noalias() += G * B;
      dB.noalias() += G.transpose() * A;
    }
  };
  return id;
}

Tape::Id Tape::add(Id a, Id b) {
  const Tensor& A = nodes_[a].val;
  const Tensor& B = nodes_[b].val;
  require(A.same_shape(B), "add: shape mismatch");
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = A.data[i] + B.data[i];
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, b, id]() {
    const Tensor& G = nodes_[id].grad;
    Tensor& dA = grad_mut(a);
    Tensor& dB = grad_mut(b);
    for (size_t i = 0; i < G.size(); ++i) {
      dA.data[i] += G.data[i];
      dB.data[i] += G.data[i];
    }
  };
  return id;
}

Tape::Id Tape::sub(Id a, Id b) {
  const Tensor& A = nodes_[a].val;
  const Tensor& B = nodes_[b].val;
  require(A.same_shape(B), "sub: shape mismatch");
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = A.data[i] - B.data[i];
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, b, id]() {
    const Tensor& G = nodes_[id].grad;
    Tensor& dA = grad_mut(a);
    Tensor& dB = grad_mut(b);
    for (size_t i = 0; i < G.size(); ++i) {
      dA.data[i] += G.data[i];
      dB.data[i] -= G.data[i];
    }
  };
  return id;
}

Tape::Id Tape::mul(Id a, Id b) {
  const Tensor& A = nodes_[a].val;
  const Tensor& B = nodes_[b].val;
  require(A.same_shape(B), "mul: shape mismatch");
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = A.data[i] * B.data[i];
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, b, id]() {
    const Tensor& G = nodes_[id].grad;
    const Tensor& A = nodes_[a].val;
    const Tensor& B = nodes_[b].val;
    Tensor& dA = grad_mut(a);
    Tensor& dB = grad_mut(b);
    for (size_t i = 0; i < G.size(); ++i) {
      dA.data[i] += G.data[i] * B.data[i];
      dB.data[i] += G.data[i] * A.data[i];
    }
  };
  return id;
}

Tape::Id Tape::add_rowvec(Id a, Id row) {
  const Tensor& A = nodes_[a].val;
  const Tensor& R = nodes_[row].val;
  require(R.rows == 1 && R.cols == A.cols, "add_rowvec: row shape mismatch");
  Tensor out = A;
  for (int r = 0; r < A.rows; ++r) {
    for (int c = 0; c < A.cols; ++c) out.at(r, c) += R.at(0, c);
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, row, id]() {
    const Tensor& G = nodes_[id].grad;
    Tensor& dA = grad_mut(a);
    Tensor& dR = grad_mut(row);
    for (size_t i = 0; i < G.size(); ++i) dA.data[i] += G.data[i];
    for (int r = 0; r < G.rows; ++r) {
      for (int c = 0; c < G.cols; ++c) dR.at(0, c) += G.at(r, c);
    }
  };
  return id;
}

Tape::Id Tape::mul_rowvec(Id a, Id row) {
  const Tensor& A = nodes_[a].val;
  const Tensor& R = nodes_[row].val;
  require(R.rows == 1 && R.cols == A.cols, "mul_rowvec: row shape mismatch");
  Tensor out = A;
  for (int r = 0; r < A.rows; ++r) {
    for (int c = 0; c < A.cols; ++c) out.at(r, c) *= R.at(0, c);
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, row, id]() {
    const Tensor& G = nodes_[id].grad;
    const Tensor& A = nodes_[a].val;
    const Tensor& R = nodes_[row].val;
    Tensor& dA = grad_mut(a);
    Tensor& dR = grad_mut(row);
    for (int r = 0; r < G.rows; ++r) {
      for (int c = 0; c < G.cols; ++c) {
        dA.at(r, c) += G.at(r, c) * R.at(0, c);
        dR.at(0, c) += G.at(r, c) * A.at(r, c);
      }
    }
  };
  return id;
}

Tape::Id Tape::affine(Id a, double k, double c) {
  const Tensor& A = nodes_[a].val;
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = k * A.data[i] + c;
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id, k]() {
    const Tensor& G = nodes_[id].grad;
    Tensor& dA = grad_mut(a);
    for (size_t i = 0; i < G.size(); ++i) dA.data[i] += k * G.data[i];
  };
  return id;
}

Tape::Id Tape::relu(Id a) {
  const Tensor& A = nodes_[a].val;
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = A.data[i] > 0.0 ? A.data[i] : 0.0;
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id]() {
    const Tensor& G = nodes_[id].grad;
    const Tensor& A = nodes_[a].val;
    Tensor& dA = grad_mut(a);
    for (size_t i = 0; i < G.size(); ++i) {
      if (A.data[i] > 0.0) dA.data[i] += G.data[i];
    }
  };
  return id;
}

Tape::Id Tape::sigmoid(Id a) {
  const Tensor& A = nodes_[a].val;
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = 1.0 / (1.0 + std::exp(-A.data[i]));
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id]() {
    const Tensor& G = nodes_[id].grad;
    const Tensor& Y = nodes_[id].val;
    Tensor& dA = grad_mut(a);
    for (size_t i = 0; i < G.size(); ++i) {
      dA.data[i] += G.data[i] * Y.data[i] * (1.0 - Y.data[i]);
    }
  };
  return id;
}

Tape::Id Tape::softmax_rows(Id a) {
  const Tensor& A = nodes_[a].val;
  Tensor out(A.rows, A.cols);
  for (int r = 0; r < A.rows; ++r) {
    double mx = -1e300;
    for (int c = 0; c < A.cols; ++c) mx = std::max(mx, A.at(r, c));
    double sum = 0.0;
    for (int c = 0; c < A.cols; ++c) {
      out.at(r, c) = std::exp(A.at(r, c) - mx);
      sum += out.at(r, c);
    }
    for (int c = 0; c < A.cols; ++c) out.at(r, c) /= sum;
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id]() {
    const Tensor& G = nodes_[id].grad;
    const Tensor& Y = nodes_[id].val;
    Tensor& dA = grad_mut(a);
    for (int r = 0; r < G.rows; ++r) {
      double dot = 0.0;
      for (int c = 0; c < G.cols; ++c) dot += G.at(r, c) * Y.at(r, c);
      for (int c = 0; c < G.cols; ++c) {
        dA.at(r, c) += Y.at(r, c) * (G.at(r, c) - dot);
      }
    }
  };
  return id;
}

Tape::Id Tape::layernorm_rows(Id a, double eps) {
  const Tensor& A = nodes_[a].val;
  Tensor out(A.rows, A.cols);
  Tensor inv_sigma(A.rows, 1);
  const int n = A.cols;
  for (int r = 0; r < A.rows; ++r) {
    double mean = 0.0;
    for (int c = 0; c < n; ++c) mean += A.at(r, c);
    mean /= n;
    double var = 0.0;
    for (int c = 0; c < n; ++c) {
      const double d = A.at(r, c) - mean;
      var += d * d;
    }
    var /= n;
    const double inv = 1.0 / std::sqrt(var + eps);
    inv_sigma.at(r, 0) = inv;
    for (int c = 0; c < n; ++c) out.at(r, c) = (A.at(r, c) - mean) * inv;
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id, inv_sigma]() {
    const Tensor& G = nodes_[id].grad;
    const Tensor& Y = nodes_[id].val;
    Tensor& dA = grad_mut(a);
    const int n = G.cols;
    for (int r = 0; r < G.rows; ++r) {
      double g_mean = 0.0, gy_mean = 0.0;
      for (int c = 0; c < n; ++c) {
        g_mean += G.at(r, c);
        gy_mean += G.at(r, c) * Y.at(r, c);
      }
      g_mean /= n;
      gy_mean /= n;
      const double inv = inv_sigma.at(r, 0);
      for (int c = 0; c < n; ++c) {
        dA.at(r, c) += inv * (G.at(r, c) - g_mean - Y.at(r, c) * gy_mean);
      }
    }
  };
  return id;
}

Tape::Id Tape::log(Id a) {
  const Tensor& A = nodes_[a].val;
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = std::log(A.data[i]);
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id]() {
    const Tensor& G = nodes_[id].grad;
    const Tensor& A = nodes_[a].val;
    Tensor& dA = grad_mut(a);
    for (size_t i = 0; i < G.size(); ++i) dA.data[i] += G.data[i] / A.data[i];
  };
  return id;
}

Tape::Id Tape::clamp(Id a, double lo, double hi) {
  const Tensor& A = nodes_[a].val;
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = std::clamp(A.data[i], lo, hi);
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id, lo, hi]() {
    const Tensor& G = nodes_[id].grad;
    const Tensor& A = nodes_[a].val;
    Tensor& dA = grad_mut(a);
    for (size_t i = 0; i < G.size(); ++i) {
      if (A.data[i] > lo && A.data[i] < hi) dA.data[i] += G.data[i];
    }
  };
  return id;
}

Tape::Id Tape::smooth_l1(Id a) {
  const Tensor& A = nodes_[a].val;
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) {
    const double e = A.data[i];
    out.data[i] = std::abs(e) < 1.0 ? 0.5 * e * e : std::abs(e) - 0.5;
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id]() {
    const Tensor& G = nodes_[id].grad;
    const Tensor& A = nodes_[a].val;
    Tensor& dA = grad_mut(a);
    for (size_t i = 0; i < G.size(); ++i) {
      dA.data[i] += G.data[i] * std::clamp(A.data[i], -1.0, 1.0);
    }
  };
  return id;
}

Tape::Id Tape::wrap_angle(Id a) {
  const Tensor& A = nodes_[a].val;
  Tensor out(A.rows, A.cols);
  for (size_t i = 0; i < out.size(); ++i) {
    double t = std::fmod(A.data[i], 2.0 * M_PI);
    if (t <= -M_PI) t += 2.0 * M_PI;
    if (t > M_PI) t -= 2.0 * M_PI;
    out.data[i] = t;
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id]() {
    const Tensor& G = nodes_[id].grad;
    Tensor& dA = grad_mut(a);
    for (size_t i = 0; i < G.size(); ++i) dA.data[i] += G.data[i];
  };
  return id;
}

Tape::Id Tape::concat_rows(const std::vector<Id>& parts) {
  require(!parts.empty(), "concat_rows: empty input");
  const int cols = nodes_[parts[0]].val.cols;
  int rows = 0;
  for (Id p : parts) {
    require(nodes_[p].val.cols == cols, "concat_rows: column mismatch");
    rows += nodes_[p].val.rows;
  }
  Tensor out(rows, cols);
  int r = 0;
  for (Id p : parts) {
    const Tensor& P = nodes_[p].val;
    std::copy(P.data.begin(), P.data.end(), out.data.begin() + static_cast<size_t>(r) * cols);
    r += P.rows;
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, parts, id]() {
    const Tensor& G = nodes_[id].grad;
    int r = 0;
    for (Id p : parts) {
      Tensor& dP = grad_mut(p);
      const size_t n = dP.size();
      const double* src = G.data.data() + static_cast<size_t>(r) * G.cols;
      for (size_t i = 0; i < n; ++i) dP.data[i] += src[i];
      r += dP.rows;
    }
  };
  return id;
}

Tape::Id Tape::concat_cols(const std::vector<Id>& parts) {
  require(!parts.empty(), "concat_cols: empty input");
  const int rows = nodes_[parts[0]].val.rows;
  int cols = 0;
  for (Id p : parts) {
    require(nodes_[p].val.rows == rows, "concat_cols: row mismatch");
    cols += nodes_[p].val.cols;
  }
  Tensor out(rows, cols);
  int c0 = 0;
  for (Id p : parts) {
    const Tensor& P = nodes_[p].val;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < P.cols; ++c) out.at(r, c0 + c) = P.at(r, c);
    }
    c0 += P.cols;
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, parts, id]() {
    const Tensor& G = nodes_[id].grad;
    int c0 = 0;
    for (Id p : parts) {
      Tensor& dP = grad_mut(p);
      for (int r = 0; r < dP.rows; ++r) {
        for (int c = 0; c < dP.cols; ++c) dP.at(r, c) += G.at(r, c0 + c);
      }
      c0 += dP.cols;
    }
  };
  return id;
}

Tape::Id Tape::slice_rows(Id a, int r0, int r1) {
  const Tensor& A = nodes_[a].val;
  require(0 <= r0 && r0 < r1 && r1 <= A.rows, "slice_rows: bad range");
  Tensor out(r1 - r0, A.cols);
  std::copy(A.data.begin() + static_cast<size_t>(r0) * A.cols,
            A.data.begin() + static_cast<size_t>(r1) * A.cols, out.data.begin());
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id, r0]() {
    const Tensor& G = nodes_[id].grad;
    Tensor& dA = grad_mut(a);
    double* dst = dA.data.data() + static_cast<size_t>(r0) * dA.cols;
    for (size_t i = 0; i < G.size(); ++i) dst[i] += G.data[i];
  };
  return id;
}

Tape::Id Tape::slice_cols(Id a, int c0, int c1) {
  const Tensor& A = nodes_[a].val;
  require(0 <= c0 && c0 < c1 && c1 <= A.cols, "slice_cols: bad range");
  Tensor out(A.rows, c1 - c0);
  for (int r = 0; r < A.rows; ++r) {
    for (int c = c0; c < c1; ++c) out.at(r, c - c0) = A.at(r, c);
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id, c0]() {
    const Tensor& G = nodes_[id].grad;
    Tensor& dA = grad_mut(a);
    for (int r = 0; r < G.rows; ++r) {
      for (int c = 0; c < G.cols; ++c) dA.at(r, c + c0) += G.at(r, c);
    }
  };
  return id;
}

Tape::Id Tape::gather_rows(Id a, std::vector<int> rows) {
  const Tensor& A = nodes_[a].val;
  for (int r : rows) require(0 <= r && r < A.rows, "gather_rows: index out of range");
  Tensor out(static_cast<int>(rows.size()), A.cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < A.cols; ++c) out.at(static_cast<int>(i), c) = A.at(rows[i], c);
  }
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id, rows = std::move(rows)]() {
    const Tensor& G = nodes_[id].grad;
    Tensor& dA = grad_mut(a);
    for (size_t i = 0; i < rows.size(); ++i) {
      for (int c = 0; c < G.cols; ++c) {
        dA.at(rows[i], c) += G.at(static_cast<int>(i), c);
      }
    }
  };
  return id;
}

Tape::Id Tape::reduce_mean_rows(Id a) {
  const Tensor& A = nodes_[a].val;
  Tensor out(1, A.cols);
  for (int r = 0; r < A.rows; ++r) {
    for (int c = 0; c < A.cols; ++c) out.at(0, c) += A.at(r, c);
  }
  for (int c = 0; c < A.cols; ++c) out.at(0, c) /= A.rows;
  Id id = push(std::move(out));
  nodes_[id].back = [this, a, id]() {
    const Tensor& G = nodes_[id].grad;
    Tensor& dA = grad_mut(a);
    const double inv = 1.0 / dA.rows;
    for (int r = 0; r < dA.rows; ++r) {
      for (int c = 0; c < dA.cols; ++c) dA.at(r, c) += G.at(0, c) * inv;
    }
  };
  return id;
}

Tape::Id Tape::reduce_sum(Id a) {
  const Tensor& A = nodes_[a].val;
  double s = 0.0;
  for (double v : A.data) s += v;
  Id id = push(Tensor::scalar(s));
  nodes_[id].back = [this, a, id]() {
    const double g = nodes_[id].grad.data[0];
    Tensor& dA = grad_mut(a);
    for (double& v : dA.data) v += g;
  };
  return id;
}

Tape::Id Tape::reduce_mean(Id a) {
  const Tensor& A = nodes_[a].val;
  double s = 0.0;
  for (double v : A.data) s += v;
  const double inv = 1.0 / static_cast<double>(A.size());
  Id id = push(Tensor::scalar(s * inv));
  nodes_[id].back = [this, a, id, inv]() {
    const double g = nodes_[id].grad.data[0] * inv;
    Tensor& dA = grad_mut(a);
    for (double& v : dA.data) v += g;
  };
  return id;
}

void Tape::backward(Id loss) {
  require(nodes_[loss].val.rows == 1 && nodes_[loss].val.cols == 1,
          "backward: loss must be scalar");
  nodes_[loss].grad.data[0] = 1.0;
  for (Id i = loss; i >= 0; --i) {
    if (nodes_[i].back) nodes_[i].back();
  }
}

bool Tape::all_finite() const {
  for (const auto& node : nodes_) {
    for (double v : node.val.data) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

}  // namespace swnav
