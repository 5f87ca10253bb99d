// Copyright 2026 The docmatch Authors.
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

#pragma once

#include <functional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "docmatch/nn/params.hpp"
#include "docmatch/rng.hpp"

namespace docmatch::nn {

// Training-time noise. Inactive (all rates zero) unless set on the tape.
struct Noise {
  double dropout = 0.0;       // residual-branch dropout rate
  double word_dropout = 0.0;  // probability of reading a token as unknown
  std::uint64_t seed = 0;
};

// Handle to a value recorded on a Tape.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode automatic differentiation over row-major matrices. Every op
// appends a node holding its value and, when gradients are recorded, a
// closure that pushes the node's gradient into its inputs. Parameter
// gradients are accumulated into the ParameterStore (in double) by backward().
//
// A tape is single-use and not thread-safe; build one per forward pass.
template <typename T>
class Tape {
 public:
  using Mat = Matrix<T>;

  explicit Tape(bool record_gradients = true) : record_(record_gradients) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }

  void set_noise(const Noise& noise);
  const Noise& noise() const { return noise_; }
  // Stream shared by every noisy op on this tape.
  Rng& noise_rng() { return noise_rng_; }

  Var constant(Mat value);
  // Leaf bound to a parameter; repeated calls return the same node.
  Var param(Parameter& p);
  // Rows of an embedding table. Gradients scatter straight into the table.
  Var embedding(Parameter& table, std::span<const int> rows);

  const Mat& value(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id)).value; }
  const Mat& grad(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id)).grad; }
  int rows(Var v) const { return static_cast<int>(value(v).rows()); }
  int cols(Var v) const { return static_cast<int>(value(v).cols()); }
  T scalar(Var v) const { return value(v)(0, 0); }
  std::size_t node_count() const { return nodes_.size(); }

  Var matmul(Var a, Var b);
  // a * b^T
  Var matmul_nt(Var a, Var b);
  Var transpose(Var a);
  Var add(Var a, Var b);
  // Adds a 1 x c row to every row of a.
  Var add_row(Var a, Var row);
  Var scale(Var a, T factor);
  Var gelu(Var a);
  // Inverted dropout at noise().dropout; the identity when that rate is 0.
  Var dropout(Var a);
  Var layer_norm(Var x, Var gain, Var bias, T eps = T(1e-5));
  Var softmax_rows(Var a);
  // Multi-head scaled dot-product attention. q is n x d, k and v are m x d;
  // heads split the columns. Causal masking requires n == m.
  Var attention(Var q, Var k, Var v, int heads, bool causal);
  Var concat_rows(std::span<const Var> parts);
  Var slice_rows(Var a, int start, int count);
  Var select_rows(Var a, std::span<const int> rows);
  // Adds 1 x 1 values.
  Var sum_scalars(std::span<const Var> scalars);
  // sum over entries of softplus(m) - y*m, i.e. summed binary cross entropy on
  // logits. labels has the shape of logits.
  Var bce_with_logits_sum(Var logits, const Mat& labels);
  // sum over rows of logsumexp(row) - row[target].
  Var softmax_cross_entropy_sum(Var logits, std::span<const int> targets);

  // Seeds d(loss)/d(loss) = 1 and accumulates parameter gradients.
  void backward(Var loss);

 private:
  struct Node {
    Mat value;
    Mat grad;
    bool needs_grad = false;
    std::function<void()> back;
  };

  Var push(Mat value, bool needs_grad, std::function<void()> back = {});
  bool needs(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].needs_grad; }
  Mat& g(Var v) { return nodes_[static_cast<std::size_t>(v.id)].grad; }
  const Mat& val(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].value; }

  bool record_;
  Noise noise_;
  Rng noise_rng_{0};
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
  std::vector<std::pair<int, Parameter*>> param_leaves_;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace docmatch::nn
