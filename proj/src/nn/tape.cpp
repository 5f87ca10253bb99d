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

#include "docmatch/nn/tape.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "docmatch/error.hpp"

namespace docmatch::nn {

namespace {

std::string shape_of(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

template <typename T>
Var Tape<T>::push(Mat value, bool needs_grad, std::function<void()> back) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = record_ && needs_grad;
  if (n.needs_grad) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

template <typename T>
Var Tape<T>::constant(Mat value) {
  return push(std::move(value), false);
}

template <typename T>
Var Tape<T>::param(Parameter& p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return Var{it->second};
  Var v = push(p.value.template cast<T>(), true);
  param_nodes_.emplace(&p, v.id);
  if (record_) param_leaves_.emplace_back(v.id, &p);
  return v;
}

template <typename T>
Var Tape<T>::embedding(Parameter& table, std::span<const int> rows) {
  Mat out(static_cast<Eigen::Index>(rows.size()), table.value.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= table.value.rows()) {
      throw ArgumentError("row " + std::to_string(rows[i]) + " out of range for embedding '" +
                          table.name + "' with " + std::to_string(table.value.rows()) + " rows");
    }
    out.row(static_cast<Eigen::Index>(i)) = table.value.row(rows[i]).template cast<T>();
  }
  const Var self{static_cast<int>(nodes_.size())};
  std::vector<int> idx(rows.begin(), rows.end());
  Parameter* tp = &table;
  return push(std::move(out), true, [this, self, tp, idx = std::move(idx)] {
    const Mat& gs = g(self);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      tp->grad.row(idx[i]) += gs.row(static_cast<Eigen::Index>(i)).template cast<double>();
    }
  });
}

template <typename T>
Var Tape<T>::matmul(Var a, Var b) {
  if (val(a).cols() != val(b).rows()) {
    throw ShapeError("matmul " + shape_of(val(a).rows(), val(a).cols()) + " by " +
                     shape_of(val(b).rows(), val(b).cols()));
  }
  Mat out = val(a) * val(b);
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a) || needs(b), [this, self, a, b] {
    if (needs(a)) g(a).noalias() += g(self) * val(b).transpose();
    if (needs(b)) g(b).noalias() += val(a).transpose() * g(self);
  });
}

template <typename T>
Var Tape<T>::matmul_nt(Var a, Var b) {
  if (val(a).cols() != val(b).cols()) {
    throw ShapeError("matmul_nt " + shape_of(val(a).rows(), val(a).cols()) + " by transposed " +
                     shape_of(val(b).rows(), val(b).cols()));
  }
  Mat out = val(a) * val(b).transpose();
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a) || needs(b), [this, self, a, b] {
    if (needs(a)) g(a).noalias() += g(self) * val(b);
    if (needs(b)) g(b).noalias() += g(self).transpose() * val(a);
  });
}

template <typename T>
Var Tape<T>::transpose(Var a) {
  Mat out = val(a).transpose();
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a), [this, self, a] { g(a) += g(self).transpose(); });
}

template <typename T>
Var Tape<T>::add(Var a, Var b) {
  if (val(a).rows() != val(b).rows() || val(a).cols() != val(b).cols()) {
    throw ShapeError("add " + shape_of(val(a).rows(), val(a).cols()) + " and " +
                     shape_of(val(b).rows(), val(b).cols()));
  }
  Mat out = val(a) + val(b);
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a) || needs(b), [this, self, a, b] {
    if (needs(a)) g(a) += g(self);
    if (needs(b)) g(b) += g(self);
  });
}

template <typename T>
Var Tape<T>::add_row(Var a, Var row) {
  if (val(row).rows() != 1 || val(row).cols() != val(a).cols()) {
    throw ShapeError("add_row " + shape_of(val(a).rows(), val(a).cols()) + " and " +
                     shape_of(val(row).rows(), val(row).cols()));
  }
  Mat out = val(a).rowwise() + val(row).row(0);
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a) || needs(row), [this, self, a, row] {
    if (needs(a)) g(a) += g(self);
    if (needs(row)) g(row) += g(self).colwise().sum();
  });
}

template <typename T>
Var Tape<T>::scale(Var a, T factor) {
  Mat out = val(a) * factor;
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a), [this, self, a, factor] { g(a) += g(self) * factor; });
}

template <typename T>
Var Tape<T>::gelu(Var a) {
  static const T c = static_cast<T>(std::sqrt(2.0 / 3.14159265358979323846));
  static const T k = static_cast<T>(0.044715);
  const Mat& x = val(a);
  Mat out(x.rows(), x.cols());
  Mat deriv(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const T xi = x.data()[i];
    const T th = std::tanh(c * (xi + k * xi * xi * xi));
    out.data()[i] = T(0.5) * xi * (T(1) + th);
    deriv.data()[i] =
        T(0.5) * (T(1) + th) + T(0.5) * xi * (T(1) - th * th) * c * (T(1) + T(3) * k * xi * xi);
  }
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a), [this, self, a, deriv = std::move(deriv)] {
    g(a).array() += g(self).array() * deriv.array();
  });
}

template <typename T>
void Tape<T>::set_noise(const Noise& noise) {
  if (noise.dropout < 0 || noise.dropout >= 1 || noise.word_dropout < 0 || noise.word_dropout >= 1) {
    throw ArgumentError("noise rates must lie in [0, 1)");
  }
  noise_ = noise;
  noise_rng_ = Rng(noise.seed);
}

template <typename T>
Var Tape<T>::dropout(Var a) {
  if (noise_.dropout <= 0) return a;
  const Mat& x = val(a);
  const T keep = static_cast<T>(1.0 - noise_.dropout);
  Mat mask(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = noise_rng_.uniform() < noise_.dropout ? T(0) : T(1) / keep;
  }
  Mat out = x.cwiseProduct(mask);
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a), [this, self, a, mask = std::move(mask)] {
    g(a).array() += g(self).array() * mask.array();
  });
}

template <typename T>
Var Tape<T>::layer_norm(Var x, Var gain, Var bias, T eps) {
  const Mat& xv = val(x);
  const Eigen::Index n = xv.rows();
  const Eigen::Index c = xv.cols();
  if (val(gain).rows() != 1 || val(gain).cols() != c || val(bias).rows() != 1 ||
      val(bias).cols() != c) {
    throw ShapeError("layer_norm parameters do not match width " + std::to_string(c));
  }
  auto xhat = std::make_shared<Mat>(n, c);
  auto inv_std = std::make_shared<Eigen::Matrix<T, Eigen::Dynamic, 1>>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const T mean = xv.row(i).mean();
    const T var = (xv.row(i).array() - mean).square().mean();
    const T is = T(1) / std::sqrt(var + eps);
    (*inv_std)(i) = is;
    xhat->row(i) = (xv.row(i).array() - mean) * is;
  }
  Mat out = (xhat->array().rowwise() * val(gain).row(0).array()).rowwise() +
            val(bias).row(0).array();
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(x) || needs(gain) || needs(bias),
              [this, self, x, gain, bias, xhat, inv_std, c] {
                const Mat& gy = g(self);
                if (needs(gain)) g(gain) += (gy.array() * xhat->array()).colwise().sum().matrix();
                if (needs(bias)) g(bias) += gy.colwise().sum();
                if (needs(x)) {
                  const Mat dxhat = gy.array().rowwise() * val(gain).row(0).array();
                  for (Eigen::Index i = 0; i < dxhat.rows(); ++i) {
                    const T m1 = dxhat.row(i).mean();
                    const T m2 = (dxhat.row(i).array() * xhat->row(i).array()).sum() / T(c);
                    g(x).row(i).array() +=
                        (*inv_std)(i) * (dxhat.row(i).array() - m1 - xhat->row(i).array() * m2);
                  }
                }
              });
}

template <typename T>
Var Tape<T>::softmax_rows(Var a) {
  const Mat& x = val(a);
  Mat out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const T mx = x.row(i).maxCoeff();
    out.row(i) = (x.row(i).array() - mx).exp();
    out.row(i) /= out.row(i).sum();
  }
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a), [this, self, a] {
    const Mat& p = val(self);
    const Mat& gy = g(self);
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const T dot = (gy.row(i).array() * p.row(i).array()).sum();
      g(a).row(i).array() += p.row(i).array() * (gy.row(i).array() - dot);
    }
  });
}

template <typename T>
Var Tape<T>::attention(Var q, Var k, Var v, int heads, bool causal) {
  const Mat& Q = val(q);
  const Mat& K = val(k);
  const Mat& V = val(v);
  const Eigen::Index n = Q.rows();
  const Eigen::Index m = K.rows();
  const Eigen::Index d = Q.cols();
  if (heads <= 0 || d % heads != 0) throw ShapeError("attention width not divisible by heads");
  if (K.cols() != d || V.cols() != d || V.rows() != m) {
    throw ShapeError("attention q " + shape_of(n, d) + ", k " + shape_of(m, K.cols()) + ", v " +
                     shape_of(V.rows(), V.cols()));
  }
  if (m == 0) throw ArgumentError("attention over empty memory");
  if (causal && n != m) throw ShapeError("causal attention needs as many keys as queries");
  const Eigen::Index dh = d / heads;
  const T factor = T(1) / std::sqrt(static_cast<T>(dh));
  auto probs = std::make_shared<std::vector<Mat>>(static_cast<std::size_t>(heads));
  Mat out(n, d);
  for (int h = 0; h < heads; ++h) {
    Mat s = (Q.middleCols(h * dh, dh) * K.middleCols(h * dh, dh).transpose()) * factor;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index limit = causal ? i + 1 : m;
      const T mx = s.row(i).head(limit).maxCoeff();
      s.row(i).head(limit) = (s.row(i).head(limit).array() - mx).exp();
      s.row(i).head(limit) /= s.row(i).head(limit).sum();
      if (limit < m) s.row(i).tail(m - limit).setZero();
    }
    out.middleCols(h * dh, dh).noalias() = s * V.middleCols(h * dh, dh);
    (*probs)[static_cast<std::size_t>(h)] = std::move(s);
  }
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(q) || needs(k) || needs(v),
              [this, self, q, k, v, heads, dh, factor, probs] {
                const Mat& gy = g(self);
                for (int h = 0; h < heads; ++h) {
                  const Mat& p = (*probs)[static_cast<std::size_t>(h)];
                  const auto go = gy.middleCols(h * dh, dh);
                  if (needs(v)) g(v).middleCols(h * dh, dh).noalias() += p.transpose() * go;
                  if (!needs(q) && !needs(k)) continue;
                  Mat dp = go * val(v).middleCols(h * dh, dh).transpose();
                  for (Eigen::Index i = 0; i < dp.rows(); ++i) {
                    const T dot = (dp.row(i).array() * p.row(i).array()).sum();
                    dp.row(i) = (p.row(i).array() * (dp.row(i).array() - dot)).matrix();
                  }
                  dp *= factor;
                  if (needs(q)) g(q).middleCols(h * dh, dh).noalias() += dp * val(k).middleCols(h * dh, dh);
                  if (needs(k)) {
                    g(k).middleCols(h * dh, dh).noalias() += dp.transpose() * val(q).middleCols(h * dh, dh);
                  }
                }
              });
}

template <typename T>
Var Tape<T>::concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw ArgumentError("concat_rows needs at least one part");
  const Eigen::Index c = val(parts[0]).cols();
  Eigen::Index total = 0;
  bool ng = false;
  for (Var p : parts) {
    if (val(p).cols() != c) throw ShapeError("concat_rows width mismatch");
    total += val(p).rows();
    ng = ng || needs(p);
  }
  Mat out(total, c);
  Eigen::Index at = 0;
  for (Var p : parts) {
    out.middleRows(at, val(p).rows()) = val(p);
    at += val(p).rows();
  }
  const Var self{static_cast<int>(nodes_.size())};
  std::vector<Var> ps(parts.begin(), parts.end());
  return push(std::move(out), ng, [this, self, ps = std::move(ps)] {
    Eigen::Index at = 0;
    for (Var p : ps) {
      const Eigen::Index r = val(p).rows();
      if (needs(p)) g(p) += g(self).middleRows(at, r);
      at += r;
    }
  });
}

template <typename T>
Var Tape<T>::slice_rows(Var a, int start, int count) {
  if (start < 0 || count < 0 || start + count > val(a).rows()) {
    throw ShapeError("slice_rows [" + std::to_string(start) + ", +" + std::to_string(count) +
                     ") of " + std::to_string(val(a).rows()) + " rows");
  }
  Mat out = val(a).middleRows(start, count);
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(a), [this, self, a, start, count] {
    g(a).middleRows(start, count) += g(self);
  });
}

template <typename T>
Var Tape<T>::select_rows(Var a, std::span<const int> rows) {
  const Mat& x = val(a);
  Mat out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= x.rows()) {
      throw ArgumentError("select_rows index " + std::to_string(rows[i]) + " out of range");
    }
    out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  }
  const Var self{static_cast<int>(nodes_.size())};
  std::vector<int> idx(rows.begin(), rows.end());
  return push(std::move(out), needs(a), [this, self, a, idx = std::move(idx)] {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      g(a).row(idx[i]) += g(self).row(static_cast<Eigen::Index>(i));
    }
  });
}

template <typename T>
Var Tape<T>::sum_scalars(std::span<const Var> scalars) {
  Mat out = Mat::Zero(1, 1);
  bool ng = false;
  for (Var s : scalars) {
    if (val(s).rows() != 1 || val(s).cols() != 1) throw ShapeError("sum_scalars expects 1x1 values");
    out(0, 0) += val(s)(0, 0);
    ng = ng || needs(s);
  }
  const Var self{static_cast<int>(nodes_.size())};
  std::vector<Var> ss(scalars.begin(), scalars.end());
  return push(std::move(out), ng, [this, self, ss = std::move(ss)] {
    for (Var s : ss) {
      if (needs(s)) g(s)(0, 0) += g(self)(0, 0);
    }
  });
}

template <typename T>
Var Tape<T>::bce_with_logits_sum(Var logits, const Mat& labels) {
  const Mat& m = val(logits);
  if (labels.rows() != m.rows() || labels.cols() != m.cols()) {
    throw ShapeError("labels " + shape_of(labels.rows(), labels.cols()) + " vs logits " +
                     shape_of(m.rows(), m.cols()));
  }
  T total = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const T x = m.data()[i];
    const T y = labels.data()[i];
    total += std::max(x, T(0)) - x * y + std::log1p(std::exp(-std::abs(x)));
  }
  Mat out(1, 1);
  out(0, 0) = total;
  const Var self{static_cast<int>(nodes_.size())};
  return push(std::move(out), needs(logits), [this, self, logits, labels] {
    const Mat& x = val(logits);
    const T gs = g(self)(0, 0);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const T xi = x.data()[i];
      const T sig = xi >= 0 ? T(1) / (T(1) + std::exp(-xi)) : std::exp(xi) / (T(1) + std::exp(xi));
      g(logits).data()[i] += gs * (sig - labels.data()[i]);
    }
  });
}

template <typename T>
Var Tape<T>::softmax_cross_entropy_sum(Var logits, std::span<const int> targets) {
  const Mat& z = val(logits);
  if (static_cast<Eigen::Index>(targets.size()) != z.rows()) {
    throw ShapeError("softmax cross entropy: " + std::to_string(targets.size()) + " targets for " +
                     std::to_string(z.rows()) + " rows");
  }
  auto probs = std::make_shared<Mat>(z.rows(), z.cols());
  T total = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const int t = targets[static_cast<std::size_t>(i)];
    if (t < 0 || t >= z.cols()) {
      throw LabelError("target " + std::to_string(t) + " outside pool of " +
                       std::to_string(z.cols()));
    }
    const T mx = z.row(i).maxCoeff();
    probs->row(i) = (z.row(i).array() - mx).exp();
    const T s = probs->row(i).sum();
    probs->row(i) /= s;
    total += mx + std::log(s) - z(i, t);
  }
  Mat out(1, 1);
  out(0, 0) = total;
  const Var self{static_cast<int>(nodes_.size())};
  std::vector<int> ts(targets.begin(), targets.end());
  return push(std::move(out), needs(logits), [this, self, logits, probs, ts = std::move(ts)] {
    const T gs = g(self)(0, 0);
    Mat d = *probs;
    for (std::size_t i = 0; i < ts.size(); ++i) d(static_cast<Eigen::Index>(i), ts[i]) -= T(1);
    g(logits) += d * gs;
  });
}

template <typename T>
void Tape<T>::backward(Var loss) {
  if (!record_) throw ArgumentError("backward() on a tape that does not record gradients");
  if (val(loss).rows() != 1 || val(loss).cols() != 1) throw ShapeError("loss must be 1x1");
  const auto last = static_cast<std::size_t>(loss.id);
  for (std::size_t i = 0; i <= last; ++i) {
    auto& n = nodes_[i];
    if (n.needs_grad) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  }
  if (!nodes_[last].needs_grad) return;
  nodes_[last].grad(0, 0) = T(1);
  for (std::size_t i = last + 1; i-- > 0;) {
    auto& n = nodes_[i];
    if (n.needs_grad && n.back) n.back();
  }
  for (auto& [id, p] : param_leaves_) {
    if (static_cast<std::size_t>(id) <= last) {
      p->grad += nodes_[static_cast<std::size_t>(id)].grad.template cast<double>();
    }
  }
}

template class Tape<float>;
template class Tape<double>;

}  // namespace docmatch::nn
