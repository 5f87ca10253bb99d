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

#include "docmatch/train/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace docmatch::train {

double scheduled_lr(double base, int step, int total, double warmup) {
  if (total <= 0) return base;
  const int warm = warmup > 0 ? std::max(1, static_cast<int>(std::ceil(warmup * total))) : 0;
  if (step < warm) return base * static_cast<double>(step + 1) / warm;
  return base * static_cast<double>(total - step) / static_cast<double>(std::max(1, total - warm));
}

namespace {

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

}  // namespace

AdamW::AdamW(nn::ParameterStore& store, const TrainConfig& config)
    : store_(store),
      weight_decay_(config.weight_decay),
      beta1_(config.beta1),
      beta2_(config.beta2),
      eps_(config.adam_eps),
      clip_(config.clip) {
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& p = store.at(i);
    m_.push_back(nn::MatrixD::Zero(p.value.rows(), p.value.cols()));
    v_.push_back(nn::MatrixD::Zero(p.value.rows(), p.value.cols()));
    const bool no_decay = ends_with(p.name, ".b") || ends_with(p.name, ".bias") ||
                          ends_with(p.name, ".gain") || p.name == "matcher.sep" ||
                          p.name == "matcher.eos";
    decay_.push_back(no_decay ? 0 : 1);
  }
}

double AdamW::step(double lr, const std::function<bool(const nn::Parameter&)>& frozen) {
  double sq = 0;
  for (std::size_t i = 0; i < store_.size(); ++i) {
    const auto& p = store_.at(i);
    if (frozen && frozen(p)) continue;
    sq += p.grad.squaredNorm();
  }
  const double norm = std::sqrt(sq);
  const double scale = clip_ > 0 && norm > clip_ ? clip_ / norm : 1.0;
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, t_);
  const double c2 = 1.0 - std::pow(beta2_, t_);
  for (std::size_t i = 0; i < store_.size(); ++i) {
    auto& p = store_.at(i);
    if (frozen && frozen(p)) continue;
    auto& m = m_[i];
    auto& v = v_[i];
    const auto g = (p.grad * scale).eval();
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    if (decay_[i]) p.value *= 1.0 - lr * weight_decay_;
    p.value.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  }
  return norm;
}

}  // namespace docmatch::train
