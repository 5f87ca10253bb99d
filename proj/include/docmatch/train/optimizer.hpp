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
#include <vector>

#include "docmatch/nn/params.hpp"
#include "docmatch/train/config.hpp"

namespace docmatch::train {

// Learning rate for 0-based `step` of `total`: linear rise over the warmup
// fraction, then linear decay towards zero.
double scheduled_lr(double base, int step, int total, double warmup);

// Adam with decoupled weight decay. Decay skips biases, layer-norm gains and
// the SEP/EOS rows.
class AdamW {
 public:
  AdamW(nn::ParameterStore& store, const TrainConfig& config);

  // Applies one update from the accumulated gradients. Parameters for which
  // `frozen` returns true are left untouched. Returns the gradient norm
  // before clipping.
  double step(double lr, const std::function<bool(const nn::Parameter&)>& frozen = {});
  int steps_taken() const { return t_; }

 private:
  nn::ParameterStore& store_;
  double weight_decay_, beta1_, beta2_, eps_, clip_;
  std::vector<nn::MatrixD> m_, v_;
  std::vector<char> decay_;
  int t_ = 0;
};

}  // namespace docmatch::train
