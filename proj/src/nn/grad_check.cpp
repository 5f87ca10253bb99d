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

#include "docmatch/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "docmatch/error.hpp"
#include "docmatch/rng.hpp"

namespace docmatch::nn {

namespace {

double evaluate(const LossBuilder& loss_fn) {
  Tape<double> tape(false);
  const double v = tape.scalar(loss_fn(tape));
  if (!std::isfinite(v)) throw NumericError("gradient check: loss is not finite");
  return v;
}

}  // namespace

GradCheckResult grad_check(const LossBuilder& loss_fn, ParameterStore& store,
                           const std::vector<std::string>& params, const GradCheckOptions& options) {
  if (!(options.eps >= 1e-6 && options.eps <= 1e-4)) {
    throw ArgumentError("gradient check eps must lie in [1e-6, 1e-4]");
  }
  if (options.samples <= 0) throw ArgumentError("gradient check needs at least one sample");

  std::vector<Parameter*> targets;
  if (params.empty()) {
    for (std::size_t i = 0; i < store.size(); ++i) targets.push_back(&store.at(i));
  } else {
    for (const auto& name : params) targets.push_back(&store.get(name));
  }

  store.zero_grad();
  double loss_value = 0.0;
  {
    Tape<double> tape(true);
    const Var loss = loss_fn(tape);
    loss_value = tape.scalar(loss);
    if (!std::isfinite(loss_value)) throw NumericError("gradient check: loss is not finite");
    tape.backward(loss);
  }
  const double noise =
      64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(loss_value)) / options.eps;

  // Half the samples come from entries with a visible gradient so that a
  // sparse gradient (embedding tables) is still exercised.
  std::vector<std::pair<Parameter*, Eigen::Index>> live;
  for (Parameter* p : targets) {
    for (Eigen::Index k = 0; k < p->grad.size(); ++k) {
      if (std::abs(p->grad.data()[k]) > 1e-9) live.emplace_back(p, k);
    }
  }
  Rng rng(options.seed);
  GradCheckResult result;
  for (int s = 0; s < options.samples; ++s) {
    Parameter* p = nullptr;
    Eigen::Index k = 0;
    if (!live.empty() && s % 2 == 0) {
      const auto& pick = live[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(live.size()) - 1))];
      p = pick.first;
      k = pick.second;
    } else {
      p = targets[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(targets.size()) - 1))];
      if (p->value.size() == 0) continue;
      k = static_cast<Eigen::Index>(rng.uniform_int(0, static_cast<std::int64_t>(p->value.size()) - 1));
    }
    double& x = p->value.data()[k];
    const double saved = x;
    x = saved + options.eps;
    const double up = evaluate(loss_fn);
    x = saved - options.eps;
    const double down = evaluate(loss_fn);
    x = saved;
    const double numeric = (up - down) / (2.0 * options.eps);
    const double analytic = p->grad.data()[k];
    const double err =
        std::abs(analytic - numeric) / std::max({std::abs(analytic) + std::abs(numeric), options.floor, noise});
    ++result.checked;
    if (err >= result.max_rel_error) {
      result.max_rel_error = err;
      result.worst = p->name + "[" + std::to_string(k) + "]";
    }
  }
  return result;
}

}  // namespace docmatch::nn
