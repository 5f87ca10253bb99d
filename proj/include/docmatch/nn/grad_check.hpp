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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "docmatch/nn/params.hpp"
#include "docmatch/nn/tape.hpp"

namespace docmatch::nn {

// Builds the scalar loss on a fresh double-precision tape.
using LossBuilder = std::function<Var(Tape<double>&)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  int checked = 0;
  std::string worst;  // "name[flat index]" of the worst entry
};

struct GradCheckOptions {
  double eps = 1e-5;
  int samples = 32;          // entries compared across all listed parameters
  std::uint64_t seed = 0;
  // Denominator floor: |a - n| / max(|a| + |n|, floor, noise), where noise is
  // the rounding error of a central difference, 64 * machine eps * |loss| / eps.
  // Keeps entries whose true gradient is zero from dividing rounding noise by
  // rounding noise.
  double floor = 1e-6;
};

// Compares backward() against central differences on randomly chosen entries
// of `params` (all parameters when empty). Throws NumericError if any loss
// evaluation is non-finite and ArgumentError if eps is outside [1e-6, 1e-4].
GradCheckResult grad_check(const LossBuilder& loss_fn, ParameterStore& store,
                           const std::vector<std::string>& params, const GradCheckOptions& options);

}  // namespace docmatch::nn
