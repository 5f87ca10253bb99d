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

#include <vector>

#include "docmatch/nn/model.hpp"
#include "docmatch/nn/tape.hpp"

namespace docmatch::resampler {

using nn::Model;
using nn::Tape;
using nn::Var;

// Key/value projections of the normalized document memory, one pair per
// resampler layer. They do not depend on the prompt, so one cache serves
// every prompt asked of the same document.
struct MemoryCache {
  Var memory;  // X_m as given
  std::vector<Var> keys;
  std::vector<Var> values;
};

template <typename T>
MemoryCache cache_memory(Tape<T>& tape, Model& model, Var x_m);

struct ResampleOutput {
  Var queries;  // N_q x d
  Var prompts;  // N_p x d, zero rows when no prompt was given
};

// Prompt-aware resampler. The combined query C = [X_q; X_p] cross-attends
// [X_m; C] in every layer; the result is split back by position.
// x_p may be an invalid Var or have zero rows.
template <typename T>
ResampleOutput par_forward(Tape<T>& tape, Model& model, Var x_q, Var x_p, const MemoryCache& memory);
template <typename T>
ResampleOutput par_forward(Tape<T>& tape, Model& model, Var x_q, Var x_p, Var x_m);

// The same blocks with no prompt in the query.
template <typename T>
Var vanilla_forward(Tape<T>& tape, Model& model, Var x_q, const MemoryCache& memory);
template <typename T>
Var vanilla_forward(Tape<T>& tape, Model& model, Var x_q, Var x_m);

inline Var bypass(Var x_m) { return x_m; }

// Rows the target generator cross-attends for the configured arm:
//   par:     [X_q'; X_p']
//   vanilla: [vanilla(X_q); X_p]
//   none:    [X_m; X_p]
template <typename T>
Var generator_memory(Tape<T>& tape, Model& model, const MemoryCache& memory, Var x_p);

}  // namespace docmatch::resampler
