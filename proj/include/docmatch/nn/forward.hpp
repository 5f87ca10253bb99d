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

#include <string>

#include "docmatch/doc/document.hpp"
#include "docmatch/nn/model.hpp"
#include "docmatch/nn/prompt.hpp"
#include "docmatch/nn/tape.hpp"

namespace docmatch::nn {

// Row t = word + position(t) + x0 + y0 + x1 + y1 + width + height embeddings.
// This is the pre-encoder source embedding; anchor prompt slots bind to it.
template <typename T>
Var embed_source(Tape<T>& tape, Model& model, const doc::Document& doc);

// Pre-norm self-attention encoder stack followed by a final layer norm.
template <typename T>
Var encoder_forward(Tape<T>& tape, Model& model, Var x);

// Target generator: each query row self-attends (causally if requested),
// cross-attends the memory and passes a feed-forward block. Returns the
// normalized hidden rows.
template <typename T>
Var decoder_forward(Tape<T>& tape, Model& model, Var queries, Var memory, bool causal);

// N_p x d prompt rows. Anchor slots take rows of `source_rows`.
template <typename T>
Var embed_prompt(Tape<T>& tape, Model& model, const Prompt& prompt, Var source_rows);

// Building blocks shared with the resampler and matcher.
template <typename T>
Var linear(Tape<T>& tape, Model& model, const std::string& prefix, Var x);
template <typename T>
Var norm(Tape<T>& tape, Model& model, const std::string& prefix, Var x);
template <typename T>
Var feed_forward(Tape<T>& tape, Model& model, const std::string& prefix, Var x);
// Projects queries from `x` and keys/values from `memory`, attends, projects out.
template <typename T>
Var attention_block(Tape<T>& tape, Model& model, const std::string& prefix, Var x, Var memory,
                    bool causal);

}  // namespace docmatch::nn
