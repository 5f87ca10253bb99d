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
#include <vector>

#include "docmatch/doc/document.hpp"
#include "docmatch/matcher/matcher.hpp"
#include "docmatch/nn/prompt.hpp"
#include "docmatch/resampler/resampler.hpp"
#include "docmatch/spatial/instruction.hpp"

namespace docmatch::matcher {

// Everything about a document that does not depend on the prompt.
struct EncodedDocument {
  int n_words = 0;
  Var source;  // pre-encoder rows, bound by anchor prompt slots
  Var x_m;     // encoder output
  resampler::MemoryCache cache;
  Var pool;    // [X_m; SEP; EOS]
};

template <typename T>
EncodedDocument encode_document(Tape<T>& tape, Model& model, const doc::Document& doc);

// Generator memory for the concatenation of `prompts`.
template <typename T>
Var conditioned_memory(Tape<T>& tape, Model& model, const EncodedDocument& enc,
                       std::span<const nn::Prompt> prompts);

// N_words x n_tags similarity matrix in the configured prompt mode. Full
// space: one generator pass over every tag with all extraction prompts as
// memory. Per prompt: one pass per type yielding its (O, B, I) columns; the
// O column is the mean of the per-type O columns.
template <typename T>
Var bio_scores(Tape<T>& tape, Model& model, const EncodedDocument& enc);

template <typename T>
Var bio_document_loss(Tape<T>& tape, Model& model, const doc::Document& doc);

// Pointer loss for extracting schema type `type` from the document.
template <typename T>
Var seq_type_loss(Tape<T>& tape, Model& model, const EncodedDocument& enc, const doc::Document& doc,
                  int type);

// Pointer loss for a spatial instruction; targets are followed by EOS.
template <typename T>
Var instruction_loss(Tape<T>& tape, Model& model, const EncodedDocument& enc,
                     const spatial::Instruction& instruction);

// Inference helpers (single precision, no gradients).
nn::MatrixD predict_bio(Model& model, const doc::Document& doc);

// Hook factory called once per schema type; may return an empty hook.
using HookFactory = std::function<LogitHook(int type)>;

// Generated pointer sequence for every schema type, in schema order.
// max_len <= 0 means min(max_dec_len, 2 * N_words + 1).
std::vector<std::vector<int>> predict_seq(Model& model, const doc::Document& doc,
                                          const HookFactory& hooks = {}, int max_len = 0);

}  // namespace docmatch::matcher
