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
#include <string>
#include <vector>

#include "docmatch/doc/document.hpp"
#include "docmatch/doc/schema.hpp"
#include "docmatch/nn/model.hpp"
#include "docmatch/nn/tape.hpp"

namespace docmatch::matcher {

using nn::Model;
using nn::Tape;
using nn::Var;

// Pool layout for sequential matching: the document's tokens, then SEP, then EOS.
inline int sep_index(int n_words) { return n_words; }
inline int eos_index(int n_words) { return n_words + 1; }

// ---- tagging mode --------------------------------------------------------

// Runs the generator (non-causal) over the tag queries listed in `tag_rows`
// (all tags when empty) against `memory` and projects each output row. Row r
// of the result is the matcher vector for tag tag_rows[r], i.e. the result is
// V_r stored transposed. Throws ConfigError if more tags than max_dec_len.
template <typename T>
Var bio_matcher_vectors(Tape<T>& tape, Model& model, Var memory, std::span<const int> tag_rows = {});

// M = X_m V_r, with V_r given transposed (one row per tag). Throws ShapeError
// when the widths disagree.
template <typename T>
Var bio_similarity(Tape<T>& tape, Var x_m, Var vectors);

// Summed binary cross entropy over every entry of M. Every row of `labels`
// must hold exactly one 1 (LabelError otherwise).
template <typename T>
Var bio_loss(Tape<T>& tape, Var m, const nn::Matrix<T>& labels);

// Gold tag of every token. Throws LabelError on overlapping instances.
std::vector<int> bio_labels(const doc::Document& doc, const doc::TagSpace& tags);

template <typename T>
nn::Matrix<T> one_hot(const std::vector<int>& tags, int n_tags);

// ---- sequential mode -----------------------------------------------------

// Gold pointer sequence for one entity type: instances ordered by first token,
// separated by SEP and closed by EOS.
std::vector<int> seq_targets(const doc::Document& doc, const std::string& entity_type);

// [X_m; SEP; EOS]
template <typename T>
Var seq_pool(Tape<T>& tape, Model& model, Var x_m);

// Teacher-forced pointer cross entropy summed over steps. Step 0 reads the
// BOS query, step i reads the pool row matched at step i-1; each input also
// carries a learned step embedding. Throws LabelError when a target lies
// outside the pool.
template <typename T>
Var seq_loss(Tape<T>& tape, Model& model, Var pool, Var memory, std::span<const int> targets);

// Called with the step number and that step's pool logits before the argmax;
// may rewrite them. Lets tests and oracles steer decoding.
using LogitHook = std::function<void(int step, std::vector<double>& logits)>;

// Greedy decoding until EOS or max_len entries. Ties go to the lower index.
template <typename T>
std::vector<int> seq_generate(Tape<T>& tape, Model& model, Var pool, Var memory, int max_len,
                              const LogitHook& hook = {});

// Hook that forces `gold` step by step.
LogitHook gold_injection(std::vector<int> gold);

}  // namespace docmatch::matcher
