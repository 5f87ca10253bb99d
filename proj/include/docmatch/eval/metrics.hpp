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
#include <vector>

#include "docmatch/compositor/compositor.hpp"
#include "docmatch/doc/document.hpp"

namespace docmatch::eval {

using compositor::EntityPrediction;
// Predictions (or gold instances) per document.
using DocumentEntities = std::vector<std::vector<EntityPrediction>>;

struct Score {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  int true_positives = 0;
  int predicted = 0;
  int gold = 0;
  friend bool operator==(const Score&, const Score&) = default;
};

// P, R and F from counts; every ratio with a zero denominator is 0.
Score make_score(int true_positives, int predicted, int gold);

// Micro-averaged field F1. Within a document a prediction is correct when its
// (type, value) matches a gold instance not matched yet; strict mode also
// requires equal token indices. Throws ArgumentError when the document counts
// differ.
Score field_f1(const DocumentEntities& preds, const DocumentEntities& gold, bool strict = false);

// The same restricted to one entity type.
Score field_f1_for_type(const DocumentEntities& preds, const DocumentEntities& gold,
                        const std::string& type, bool strict = false);

// Token feed order permuted by a seed-determined permutation. Texts, boxes and
// instance token order are kept, so gold value strings are unchanged.
doc::Document shuffle_words(const doc::Document& doc, std::uint64_t seed);

// Seed used for `doc` in a shuffled evaluation run.
std::uint64_t shuffle_seed(std::uint64_t seed, const std::string& doc_id);

}  // namespace docmatch::eval
