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

#include "docmatch/doc/document.hpp"
#include "docmatch/doc/schema.hpp"
#include "docmatch/nn/params.hpp"
#include "json.hpp"

namespace docmatch::compositor {

// One extracted entity instance with the boxes of the tokens it was built from.
struct EntityPrediction {
  std::string type;
  int type_id = -1;  // position in the schema
  std::string value;
  std::vector<int> token_indices;
  std::vector<doc::Box> boxes;
  friend bool operator==(const EntityPrediction&, const EntityPrediction&) = default;
};

// Row-wise argmax; ties go to the lower tag index, so O wins exact ties.
std::vector<int> argmax_tags(const nn::MatrixD& m);

// Scans tokens in feed order. B-t opens an instance, I-t extends an open
// instance of t or opens a new one, anything else closes.
std::vector<EntityPrediction> compose_bio_tags(const std::vector<int>& tags, const doc::Document& doc,
                                               const doc::TagSpace& tag_space);
// Throws ShapeError when m is not N_words x tag count.
std::vector<EntityPrediction> compose_bio(const nn::MatrixD& m, const doc::Document& doc,
                                          const doc::TagSpace& tag_space);

// Splits a generated pointer sequence on SEP, stops at EOS and drops empty
// segments. Tokens keep generation order. Throws ArgumentError on an index
// outside the pool.
std::vector<EntityPrediction> compose_seq(const std::vector<int>& matched, const doc::Document& doc,
                                          int type_id, const doc::TagSpace& tag_space);

// Sets value and boxes from token_indices. Throws InternalError when an index
// is out of range.
EntityPrediction ground(EntityPrediction pred, const doc::Document& doc);

// Gold instances in the same form, types in schema order, instances by first token.
std::vector<EntityPrediction> gold_entities(const doc::Document& doc, const doc::TagSpace& tag_space);

nlohmann::json to_json(const EntityPrediction& p);
EntityPrediction prediction_from_json(const nlohmann::json& j);

}  // namespace docmatch::compositor
