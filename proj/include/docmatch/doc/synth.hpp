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
#include <string>
#include <vector>

#include "docmatch/doc/document.hpp"
#include "docmatch/doc/schema.hpp"
#include "docmatch/doc/vocab.hpp"

namespace docmatch::doc {

enum class Layout { HorizontalKV, VerticalKV, Table };

// Relative weights of the three layout families.
struct LayoutMix {
  double horizontal = 0.4;
  double vertical = 0.3;
  double table = 0.3;
};

struct SynthConfig {
  int count = 100;
  LayoutMix mix;
  int jitter = 2;     // max per-box offset in pixels
  int min_items = 2;  // line items per table document
  int max_items = 5;
  std::string id_prefix = "synth";
};

// Generates `config.count` documents. Deterministic in (config, seed). The
// layout family is encoded in the id as "<prefix>-<h|v|t>-<n>".
std::vector<Document> synthesize(const SynthConfig& config, std::uint64_t seed);

Layout layout_from_id(const std::string& doc_id);

// Entity types the generator annotates.
EntitySchema synthetic_schema();

// Every word the generator can emit.
Vocabulary synthetic_vocabulary();

}  // namespace docmatch::doc
