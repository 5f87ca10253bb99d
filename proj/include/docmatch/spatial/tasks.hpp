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
#include <vector>

#include "docmatch/doc/document.hpp"
#include "docmatch/rng.hpp"
#include "docmatch/spatial/instruction.hpp"

namespace docmatch::spatial {

// Indices strictly between i and j in feed order.
std::vector<int> mtf_targets(const doc::Document& doc, int i, int j);

// Cone membership of a center displacement. Horizontal wins |dx| == |dy|.
bool in_direction(Direction direction, std::int64_t dx, std::int64_t dy);

// k nearest tokens (Euclidean center distance, then lower index) whose
// displacement from the anchor lies in `direction`.
std::vector<int> sod_targets(const doc::Document& doc, int anchor, Direction direction, int k);

// k nearest tokens in any direction.
std::vector<int> sad_targets(const doc::Document& doc, int anchor, int k);

struct TaskToggles {
  bool mtf = true;
  bool sod = true;
  bool sad = true;

  bool any() const { return mtf || sod || sad; }
  friend bool operator==(const TaskToggles&, const TaskToggles&) = default;
};

struct SamplingParams {
  int per_task = 8;
  int mtf_max_gap = 10;  // j - i <= gap
  int k_max = 5;
  TaskToggles tasks;
};

// per_task instructions for each enabled task, MTF first, then SOD, then SAD.
// MTF is skipped when the document has no pair with 2 <= j - i.
std::vector<Instruction> sample_instructions(const doc::Document& doc, const SamplingParams& params,
                                             Rng& rng);

}  // namespace docmatch::spatial
