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

#include "docmatch/doc/schema.hpp"
#include "docmatch/spatial/instruction.hpp"

namespace docmatch::nn {

// Structured prompt template. Every prompt has four slots:
//   Extract: task, entity type, pad, pad
//   MTF:     task, anchor i, anchor j, pad
//   SOD/SAD: task, direction, k bucket, anchor   (SAD uses direction None)
struct PromptSlot {
  enum class Kind { Task, EntityType, Direction, K, Anchor, Pad };
  Kind kind = Kind::Pad;
  int value = 0;
  friend bool operator==(const PromptSlot&, const PromptSlot&) = default;
};

inline constexpr int kPromptLength = 4;

struct Prompt {
  std::vector<PromptSlot> slots;
  friend bool operator==(const Prompt&, const Prompt&) = default;
};

Prompt extract_prompt(int type_index);
// Builds the prompt for an instruction; Extract instructions resolve their
// entity type through the schema.
Prompt make_prompt(const spatial::Instruction& instruction, const doc::EntitySchema& schema);

}  // namespace docmatch::nn
