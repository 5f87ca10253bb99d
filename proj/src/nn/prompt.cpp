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

#include "docmatch/nn/prompt.hpp"

#include "docmatch/error.hpp"

namespace docmatch::nn {

namespace {

using Kind = PromptSlot::Kind;

PromptSlot slot(Kind kind, int value = 0) { return PromptSlot{kind, value}; }

PromptSlot task_slot(spatial::Task t) { return slot(Kind::Task, static_cast<int>(t)); }

}  // namespace

Prompt extract_prompt(int type_index) {
  return Prompt{{task_slot(spatial::Task::Extract), slot(Kind::EntityType, type_index),
                 slot(Kind::Pad), slot(Kind::Pad)}};
}

Prompt make_prompt(const spatial::Instruction& ins, const doc::EntitySchema& schema) {
  using spatial::Task;
  const auto need_anchors = [&ins](std::size_t n) {
    if (ins.anchors.size() != n) {
      throw ArgumentError(spatial::to_string(ins.task) + " prompt needs " + std::to_string(n) +
                          " anchor(s)");
    }
  };
  switch (ins.task) {
    case Task::Extract:
      return extract_prompt(schema.index_of(ins.entity_type));
    case Task::MatchToFill:
      need_anchors(2);
      return Prompt{{task_slot(ins.task), slot(Kind::Anchor, ins.anchors[0]),
                     slot(Kind::Anchor, ins.anchors[1]), slot(Kind::Pad)}};
    case Task::SearchOneDirection:
    case Task::SearchAllDirections:
      need_anchors(1);
      return Prompt{{task_slot(ins.task), slot(Kind::Direction, static_cast<int>(ins.direction)),
                     slot(Kind::K, ins.k), slot(Kind::Anchor, ins.anchors[0])}};
  }
  throw ArgumentError("unknown task");
}

}  // namespace docmatch::nn
