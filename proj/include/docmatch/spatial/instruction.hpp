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

#include "json.hpp"

namespace docmatch::spatial {

enum class Task { MatchToFill, SearchOneDirection, SearchAllDirections, Extract };

// Screen coordinates: y grows downward, so Up means smaller y.
enum class Direction { Left, Right, Up, Down, None };

inline constexpr int kNumTasks = 4;
inline constexpr int kNumDirections = 5;

// One prompt with its gold targets. For spatial tasks the targets are token
// indices; for Extract they are matching-pool indices (tokens, then SEP, EOS).
struct Instruction {
  Task task = Task::Extract;
  std::vector<int> anchors;
  Direction direction = Direction::None;
  int k = 0;
  std::string entity_type;
  std::vector<int> targets;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

std::string to_string(Task task);
std::string to_string(Direction direction);
Task parse_task(const std::string& s);
Direction parse_direction(const std::string& s);

nlohmann::json to_json(const Instruction& ins);
Instruction instruction_from_json(const nlohmann::json& j);

std::string to_jsonl(const std::vector<Instruction>& instructions);

}  // namespace docmatch::spatial
