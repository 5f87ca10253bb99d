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

#include "docmatch/spatial/instruction.hpp"

#include "docmatch/error.hpp"

namespace docmatch::spatial {

std::string to_string(Task task) {
  switch (task) {
    case Task::MatchToFill:
      return "MTF";
    case Task::SearchOneDirection:
      return "SOD";
    case Task::SearchAllDirections:
      return "SAD";
    case Task::Extract:
      return "EXTRACT";
  }
  return "?";
}

std::string to_string(Direction direction) {
  switch (direction) {
    case Direction::Left:
      return "Left";
    case Direction::Right:
      return "Right";
    case Direction::Up:
      return "Up";
    case Direction::Down:
      return "Down";
    case Direction::None:
      return "None";
  }
  return "?";
}

Task parse_task(const std::string& s) {
  for (Task t : {Task::MatchToFill, Task::SearchOneDirection, Task::SearchAllDirections,
                 Task::Extract}) {
    if (to_string(t) == s) return t;
  }
  throw ArgumentError("unknown task '" + s + "'");
}

Direction parse_direction(const std::string& s) {
  for (Direction d : {Direction::Left, Direction::Right, Direction::Up, Direction::Down,
                      Direction::None}) {
    if (to_string(d) == s) return d;
  }
  throw ArgumentError("unknown direction '" + s + "'");
}

nlohmann::json to_json(const Instruction& ins) {
  return {{"task", to_string(ins.task)},
          {"anchors", ins.anchors},
          {"direction", to_string(ins.direction)},
          {"k", ins.k},
          {"entity_type", ins.entity_type},
          {"targets", ins.targets}};
}

Instruction instruction_from_json(const nlohmann::json& j) {
  try {
    Instruction ins;
    ins.task = parse_task(j.at("task").get<std::string>());
    ins.anchors = j.at("anchors").get<std::vector<int>>();
    ins.direction = parse_direction(j.at("direction").get<std::string>());
    ins.k = j.at("k").get<int>();
    ins.entity_type = j.at("entity_type").get<std::string>();
    ins.targets = j.at("targets").get<std::vector<int>>();
    return ins;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instruction record: ") + e.what());
  }
}

std::string to_jsonl(const std::vector<Instruction>& instructions) {
  std::string out;
  for (const auto& ins : instructions) {
    out += to_json(ins).dump();
    out += '\n';
  }
  return out;
}

}  // namespace docmatch::spatial
