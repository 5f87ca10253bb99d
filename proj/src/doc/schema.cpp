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

#include "docmatch/doc/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "docmatch/error.hpp"
#include "json.hpp"

namespace docmatch::doc {

EntitySchema::EntitySchema(std::vector<EntityType> types) : types_(std::move(types)) {
  std::set<std::string> seen;
  for (const auto& t : types_) {
    if (t.id.empty()) throw SchemaError("entity type id must be non-empty");
    if (!seen.insert(t.id).second) throw SchemaError("duplicate entity type id '" + t.id + "'");
  }
}

std::optional<int> EntitySchema::find(const std::string& id) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].id == id) return static_cast<int>(i);
  }
  return std::nullopt;
}

int EntitySchema::index_of(const std::string& id) const {
  if (auto i = find(id)) return *i;
  throw SchemaError("unknown entity type '" + id + "'");
}

EntitySchema EntitySchema::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open schema file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("schema file " + path.string() + ": " + e.what());
  }
  if (!j.is_array()) throw SchemaError("schema file must hold a JSON list");
  std::vector<EntityType> types;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("type")) {
      throw SchemaError("schema entries need a \"type\" field");
    }
    EntityType t;
    t.id = item.at("type").get<std::string>();
    t.prompt_name = item.value("prompt_name", t.id);
    types.push_back(std::move(t));
  }
  return EntitySchema(std::move(types));
}

void EntitySchema::save(const std::filesystem::path& path) const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : types_) j.push_back({{"type", t.id}, {"prompt_name", t.prompt_name}});
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write schema file " + path.string());
  out << j.dump(2) << '\n';
}

TagSpace::TagSpace(const EntitySchema& schema) {
  tags_.reserve(static_cast<std::size_t>(2 * schema.size() + 1));
  tags_.emplace_back("O");
  for (const auto& t : schema.types()) {
    tags_.push_back("B-" + t.id);
    tags_.push_back("I-" + t.id);
    type_ids_.push_back(t.id);
  }
}

int TagSpace::type_index(const std::string& type_id) const {
  const auto it = std::find(type_ids_.begin(), type_ids_.end(), type_id);
  if (it == type_ids_.end()) throw SchemaError("entity type '" + type_id + "' is not in the schema");
  return static_cast<int>(it - type_ids_.begin());
}

TagSpace build_tag_space(const EntitySchema& schema) { return TagSpace(schema); }

}  // namespace docmatch::doc
