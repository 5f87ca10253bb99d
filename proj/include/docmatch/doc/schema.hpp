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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace docmatch::doc {

struct EntityType {
  std::string id;
  std::string prompt_name;
};

class EntitySchema {
 public:
  EntitySchema() = default;
  // Throws SchemaError on duplicate ids.
  explicit EntitySchema(std::vector<EntityType> types);

  const std::vector<EntityType>& types() const { return types_; }
  int size() const { return static_cast<int>(types_.size()); }
  std::optional<int> find(const std::string& id) const;
  // Throws SchemaError for unknown ids.
  int index_of(const std::string& id) const;

  static EntitySchema load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<EntityType> types_;
};

// BIO tag set: O first, then (B-t, I-t) per schema type in schema order.
class TagSpace {
 public:
  static constexpr int kOutside = 0;

  explicit TagSpace(const EntitySchema& schema);

  int size() const { return static_cast<int>(tags_.size()); }
  const std::vector<std::string>& tags() const { return tags_; }
  const std::string& name(int tag) const { return tags_.at(tag); }
  int num_types() const { return (size() - 1) / 2; }

  static int begin_tag(int type) { return 1 + 2 * type; }
  static int inside_tag(int type) { return 2 + 2 * type; }
  // Type position for a B/I tag, -1 for O.
  static int type_of(int tag) { return tag == kOutside ? -1 : (tag - 1) / 2; }
  static bool is_begin(int tag) { return tag != kOutside && (tag - 1) % 2 == 0; }
  static bool is_inside(int tag) { return tag != kOutside && (tag - 1) % 2 == 1; }

  const std::string& type_id(int type) const { return type_ids_.at(type); }
  // Throws SchemaError for a type outside the schema.
  int type_index(const std::string& type_id) const;

 private:
  std::vector<std::string> tags_;
  std::vector<std::string> type_ids_;
};

TagSpace build_tag_space(const EntitySchema& schema);

}  // namespace docmatch::doc
