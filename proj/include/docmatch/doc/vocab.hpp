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
#include <string>
#include <unordered_map>
#include <vector>

namespace docmatch::doc {

// Closed word vocabulary. Id 0 is reserved for unknown words.
class Vocabulary {
 public:
  static constexpr int kUnknown = 0;
  static inline const std::string kUnknownToken = "<unk>";

  Vocabulary();
  explicit Vocabulary(const std::vector<std::string>& words);

  int id(const std::string& word) const;
  const std::string& word(int id) const { return words_.at(id); }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace docmatch::doc
