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

#include "docmatch/doc/vocab.hpp"

#include <fstream>

#include "docmatch/error.hpp"

namespace docmatch::doc {

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(const std::vector<std::string>& words) {
  words_.push_back(kUnknownToken);
  ids_.emplace(kUnknownToken, kUnknown);
  for (const auto& w : words) {
    if (ids_.emplace(w, static_cast<int>(words_.size())).second) words_.push_back(w);
  }
}

int Vocabulary::id(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? kUnknown : it->second;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open vocabulary file " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line != kUnknownToken) words.push_back(line);
  }
  return Vocabulary(words);
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write vocabulary file " + path.string());
  for (const auto& w : words_) out << w << '\n';
}

}  // namespace docmatch::doc
