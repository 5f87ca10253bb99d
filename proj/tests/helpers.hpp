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
#include <utility>
#include <vector>

#include "docmatch/doc/document.hpp"

namespace docmatch::testing {

// Document from (text, pixel box) pairs on a 1000x1000 page, so pixel and
// grid coordinates coincide.
inline doc::Document make_doc(const std::vector<std::pair<std::string, doc::Box>>& words,
                              std::vector<doc::EntityAnnotation> entities = {},
                              std::string id = "test-doc") {
  doc::Document d;
  d.doc_id = std::move(id);
  d.page = {1000, 1000};
  int i = 0;
  for (const auto& [text, box] : words) {
    d.tokens.push_back({text, box, box, i++});
  }
  d.entities = std::move(entities);
  doc::finalize(d);
  return d;
}

// n tokens named w0..w{n-1} in raster order, 24 per line.
inline doc::Document line_doc(int n, std::vector<doc::EntityAnnotation> entities = {}) {
  std::vector<std::pair<std::string, doc::Box>> words;
  for (int i = 0; i < n; ++i) {
    const int x = 10 + 40 * (i % 24);
    const int y = 100 + 30 * (i / 24);
    words.push_back({"w" + std::to_string(i), {x, y, x + 30, y + 20}});
  }
  return make_doc(words, std::move(entities));
}

// Square token of side 2 centered at (x, y).
inline doc::Box at(int x, int y) { return {x - 1, y - 1, x + 1, y + 1}; }

}  // namespace docmatch::testing
