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

#include "docmatch/doc/document.hpp"

#include <numeric>
#include <string>
#include <vector>

#include "docmatch/error.hpp"
#include "docmatch/rng.hpp"

namespace docmatch::doc {

namespace {

// floor(v * 1000 / extent) for 0 <= v <= extent.
int scale(int v, int extent) {
  return static_cast<int>((static_cast<long long>(v) * kGridMax) / extent);
}

// Makes lo < hi, growing toward the far edge unless already there.
void widen(int& lo, int& hi, int extent) {
  if (hi > lo) return;
  if (hi < extent) {
    hi = lo + 1;
  } else {
    lo = hi - 1;
  }
}

}  // namespace

const EntityAnnotation* Document::find_entity(const std::string& type) const {
  for (const auto& e : entities) {
    if (e.type == type) return &e;
  }
  return nullptr;
}

std::string Document::join(const std::vector<int>& indices) const {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ' ';
    out += tokens.at(static_cast<std::size_t>(indices[i])).text;
  }
  return out;
}

Box normalize_box(const Box& raw, PageSize page) {
  if (page.width <= 0 || page.height <= 0) {
    throw ValidationError("page size must be positive, got " + std::to_string(page.width) + "x" +
                          std::to_string(page.height));
  }
  if (raw.x0 < 0 || raw.y0 < 0 || raw.x1 > page.width || raw.y1 > page.height) {
    throw ValidationError("box lies outside the page");
  }
  if (raw.x0 > raw.x1 || raw.y0 > raw.y1) {
    throw ValidationError("box is inverted");
  }
  Box px = raw;
  widen(px.x0, px.x1, page.width);
  widen(px.y0, px.y1, page.height);
  Box out{scale(px.x0, page.width), scale(px.y0, page.height), scale(px.x1, page.width),
          scale(px.y1, page.height)};
  widen(out.x0, out.x1, kGridMax);
  widen(out.y0, out.y1, kGridMax);
  return out;
}

Box normalize_token_box(const Box& raw, PageSize page, const std::string& doc_id, int index,
                        const std::string& text) {
  try {
    return normalize_box(raw, page);
  } catch (const ValidationError& e) {
    throw ValidationError("document '" + doc_id + "', token " + std::to_string(index) + " ('" +
                          text + "'): " + e.what());
  }
}

void validate(const Document& doc) {
  const std::string where = "document '" + doc.doc_id + "': ";
  const int n = doc.size();
  for (int i = 0; i < n; ++i) {
    const auto& t = doc.tokens[static_cast<std::size_t>(i)];
    if (t.index != i) {
      throw ValidationError(where + "token indices must be 0..N-1 in order, position " +
                            std::to_string(i) + " has index " + std::to_string(t.index));
    }
    if (t.text.empty()) {
      throw ValidationError(where + "token " + std::to_string(i) + " has empty text");
    }
    const Box& b = t.box;
    if (!(0 <= b.x0 && b.x0 < b.x1 && b.x1 <= kGridMax && 0 <= b.y0 && b.y0 < b.y1 &&
          b.y1 <= kGridMax)) {
      throw ValidationError(where + "token " + std::to_string(i) + " ('" + t.text +
                            "') has an invalid normalized box");
    }
  }
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (const auto& e : doc.entities) {
    if (e.type.empty()) throw ValidationError(where + "entity with empty type");
    for (const auto& span : e.spans) {
      if (span.empty()) {
        throw ValidationError(where + "entity '" + e.type + "' has an empty instance");
      }
      for (int idx : span) {
        if (idx < 0 || idx >= n) {
          throw ValidationError(where + "entity '" + e.type + "' references token " +
                                std::to_string(idx) + " out of range");
        }
        if (used[static_cast<std::size_t>(idx)]) {
          throw ValidationError(where + "token " + std::to_string(idx) +
                                " belongs to more than one entity instance");
        }
        used[static_cast<std::size_t>(idx)] = 1;
      }
    }
  }
}

void finalize(Document& doc) {
  for (auto& t : doc.tokens) {
    t.box = normalize_token_box(t.raw_box, doc.page, doc.doc_id, t.index, t.text);
  }
  validate(doc);
}

Document shuffled_feed(const Document& doc, std::uint64_t seed) {
  std::vector<int> to(static_cast<std::size_t>(doc.size()));  // old index -> new index
  std::iota(to.begin(), to.end(), 0);
  Rng rng(seed);
  rng.shuffle(to);
  Document out;
  out.doc_id = doc.doc_id;
  out.page = doc.page;
  out.tokens.resize(doc.tokens.size());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    auto t = doc.tokens[i];
    t.index = to[i];
    out.tokens[static_cast<std::size_t>(to[i])] = std::move(t);
  }
  out.entities = doc.entities;
  for (auto& e : out.entities) {
    for (auto& span : e.spans) {
      for (auto& i : span) i = to[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

}  // namespace docmatch::doc
