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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace docmatch::doc {

inline constexpr int kGridMax = 1000;
inline constexpr int kMinAdmittedTokens = 5;
inline constexpr int kMaxAdmittedTokens = 512;

// Axis-aligned rectangle. Pixel boxes live in page coordinates, normalized
// boxes on the 0..1000 grid with x0 < x1 and y0 < y1.
struct Box {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  // Doubled center, exact in integers.
  int center2_x() const { return x0 + x1; }
  int center2_y() const { return y0 + y1; }
  friend bool operator==(const Box&, const Box&) = default;
};

struct PageSize {
  int width = 0;
  int height = 0;
  friend bool operator==(const PageSize&, const PageSize&) = default;
};

struct WordToken {
  std::string text;
  Box raw_box;  // pixels, as stored in the dataset file
  Box box;      // normalized grid
  int index = 0;
  friend bool operator==(const WordToken&, const WordToken&) = default;
};

// One entity type with all of its instances in a document. Each instance is an
// ordered list of token indices.
struct EntityAnnotation {
  std::string type;
  std::vector<std::vector<int>> spans;
  friend bool operator==(const EntityAnnotation&, const EntityAnnotation&) = default;
};

struct Document {
  std::string doc_id;
  PageSize page;
  std::vector<WordToken> tokens;  // tokens[i].index == i
  std::vector<EntityAnnotation> entities;

  int size() const { return static_cast<int>(tokens.size()); }
  // Token count inside the window accepted for training.
  bool admitted() const { return size() >= kMinAdmittedTokens && size() <= kMaxAdmittedTokens; }
  const EntityAnnotation* find_entity(const std::string& type) const;
  // Space-joined texts of the listed tokens.
  std::string join(const std::vector<int>& indices) const;

  friend bool operator==(const Document&, const Document&) = default;
};

// Scales a pixel box onto the 0..1000 grid (floor). A zero-width or
// zero-height pixel box is widened by one pixel before scaling; if the scaled
// box is still degenerate it is widened by one grid unit.
Box normalize_box(const Box& raw, PageSize page);

// Same as normalize_box but reports the offending token on failure.
Box normalize_token_box(const Box& raw, PageSize page, const std::string& doc_id, int index,
                        const std::string& text);

// Checks all Document invariants; throws ValidationError naming the problem.
void validate(const Document& doc);

// Rebuilds normalized boxes from raw boxes and validates.
void finalize(Document& doc);

// Token feed order permuted by a seed-determined permutation, entity spans
// re-indexed through it. Texts, boxes and instance token order are kept.
Document shuffled_feed(const Document& doc, std::uint64_t seed);

}  // namespace docmatch::doc
