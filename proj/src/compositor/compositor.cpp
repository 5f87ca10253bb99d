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

#include "docmatch/compositor/compositor.hpp"

#include <algorithm>

#include "docmatch/error.hpp"

namespace docmatch::compositor {

std::vector<int> argmax_tags(const nn::MatrixD& m) {
  std::vector<int> out(static_cast<std::size_t>(m.rows()), doc::TagSpace::kOutside);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    int best = 0;
    for (Eigen::Index c = 1; c < m.cols(); ++c) {
      if (m(r, c) > m(r, best)) best = static_cast<int>(c);
    }
    out[static_cast<std::size_t>(r)] = best;
  }
  return out;
}

std::vector<EntityPrediction> compose_bio_tags(const std::vector<int>& tags, const doc::Document& doc,
                                               const doc::TagSpace& tag_space) {
  if (static_cast<int>(tags.size()) != doc.size()) {
    throw ShapeError("tag sequence length " + std::to_string(tags.size()) + " vs " +
                     std::to_string(doc.size()) + " tokens");
  }
  std::vector<EntityPrediction> out;
  int open = -1;  // type of the instance at out.back(), -1 when closed
  for (int i = 0; i < doc.size(); ++i) {
    const int tag = tags[static_cast<std::size_t>(i)];
    if (tag < 0 || tag >= tag_space.size()) throw ShapeError("tag " + std::to_string(tag) + " out of range");
    const int type = doc::TagSpace::type_of(tag);
    if (type < 0) {
      open = -1;
      continue;
    }
    if (doc::TagSpace::is_inside(tag) && open == type) {
      out.back().token_indices.push_back(i);
      continue;
    }
    EntityPrediction p;
    p.type = tag_space.type_id(type);
    p.type_id = type;
    p.token_indices.push_back(i);
    out.push_back(std::move(p));
    open = type;
  }
  for (auto& p : out) p = ground(std::move(p), doc);
  return out;
}

std::vector<EntityPrediction> compose_bio(const nn::MatrixD& m, const doc::Document& doc,
                                          const doc::TagSpace& tag_space) {
  if (m.rows() != doc.size() || m.cols() != tag_space.size()) {
    throw ShapeError("similarity matrix " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " vs " + std::to_string(doc.size()) + " tokens and " +
                     std::to_string(tag_space.size()) + " tags");
  }
  return compose_bio_tags(argmax_tags(m), doc, tag_space);
}

std::vector<EntityPrediction> compose_seq(const std::vector<int>& matched, const doc::Document& doc,
                                          int type_id, const doc::TagSpace& tag_space) {
  const int n = doc.size();
  std::vector<EntityPrediction> out;
  std::vector<int> segment;
  const auto flush = [&] {
    if (segment.empty()) return;
    EntityPrediction p;
    p.type = tag_space.type_id(type_id);
    p.type_id = type_id;
    p.token_indices = std::move(segment);
    segment.clear();
    out.push_back(ground(std::move(p), doc));
  };
  for (const int idx : matched) {
    if (idx < 0 || idx > n + 1) {
      throw ArgumentError("pointer " + std::to_string(idx) + " outside pool of " + std::to_string(n + 2));
    }
    if (idx == n + 1) break;
    if (idx == n) {
      flush();
    } else {
      segment.push_back(idx);
    }
  }
  flush();
  return out;
}

EntityPrediction ground(EntityPrediction pred, const doc::Document& doc) {
  pred.boxes.clear();
  for (const int i : pred.token_indices) {
    if (i < 0 || i >= doc.size()) {
      throw InternalError("prediction token " + std::to_string(i) + " outside document '" +
                          doc.doc_id + "'");
    }
    pred.boxes.push_back(doc.tokens[static_cast<std::size_t>(i)].box);
  }
  pred.value = doc.join(pred.token_indices);
  return pred;
}

std::vector<EntityPrediction> gold_entities(const doc::Document& doc, const doc::TagSpace& tag_space) {
  std::vector<EntityPrediction> out;
  for (int t = 0; t < tag_space.num_types(); ++t) {
    const auto* e = doc.find_entity(tag_space.type_id(t));
    if (e == nullptr) continue;
    std::vector<const std::vector<int>*> spans;
    for (const auto& s : e->spans) {
      if (!s.empty()) spans.push_back(&s);
    }
    std::stable_sort(spans.begin(), spans.end(),
                     [](const auto* a, const auto* b) { return a->front() < b->front(); });
    for (const auto* s : spans) {
      EntityPrediction p;
      p.type = e->type;
      p.type_id = t;
      p.token_indices = *s;
      out.push_back(ground(std::move(p), doc));
    }
  }
  return out;
}

nlohmann::json to_json(const EntityPrediction& p) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : p.boxes) boxes.push_back({b.x0, b.y0, b.x1, b.y1});
  return {{"type", p.type}, {"value", p.value}, {"token_indices", p.token_indices}, {"boxes", boxes}};
}

EntityPrediction prediction_from_json(const nlohmann::json& j) {
  try {
    EntityPrediction p;
    p.type = j.at("type").get<std::string>();
    p.value = j.at("value").get<std::string>();
    p.token_indices = j.at("token_indices").get<std::vector<int>>();
    for (const auto& b : j.at("boxes")) {
      const auto v = b.get<std::vector<int>>();
      if (v.size() != 4) throw ParseError("box needs four coordinates");
      p.boxes.push_back({v[0], v[1], v[2], v[3]});
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("prediction: ") + e.what());
  }
}

}  // namespace docmatch::compositor
