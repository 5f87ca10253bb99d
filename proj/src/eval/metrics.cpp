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

#include "docmatch/eval/metrics.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "docmatch/error.hpp"
#include "docmatch/rng.hpp"

namespace docmatch::eval {

Score make_score(int tp, int predicted, int gold) {
  Score s;
  s.true_positives = tp;
  s.predicted = predicted;
  s.gold = gold;
  s.precision = predicted > 0 ? static_cast<double>(tp) / predicted : 0.0;
  s.recall = gold > 0 ? static_cast<double>(tp) / gold : 0.0;
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

namespace {

using Key = std::tuple<std::string, std::string, std::vector<int>>;

Key key_of(const EntityPrediction& p, bool strict) {
  return {p.type, p.value, strict ? p.token_indices : std::vector<int>{}};
}

Score count(const DocumentEntities& preds, const DocumentEntities& gold, bool strict,
            const std::string* only_type) {
  if (preds.size() != gold.size()) {
    throw ArgumentError("field F1: " + std::to_string(preds.size()) + " prediction lists for " +
                        std::to_string(gold.size()) + " gold documents");
  }
  int tp = 0, n_pred = 0, n_gold = 0;
  for (std::size_t d = 0; d < gold.size(); ++d) {
    std::map<Key, int> remaining;
    for (const auto& g : gold[d]) {
      if (only_type && g.type != *only_type) continue;
      ++remaining[key_of(g, strict)];
      ++n_gold;
    }
    for (const auto& p : preds[d]) {
      if (only_type && p.type != *only_type) continue;
      ++n_pred;
      auto it = remaining.find(key_of(p, strict));
      if (it != remaining.end() && it->second > 0) {
        --it->second;
        ++tp;
      }
    }
  }
  return make_score(tp, n_pred, n_gold);
}

}  // namespace

Score field_f1(const DocumentEntities& preds, const DocumentEntities& gold, bool strict) {
  return count(preds, gold, strict, nullptr);
}

Score field_f1_for_type(const DocumentEntities& preds, const DocumentEntities& gold,
                        const std::string& type, bool strict) {
  return count(preds, gold, strict, &type);
}

doc::Document shuffle_words(const doc::Document& doc, std::uint64_t seed) {
  return doc::shuffled_feed(doc, seed);
}

std::uint64_t shuffle_seed(std::uint64_t seed, const std::string& doc_id) {
  return seed_from(seed, doc_id);
}

}  // namespace docmatch::eval
