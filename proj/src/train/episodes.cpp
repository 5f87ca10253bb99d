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

#include "docmatch/train/episodes.hpp"

#include "docmatch/error.hpp"
#include "docmatch/rng.hpp"

namespace docmatch::train {

std::vector<FewShotEpisode> sample_episodes(const std::vector<doc::Document>& pool, int n, int folds,
                                            std::uint64_t seed) {
  if (n <= 0) throw ArgumentError("episode size must be positive");
  if (folds <= 0) throw ArgumentError("fold count must be positive");
  if (pool.empty()) throw ArgumentError("episode pool is empty");
  std::vector<FewShotEpisode> out;
  for (int f = 0; f < folds; ++f) {
    Rng rng(mix_seed(mix_seed(seed, static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(f)));
    FewShotEpisode e;
    e.shots = n;
    e.fold = f;
    for (int i = 0; i < n; ++i) {
      const int idx = static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
      e.indices.push_back(idx);
      e.doc_ids.push_back(pool[static_cast<std::size_t>(idx)].doc_id);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<doc::Document> episode_documents(const std::vector<doc::Document>& pool,
                                             const FewShotEpisode& episode) {
  std::vector<doc::Document> out;
  for (const int i : episode.indices) out.push_back(pool.at(static_cast<std::size_t>(i)));
  return out;
}

}  // namespace docmatch::train
