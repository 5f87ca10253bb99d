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
#include <vector>

#include "docmatch/doc/document.hpp"

namespace docmatch::train {

struct FewShotEpisode {
  int shots = 0;
  int fold = 0;
  std::vector<int> indices;  // into the pool, with repeats allowed
  std::vector<std::string> doc_ids;
};

// `folds` episodes of n documents drawn with replacement. Fold f depends only
// on (seed, n, f). Throws ArgumentError for n <= 0, folds <= 0 or an empty pool.
std::vector<FewShotEpisode> sample_episodes(const std::vector<doc::Document>& pool, int n, int folds,
                                            std::uint64_t seed);

std::vector<doc::Document> episode_documents(const std::vector<doc::Document>& pool,
                                             const FewShotEpisode& episode);

}  // namespace docmatch::train
