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

#include "docmatch/spatial/tasks.hpp"

#include <algorithm>
#include <string>

#include "docmatch/error.hpp"

namespace docmatch::spatial {

namespace {

void check_anchor(const doc::Document& doc, int anchor) {
  if (anchor < 0 || anchor >= doc.size()) {
    throw ArgumentError("anchor " + std::to_string(anchor) + " out of range for " +
                        std::to_string(doc.size()) + " tokens");
  }
}

struct Candidate {
  std::int64_t dist2;
  int index;
};

template <typename Pred>
std::vector<int> nearest(const doc::Document& doc, int anchor, int k, Pred accept) {
  check_anchor(doc, anchor);
  if (k < 0) throw ArgumentError("k must be non-negative");
  const auto& a = doc.tokens[static_cast<std::size_t>(anchor)].box;
  std::vector<Candidate> cands;
  for (const auto& t : doc.tokens) {
    if (t.index == anchor) continue;
    // Doubled centers keep the arithmetic exact.
    const std::int64_t dx = t.box.center2_x() - a.center2_x();
    const std::int64_t dy = t.box.center2_y() - a.center2_y();
    if (!accept(dx, dy)) continue;
    cands.push_back({dx * dx + dy * dy, t.index});
  }
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), cands.size());
  const auto less = [](const Candidate& x, const Candidate& y) {
    return x.dist2 != y.dist2 ? x.dist2 < y.dist2 : x.index < y.index;
  };
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(take), cands.end(),
                    less);
  std::vector<int> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(cands[i].index);
  return out;
}

}  // namespace

std::vector<int> mtf_targets(const doc::Document& doc, int i, int j) {
  if (i >= j) throw ArgumentError("MTF anchors need i < j");
  if (i < 0 || j >= doc.size()) throw ArgumentError("MTF anchors out of range");
  std::vector<int> out;
  for (int t = i + 1; t < j; ++t) out.push_back(t);
  return out;
}

bool in_direction(Direction direction, std::int64_t dx, std::int64_t dy) {
  const auto ax = dx < 0 ? -dx : dx;
  const auto ay = dy < 0 ? -dy : dy;
  switch (direction) {
    case Direction::Right:
      return dx > 0 && ax >= ay;
    case Direction::Left:
      return dx < 0 && ax >= ay;
    case Direction::Down:
      return dy > 0 && ay > ax;
    case Direction::Up:
      return dy < 0 && ay > ax;
    case Direction::None:
      break;
  }
  throw ArgumentError("search direction must be Left, Right, Up or Down");
}

std::vector<int> sod_targets(const doc::Document& doc, int anchor, Direction direction, int k) {
  if (direction == Direction::None) {
    throw ArgumentError("search direction must be Left, Right, Up or Down");
  }
  return nearest(doc, anchor, k,
                 [direction](std::int64_t dx, std::int64_t dy) { return in_direction(direction, dx, dy); });
}

std::vector<int> sad_targets(const doc::Document& doc, int anchor, int k) {
  return nearest(doc, anchor, k, [](std::int64_t, std::int64_t) { return true; });
}

std::vector<Instruction> sample_instructions(const doc::Document& doc, const SamplingParams& params,
                                             Rng& rng) {
  if (params.per_task < 1) throw ArgumentError("per_task must be at least 1");
  if (params.k_max < 1) throw ArgumentError("k_max must be at least 1");
  if (params.mtf_max_gap < 2) throw ArgumentError("MTF gap cap must be at least 2");
  const int n = doc.size();
  std::vector<Instruction> out;
  if (n == 0) return out;

  if (params.tasks.mtf) {
    // Pairs (i, j) with 2 <= j - i <= gap, drawn uniformly.
    const int max_gap = std::min(params.mtf_max_gap, n - 1);
    std::int64_t total = 0;
    for (int g = 2; g <= max_gap; ++g) total += n - g;
    for (int r = 0; r < params.per_task && total > 0; ++r) {
      std::int64_t pick = rng.uniform_int(0, total - 1);
      int gap = 2;
      while (pick >= n - gap) {
        pick -= n - gap;
        ++gap;
      }
      const int i = static_cast<int>(pick);
      Instruction ins;
      ins.task = Task::MatchToFill;
      ins.anchors = {i, i + gap};
      ins.targets = mtf_targets(doc, i, i + gap);
      out.push_back(std::move(ins));
    }
  }
  if (params.tasks.sod) {
    static constexpr Direction kDirs[4] = {Direction::Left, Direction::Right, Direction::Up,
                                           Direction::Down};
    for (int r = 0; r < params.per_task; ++r) {
      Instruction ins;
      ins.task = Task::SearchOneDirection;
      ins.anchors = {static_cast<int>(rng.uniform_int(0, n - 1))};
      ins.direction = kDirs[rng.uniform_int(0, 3)];
      ins.k = static_cast<int>(rng.uniform_int(1, params.k_max));
      ins.targets = sod_targets(doc, ins.anchors[0], ins.direction, ins.k);
      out.push_back(std::move(ins));
    }
  }
  if (params.tasks.sad) {
    for (int r = 0; r < params.per_task; ++r) {
      Instruction ins;
      ins.task = Task::SearchAllDirections;
      ins.anchors = {static_cast<int>(rng.uniform_int(0, n - 1))};
      ins.k = static_cast<int>(rng.uniform_int(1, params.k_max));
      ins.targets = sad_targets(doc, ins.anchors[0], ins.k);
      out.push_back(std::move(ins));
    }
  }
  return out;
}

}  // namespace docmatch::spatial
