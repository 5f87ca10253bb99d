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

#include "docmatch/matcher/matcher.hpp"

#include <algorithm>
#include <numeric>

#include "docmatch/error.hpp"
#include "docmatch/nn/forward.hpp"

namespace docmatch::matcher {

template <typename T>
Var bio_matcher_vectors(Tape<T>& tape, Model& model, Var memory, std::span<const int> tag_rows) {
  Var queries = tape.param(model.p("generator.tag_queries"));
  const int n = tag_rows.empty() ? tape.rows(queries) : static_cast<int>(tag_rows.size());
  if (n > model.config().max_dec_len) {
    throw ConfigError("tag space of " + std::to_string(n) + " exceeds max_dec_len " +
                      std::to_string(model.config().max_dec_len));
  }
  if (!tag_rows.empty()) queries = tape.select_rows(queries, tag_rows);
  const Var h = nn::decoder_forward(tape, model, queries, memory, false);
  return nn::linear(tape, model, "matcher.proj", h);
}

template <typename T>
Var bio_similarity(Tape<T>& tape, Var x_m, Var vectors) {
  if (tape.cols(x_m) != tape.cols(vectors)) {
    throw ShapeError("similarity: token width " + std::to_string(tape.cols(x_m)) +
                     " vs matcher width " + std::to_string(tape.cols(vectors)));
  }
  return tape.matmul_nt(x_m, vectors);
}

template <typename T>
Var bio_loss(Tape<T>& tape, Var m, const nn::Matrix<T>& labels) {
  for (Eigen::Index r = 0; r < labels.rows(); ++r) {
    int ones = 0;
    for (Eigen::Index c = 0; c < labels.cols(); ++c) {
      const T y = labels(r, c);
      if (y == T(1)) {
        ++ones;
      } else if (y != T(0)) {
        throw LabelError("label row " + std::to_string(r) + " is not binary");
      }
    }
    if (ones != 1) {
      throw LabelError("label row " + std::to_string(r) + " has " + std::to_string(ones) +
                       " active tags, expected exactly one");
    }
  }
  return tape.bce_with_logits_sum(m, labels);
}

std::vector<int> bio_labels(const doc::Document& doc, const doc::TagSpace& tags) {
  std::vector<int> out(static_cast<std::size_t>(doc.size()), doc::TagSpace::kOutside);
  std::vector<char> taken(out.size(), 0);
  for (const auto& e : doc.entities) {
    const int type = tags.type_index(e.type);
    for (const auto& span : e.spans) {
      for (std::size_t k = 0; k < span.size(); ++k) {
        const int t = span[k];
        if (t < 0 || t >= doc.size()) {
          throw LabelError("document '" + doc.doc_id + "': span token " + std::to_string(t) +
                           " out of range");
        }
        if (taken[static_cast<std::size_t>(t)]) {
          throw LabelError("document '" + doc.doc_id + "': token " + std::to_string(t) +
                           " belongs to two entity instances");
        }
        taken[static_cast<std::size_t>(t)] = 1;
        out[static_cast<std::size_t>(t)] =
            k == 0 ? doc::TagSpace::begin_tag(type) : doc::TagSpace::inside_tag(type);
      }
    }
  }
  return out;
}

template <typename T>
nn::Matrix<T> one_hot(const std::vector<int>& tags, int n_tags) {
  nn::Matrix<T> y = nn::Matrix<T>::Zero(static_cast<Eigen::Index>(tags.size()), n_tags);
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] < 0 || tags[i] >= n_tags) throw LabelError("tag " + std::to_string(tags[i]) + " out of range");
    y(static_cast<Eigen::Index>(i), tags[i]) = T(1);
  }
  return y;
}

std::vector<int> seq_targets(const doc::Document& doc, const std::string& entity_type) {
  const int n = doc.size();
  std::vector<int> out;
  if (const auto* e = doc.find_entity(entity_type)) {
    std::vector<const std::vector<int>*> spans;
    for (const auto& s : e->spans) {
      if (!s.empty()) spans.push_back(&s);
    }
    std::stable_sort(spans.begin(), spans.end(),
                     [](const auto* a, const auto* b) { return a->front() < b->front(); });
    for (std::size_t i = 0; i < spans.size(); ++i) {
      if (i > 0) out.push_back(sep_index(n));
      out.insert(out.end(), spans[i]->begin(), spans[i]->end());
    }
  }
  out.push_back(eos_index(n));
  return out;
}

template <typename T>
Var seq_pool(Tape<T>& tape, Model& model, Var x_m) {
  const Var parts[3] = {x_m, tape.param(model.p("matcher.sep")), tape.param(model.p("matcher.eos"))};
  return tape.concat_rows(parts);
}

namespace {

template <typename T>
Var step_inputs(Tape<T>& tape, Model& model, Var pool, std::span<const int> previous) {
  const int steps = static_cast<int>(previous.size()) + 1;
  if (steps > model.config().max_dec_len) {
    throw ArgumentError("sequence of " + std::to_string(steps) + " steps exceeds max_dec_len " +
                        std::to_string(model.config().max_dec_len));
  }
  std::vector<int> positions(static_cast<std::size_t>(steps));
  std::iota(positions.begin(), positions.end(), 0);
  Var x = tape.param(model.p("generator.bos"));
  if (!previous.empty()) {
    const Var parts[2] = {x, tape.select_rows(pool, previous)};
    x = tape.concat_rows(parts);
  }
  return tape.add(x, tape.embedding(model.p("generator.step"), positions));
}

}  // namespace

template <typename T>
Var seq_loss(Tape<T>& tape, Model& model, Var pool, Var memory, std::span<const int> targets) {
  if (targets.empty()) throw LabelError("empty target sequence");
  const int pool_size = tape.rows(pool);
  for (const int t : targets) {
    if (t < 0 || t >= pool_size) {
      throw LabelError("target " + std::to_string(t) + " outside pool of " + std::to_string(pool_size));
    }
  }
  const Var x = step_inputs(tape, model, pool, targets.first(targets.size() - 1));
  const Var h = nn::decoder_forward(tape, model, x, memory, true);
  const Var v = nn::linear(tape, model, "matcher.proj", h);
  return tape.softmax_cross_entropy_sum(tape.matmul_nt(v, pool), targets);
}

template <typename T>
std::vector<int> seq_generate(Tape<T>& tape, Model& model, Var pool, Var memory, int max_len,
                              const LogitHook& hook) {
  if (max_len < 1 || max_len > model.config().max_dec_len) {
    throw ArgumentError("max_len must lie in [1, max_dec_len]");
  }
  const int eos = tape.rows(pool) - 1;
  std::vector<int> out;
  std::vector<double> logits;
  while (static_cast<int>(out.size()) < max_len) {
    const Var x = step_inputs(tape, model, pool, out);
    const Var h = nn::decoder_forward(tape, model, x, memory, true);
    const Var last = tape.slice_rows(h, tape.rows(h) - 1, 1);
    const auto& z = tape.value(tape.matmul_nt(nn::linear(tape, model, "matcher.proj", last), pool));
    logits.assign(z.data(), z.data() + z.size());
    if (hook) hook(static_cast<int>(out.size()), logits);
    const auto best = std::max_element(logits.begin(), logits.end());
    const int pick = static_cast<int>(best - logits.begin());
    out.push_back(pick);
    if (pick == eos) break;
  }
  return out;
}

LogitHook gold_injection(std::vector<int> gold) {
  return [gold = std::move(gold)](int step, std::vector<double>& logits) {
    if (step >= static_cast<int>(gold.size())) return;
    std::fill(logits.begin(), logits.end(), -1e9);
    logits[static_cast<std::size_t>(gold[static_cast<std::size_t>(step)])] = 1e9;
  };
}

#define DOCMATCH_INSTANTIATE(T)                                                                 \
  template Var bio_matcher_vectors<T>(Tape<T>&, Model&, Var, std::span<const int>);             \
  template Var bio_similarity<T>(Tape<T>&, Var, Var);                                           \
  template Var bio_loss<T>(Tape<T>&, Var, const nn::Matrix<T>&);                                \
  template nn::Matrix<T> one_hot<T>(const std::vector<int>&, int);                              \
  template Var seq_pool<T>(Tape<T>&, Model&, Var);                                              \
  template Var seq_loss<T>(Tape<T>&, Model&, Var, Var, std::span<const int>);                   \
  template std::vector<int> seq_generate<T>(Tape<T>&, Model&, Var, Var, int, const LogitHook&);

DOCMATCH_INSTANTIATE(float)
DOCMATCH_INSTANTIATE(double)
#undef DOCMATCH_INSTANTIATE

}  // namespace docmatch::matcher
