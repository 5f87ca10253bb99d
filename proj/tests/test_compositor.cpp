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

#include <algorithm>
#include <numeric>
#include <tuple>
#include <string>
#include <vector>

#include "docmatch/compositor/compositor.hpp"
#include "docmatch/doc/synth.hpp"
#include "docmatch/error.hpp"
#include "docmatch/matcher/matcher.hpp"
#include "docmatch/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace docmatch;
using namespace docmatch::compositor;
using docmatch::testing::line_doc;
using nn::MatrixD;

namespace {

doc::TagSpace one_type() { return doc::TagSpace(doc::EntitySchema(std::vector<doc::EntityType>{{"t", "t"}})); }

constexpr int O = doc::TagSpace::kOutside;
const int B = doc::TagSpace::begin_tag(0);
const int I = doc::TagSpace::inside_tag(0);

std::vector<std::string> values(const std::vector<EntityPrediction>& preds) {
  std::vector<std::string> out;
  for (const auto& p : preds) out.push_back(p.value);
  return out;
}

MatrixD one_hot(const std::vector<int>& tags, int n) { return matcher::one_hot<double>(tags, n); }

// Re-feeds the document in order `perm` (new position i holds old token
// perm[i]) and remaps entity spans, keeping each instance's reading order.
doc::Document permuted(const doc::Document& d, const std::vector<int>& perm) {
  std::vector<int> where(perm.size());
  doc::Document out = d;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.tokens[i] = d.tokens[static_cast<std::size_t>(perm[i])];
    out.tokens[i].index = static_cast<int>(i);
    where[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
  }
  for (auto& e : out.entities) {
    for (auto& span : e.spans) {
      for (auto& k : span) k = where[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

std::vector<int> random_perm(Rng& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  rng.shuffle(p);
  return p;
}

std::vector<doc::Document> corpus(int n) {
  doc::SynthConfig c;
  c.count = n;
  return doc::synthesize(c, 21);
}

}  // namespace

TEST_CASE("argmax_tags: ties go to the lower index") {
  MatrixD m(3, 3);
  m << 0, 0, 0,  //
      1, 2, 2,   //
      -1, -3, -0.5;
  CHECK(argmax_tags(m) == std::vector<int>{0, 1, 2});
}

TEST_CASE("compose_bio: definitional examples") {
  const doc::TagSpace tags = one_type();
  const doc::Document d = line_doc(5);
  const auto preds = compose_bio(one_hot({O, B, I, O, B}, 3), d, tags);
  CHECK(values(preds) == std::vector<std::string>{"w1 w2", "w4"});
  CHECK(preds[0].token_indices == std::vector<int>{1, 2});
  CHECK(preds[0].type == "t");
  CHECK(preds[0].type_id == 0);

  CHECK(compose_bio(MatrixD::Zero(5, 3), d, tags).empty());
  CHECK(values(compose_bio_tags({I, I}, line_doc(2), tags)) == std::vector<std::string>{"w0 w1"});
  CHECK(values(compose_bio_tags({B, I, B, I, O}, d, tags)) == std::vector<std::string>{"w0 w1", "w2 w3"});
  CHECK_THROWS_AS(compose_bio(MatrixD::Zero(4, 3), d, tags), ShapeError);
  CHECK_THROWS_AS(compose_bio(MatrixD::Zero(5, 4), d, tags), ShapeError);
}

TEST_CASE("compose_bio: another type closes the open instance") {
  const doc::TagSpace tags(doc::EntitySchema(std::vector<doc::EntityType>{{"a", "a"}, {"b", "b"}}));
  const int ba = doc::TagSpace::begin_tag(0), ia = doc::TagSpace::inside_tag(0);
  const int ib = doc::TagSpace::inside_tag(1);
  const auto preds = compose_bio_tags({ba, ib, ia, O}, line_doc(4), tags);
  REQUIRE(preds.size() == 3);
  CHECK(preds[0].value == "w0");
  CHECK(preds[1].type == "b");
  CHECK(preds[1].value == "w1");
  CHECK(preds[2].value == "w2");
}

TEST_CASE("compose_seq: definitional examples") {
  const doc::TagSpace tags = one_type();
  const doc::Document d = line_doc(10);
  const int sep = matcher::sep_index(10), eos = matcher::eos_index(10);
  CHECK(values(compose_seq({5, 6, sep, 9, eos}, d, 0, tags)) == std::vector<std::string>{"w5 w6", "w9"});
  CHECK(compose_seq({eos}, d, 0, tags).empty());
  CHECK(values(compose_seq({5, sep, sep, 9, eos}, d, 0, tags)) == std::vector<std::string>{"w5", "w9"});
  CHECK(values(compose_seq({sep, 3, sep}, d, 0, tags)) == std::vector<std::string>{"w3"});
  // Generation order, not feed order; nothing after EOS.
  CHECK(values(compose_seq({7, 2, eos, 4}, d, 0, tags)) == std::vector<std::string>{"w7 w2"});
  CHECK_THROWS_AS(compose_seq({12}, d, 0, tags), ArgumentError);
  CHECK_THROWS_AS(compose_seq({-1}, d, 0, tags), ArgumentError);
}

TEST_CASE("ground: boxes follow indices") {
  const doc::Document d = line_doc(4);
  EntityPrediction p;
  p.type = "t";
  p.type_id = 0;
  p.token_indices = {1, 2};
  const EntityPrediction g = ground(p, d);
  CHECK(g.boxes == std::vector<doc::Box>{d.tokens[1].box, d.tokens[2].box});
  CHECK(g.value == "w1 w2");
  p.token_indices = {4};
  CHECK_THROWS_AS(ground(p, d), InternalError);

  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    EntityPrediction q;
    const auto n = rng.uniform_int(0, 6);
    for (int k = 0; k < n; ++k) q.token_indices.push_back(static_cast<int>(rng.uniform_int(0, 3)));
    CHECK(ground(q, d).boxes.size() == q.token_indices.size());
  }
}

TEST_CASE("prediction JSON round trip") {
  const doc::Document d = line_doc(6);
  EntityPrediction p;
  p.type = "t";
  p.type_id = 0;
  p.token_indices = {3, 1};
  p = ground(p, d);
  const nlohmann::json j = to_json(p);
  CHECK(j.at("value") == "w3 w1");
  CHECK(j.contains("type"));
  CHECK(j.at("boxes").size() == 2);
  const EntityPrediction back = prediction_from_json(j);
  CHECK(back.type == p.type);
  CHECK(back.value == p.value);
  CHECK(back.token_indices == p.token_indices);
  CHECK(back.boxes == p.boxes);
}

TEST_CASE("oracle round trips over a synthetic corpus") {
  const doc::TagSpace tags(doc::synthetic_schema());
  for (const auto& d : corpus(150)) {
    const auto gold = gold_entities(d, tags);
    const auto bio = compose_bio(one_hot(matcher::bio_labels(d, tags), tags.size()), d, tags);
    CHECK(bio.size() == gold.size());
    std::vector<EntityPrediction> seq;
    for (int t = 0; t < tags.num_types(); ++t) {
      for (auto& p : compose_seq(matcher::seq_targets(d, tags.type_id(t)), d, t, tags)) seq.push_back(p);
    }
    // compose_bio emits feed order; compare as per-type multisets of spans.
    const auto key = [](std::vector<EntityPrediction> v) {
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        return std::tie(a.type_id, a.token_indices) < std::tie(b.type_id, b.token_indices);
      });
      return v;
    };
    CHECK(key(bio) == key(gold));
    CHECK(seq == gold);
  }
}

TEST_CASE("sequential composition ignores feed order") {
  const doc::TagSpace tags(doc::synthetic_schema());
  Rng rng(3);
  for (const auto& d : corpus(40)) {
    const int n = d.size();
    std::vector<std::vector<int>> targets;
    std::vector<std::string> reference;
    for (int t = 0; t < tags.num_types(); ++t) {
      targets.push_back(matcher::seq_targets(d, tags.type_id(t)));
      for (const auto& v : values(compose_seq(targets.back(), d, t, tags))) reference.push_back(v);
    }
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<int> perm = random_perm(rng, n);
      std::vector<int> where(perm.size());
      for (std::size_t i = 0; i < perm.size(); ++i) where[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
      const doc::Document p = permuted(d, perm);
      std::vector<std::string> got;
      for (int t = 0; t < tags.num_types(); ++t) {
        std::vector<int> moved = targets[static_cast<std::size_t>(t)];
        for (auto& k : moved) k = k < n ? where[static_cast<std::size_t>(k)] : k;
        for (const auto& v : values(compose_seq(moved, p, t, tags))) got.push_back(v);
      }
      CHECK(got == reference);
    }
  }
}

TEST_CASE("tagging composition depends on feed order") {
  // "w1 w2" tagged B, I; feeding w2 before w1 turns the instance into two
  // fragments even though every token keeps its tag.
  const doc::TagSpace tags = one_type();
  const doc::Document d = line_doc(4, {{"t", {{1, 2}}}});
  const std::vector<int> gold_tags = matcher::bio_labels(d, tags);
  const std::vector<int> perm = {2, 0, 1, 3};
  const doc::Document p = permuted(d, perm);
  std::vector<int> carried;
  for (const int k : perm) carried.push_back(gold_tags[static_cast<std::size_t>(k)]);
  CHECK(values(compose_bio_tags(gold_tags, d, tags)) == std::vector<std::string>{"w1 w2"});
  CHECK(values(compose_bio_tags(carried, p, tags)) != std::vector<std::string>{"w1 w2"});
}
