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

// Acceptance checks. Each criterion prints one PASS/FAIL line with the
// measured value; the exit status is non-zero when any selected criterion
// fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "CLI11.hpp"
#include "docmatch/cli.hpp"
#include "docmatch/compositor/compositor.hpp"
#include "docmatch/doc/synth.hpp"
#include "docmatch/eval/evaluate.hpp"
#include "docmatch/matcher/matcher.hpp"
#include "docmatch/matcher/pipeline.hpp"
#include "docmatch/nn/grad_check.hpp"
#include "docmatch/rng.hpp"
#include "docmatch/spatial/tasks.hpp"
#include "docmatch/train/checkpoint.hpp"
#include "docmatch/train/episodes.hpp"
#include "docmatch/train/trainer.hpp"

using namespace docmatch;
namespace fs = std::filesystem;
using nn::MatrixD;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("docmatch_accept_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::vector<doc::Document> synth(int n, std::uint64_t seed, const std::string& prefix) {
  doc::SynthConfig c;
  c.count = n;
  c.id_prefix = prefix;
  return doc::synthesize(c, seed);
}

// Random page of n tokens on a coarse grid so shared centers and distance
// ties are common.
doc::Document random_layout(Rng& rng, int n, const std::string& id) {
  doc::Document d;
  d.doc_id = id;
  d.page = {1000, 1000};
  for (int i = 0; i < n; ++i) {
    const int x0 = static_cast<int>(rng.uniform_int(0, 45)) * 20;
    const int y0 = static_cast<int>(rng.uniform_int(0, 45)) * 20;
    const int w = static_cast<int>(rng.uniform_int(1, 8)) * 10;
    const int h = static_cast<int>(rng.uniform_int(1, 4)) * 10;
    const doc::Box b{x0, y0, std::min(1000, x0 + w), std::min(1000, y0 + h)};
    d.tokens.push_back({"w" + std::to_string(rng.uniform_int(0, 39)), b, b, i});
  }
  doc::finalize(d);
  return d;
}

// ---- 1 --------------------------------------------------------------------

// Brute force over every token: float centers, explicit cone predicates,
// full distance list, stable sort.
std::vector<int> brute_force(const doc::Document& d, int anchor, spatial::Direction dir, int k) {
  using spatial::Direction;
  const auto center = [&](int i) {
    const auto& b = d.tokens[static_cast<std::size_t>(i)].box;
    return std::pair<double, double>{(b.x0 + b.x1) / 2.0, (b.y0 + b.y1) / 2.0};
  };
  const auto [ax, ay] = center(anchor);
  std::vector<std::pair<double, int>> all;
  for (int i = 0; i < d.size(); ++i) {
    if (i == anchor) continue;
    const auto [x, y] = center(i);
    const double dx = x - ax, dy = y - ay;
    bool ok = true;
    if (dir == Direction::Right) ok = dx > 0 && std::fabs(dx) >= std::fabs(dy);
    if (dir == Direction::Left) ok = dx < 0 && std::fabs(dx) >= std::fabs(dy);
    if (dir == Direction::Down) ok = dy > 0 && std::fabs(dy) > std::fabs(dx);
    if (dir == Direction::Up) ok = dy < 0 && std::fabs(dy) > std::fabs(dx);
    // Squared distance: exact for half-integer centers, unlike hypot, whose
    // rounding can split true ties.
    if (ok) all.push_back({dx * dx + dy * dy, i});
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> out;
  for (int i = 0; i < k && i < static_cast<int>(all.size()); ++i) out.push_back(all[static_cast<std::size_t>(i)].second);
  return out;
}

Outcome geometric_oracle() {
  using spatial::Direction;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  long queries = 0, mismatches = 0;
  for (int doc_i = 0; doc_i < 1000; ++doc_i) {
    const auto d = random_layout(rng, static_cast<int>(rng.uniform_int(1, 200)), "geo-" + std::to_string(doc_i));
    for (int a = 0; a < d.size(); ++a) {
      for (const int k : {1, 3, 5, 10}) {
        for (const auto dir : {Direction::Left, Direction::Right, Direction::Up, Direction::Down}) {
          ++queries;
          if (spatial::sod_targets(d, a, dir, k) != brute_force(d, a, dir, k)) ++mismatches;
        }
        ++queries;
        if (spatial::sad_targets(d, a, k) != brute_force(d, a, Direction::None, k)) ++mismatches;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {mismatches == 0 && secs < 120.0,
          std::to_string(queries) + " queries, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.1f s (limit 120 s)", secs)};
}

// ---- 2 --------------------------------------------------------------------

doc::EntitySchema two_types() { return doc::EntitySchema(std::vector<doc::EntityType>{{"t0", "t0"}, {"t1", "t1"}}); }

doc::Vocabulary forty_words() {
  std::vector<std::string> w;
  for (int i = 0; i < 40; ++i) w.push_back("w" + std::to_string(i));
  return doc::Vocabulary(w);
}

// Ten tokens with up to three disjoint instances over two types.
doc::Document random_labelled(Rng& rng, int id) {
  doc::Document d = random_layout(rng, 10, "grad-" + std::to_string(id));
  std::vector<int> free(10);
  std::iota(free.begin(), free.end(), 0);
  rng.shuffle(free);
  std::size_t used = 0;
  const int instances = static_cast<int>(rng.uniform_int(1, 3));
  for (int i = 0; i < instances; ++i) {
    const auto len = static_cast<std::size_t>(rng.uniform_int(1, 3));
    std::vector<int> span(free.begin() + static_cast<long>(used), free.begin() + static_cast<long>(used + len));
    used += len;
    std::sort(span.begin(), span.end());
    const std::string type = rng.uniform_int(0, 1) ? "t1" : "t0";
    auto it = std::find_if(d.entities.begin(), d.entities.end(), [&](const auto& e) { return e.type == type; });
    if (it == d.entities.end()) {
      d.entities.push_back({type, {span}});
    } else {
      it->spans.push_back(span);
    }
  }
  doc::validate(d);
  return d;
}

Outcome gradient_fidelity() {
  const auto t0 = std::chrono::steady_clock::now();
  nn::ModelConfig c;
  c.d = 16;
  c.heads = 2;
  c.enc_layers = 1;
  c.dec_layers = 1;
  c.res_layers = 1;
  c.ffn_mult = 2;
  c.n_queries = 3;
  c.resampler = nn::ResamplerArm::Par;
  nn::GradCheckOptions opt;
  opt.eps = 1e-4;
  opt.samples = 40;
  Rng rng(2002);
  double worst = 0;
  std::string where;
  for (int i = 0; i < 20; ++i) {
    const auto d = random_labelled(rng, i);
    nn::Model m(c, forty_words(), two_types(), 100 + static_cast<std::uint64_t>(i));
    opt.seed = static_cast<std::uint64_t>(i);
    const nn::LossBuilder tagging = [&](nn::Tape<double>& t) { return matcher::bio_document_loss(t, m, d); };
    const nn::LossBuilder pointer = [&](nn::Tape<double>& t) {
      const auto enc = matcher::encode_document(t, m, d);
      const nn::Var parts[2] = {matcher::seq_type_loss(t, m, enc, d, 0), matcher::seq_type_loss(t, m, enc, d, 1)};
      return t.sum_scalars(parts);
    };
    for (const auto* loss : {&tagging, &pointer}) {
      const auto r = nn::grad_check(*loss, m.params(), {}, opt);
      if (r.max_rel_error > worst) {
        worst = r.max_rel_error;
        where = d.doc_id + " " + (loss == &tagging ? "tagging" : "pointer") + " " + r.worst;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < 1e-4 && secs < 300.0,
          fmt("max relative error %.3g (limit 1e-4), ", worst) + "worst at " + where + fmt(", %.1f s", secs)};
}

// ---- 3 --------------------------------------------------------------------

Outcome analytic_losses() {
  double worst = 0;
  // Tagging loss at a zero similarity matrix: every entry contributes ln 2.
  for (const auto& [rows, tags] : std::vector<std::pair<int, int>>{{1, 1}, {4, 3}, {10, 5}, {37, 25}}) {
    nn::Tape<double> t(false);
    std::vector<int> labels;
    for (int i = 0; i < rows; ++i) labels.push_back(i % tags);
    const double loss = t.scalar(
        matcher::bio_loss(t, t.constant(MatrixD::Zero(rows, tags)), matcher::one_hot<double>(labels, tags)));
    worst = std::max(worst, std::abs(loss - rows * tags * std::log(2.0)));
  }
  // The same through the whole tagging path: a zero matcher projection makes
  // every tag vector, and so the similarity matrix, zero.
  nn::ModelConfig c;
  c.d = 32;
  c.heads = 2;
  c.n_queries = 4;
  const auto docs = synth(5, 303, "loss");
  nn::Model model(c, doc::synthetic_vocabulary(), doc::synthetic_schema(), 3);
  model.p("matcher.proj.w").value.setZero();
  model.p("matcher.proj.b").value.setZero();
  for (const auto& d : docs) {
    nn::Tape<double> t(false);
    const double loss = t.scalar(matcher::bio_document_loss(t, model, d));
    worst = std::max(worst, std::abs(loss - d.size() * model.tag_space().size() * std::log(2.0)));
  }
  // Pointer loss with uniform logits: every step costs ln(N + 2).
  model.p("matcher.sep").value.setZero();
  model.p("matcher.eos").value.setZero();
  Rng rng(4);
  for (const int n : {1, 10, 64, 200}) {
    nn::Tape<double> t(false);
    const nn::Var pool = matcher::seq_pool(t, model, t.constant(MatrixD::Zero(n, c.d)));
    MatrixD mem(7, c.d);
    for (Eigen::Index i = 0; i < mem.size(); ++i) mem.data()[i] = rng.normal();
    std::vector<int> targets;
    const int steps = static_cast<int>(rng.uniform_int(1, 12));
    for (int s = 0; s + 1 < steps; ++s) targets.push_back(static_cast<int>(rng.uniform_int(0, n)));
    targets.push_back(matcher::eos_index(n));
    const double loss = t.scalar(matcher::seq_loss(t, model, pool, t.constant(mem), targets));
    worst = std::max(worst, std::abs(loss - static_cast<double>(targets.size()) * std::log(n + 2.0)));
  }
  return {worst < 1e-9, fmt("max deviation %.3g (limit 1e-9)", worst)};
}

// ---- 4 --------------------------------------------------------------------

std::vector<compositor::EntityPrediction> by_span(std::vector<compositor::EntityPrediction> v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return std::tie(a.type_id, a.token_indices) < std::tie(b.type_id, b.token_indices);
  });
  return v;
}

Outcome oracle_round_trips() {
  const doc::TagSpace tags(doc::synthetic_schema());
  int bio_ok = 0, seq_ok = 0;
  const auto docs = synth(1000, 404, "trip");
  for (const auto& d : docs) {
    const auto gold = compositor::gold_entities(d, tags);
    const auto bio = compositor::compose_bio(
        matcher::one_hot<double>(matcher::bio_labels(d, tags), tags.size()), d, tags);
    if (by_span(bio) == by_span(gold)) ++bio_ok;
    std::vector<compositor::EntityPrediction> seq;
    for (int t = 0; t < tags.num_types(); ++t) {
      for (auto& p : compositor::compose_seq(matcher::seq_targets(d, tags.type_id(t)), d, t, tags)) seq.push_back(p);
    }
    if (seq == gold) ++seq_ok;
  }
  const int n = static_cast<int>(docs.size());
  return {bio_ok == n && seq_ok == n, "bio " + std::to_string(bio_ok) + "/" + std::to_string(n) + ", seq " +
                                          std::to_string(seq_ok) + "/" + std::to_string(n) + " documents"};
}

// ---- 5 --------------------------------------------------------------------

std::vector<std::string> values(const std::vector<compositor::EntityPrediction>& v) {
  std::vector<std::string> out;
  for (const auto& p : v) out.push_back(p.type + "=" + p.value);
  return out;
}

// Feed order `perm` (new position i holds old token perm[i]); `where` is the
// inverse.
doc::Document refeed(const doc::Document& d, const std::vector<int>& perm, std::vector<int>& where) {
  doc::Document out = d;
  where.assign(perm.size(), 0);
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

Outcome permutation_invariance() {
  const doc::TagSpace tags(doc::synthetic_schema());
  Rng rng(505);
  int identical = 0, trials = 0, bio_changed = 0;
  for (const auto& d : synth(100, 505, "perm")) {
    const int n = d.size();
    std::vector<std::vector<int>> targets;
    std::vector<std::string> reference;
    for (int t = 0; t < tags.num_types(); ++t) {
      targets.push_back(matcher::seq_targets(d, tags.type_id(t)));
      for (auto& v : values(compositor::compose_seq(targets.back(), d, t, tags))) reference.push_back(v);
    }
    const auto gold_tags = matcher::bio_labels(d, tags);
    const auto bio_reference = values(compositor::compose_bio_tags(gold_tags, d, tags));
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> perm(static_cast<std::size_t>(n)), where;
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
      const auto p = refeed(d, perm, where);
      // Oracle matching on the new feed: the same tokens, re-indexed.
      std::vector<std::string> got;
      for (int t = 0; t < tags.num_types(); ++t) {
        auto moved = targets[static_cast<std::size_t>(t)];
        for (auto& k : moved) k = k < n ? where[static_cast<std::size_t>(k)] : k;
        for (auto& v : values(compositor::compose_seq(moved, p, t, tags))) got.push_back(v);
      }
      ++trials;
      if (got == reference) ++identical;
      // Each token keeps its gold tag; only the feed order changes.
      std::vector<int> carried;
      for (const int k : perm) carried.push_back(gold_tags[static_cast<std::size_t>(k)]);
      auto bio = values(compositor::compose_bio_tags(carried, p, tags));
      auto ref = bio_reference;
      std::sort(bio.begin(), bio.end());
      std::sort(ref.begin(), ref.end());
      if (bio != ref) ++bio_changed;
    }
  }
  return {identical == trials && bio_changed > 0,
          "seq identical on " + std::to_string(identical) + "/" + std::to_string(trials) +
              " permutations; bio output changed on " + std::to_string(bio_changed)};
}

// ---- 6 --------------------------------------------------------------------

// Full-shot setting shared by the trained criteria.
train::TrainConfig full_shot_config() {
  train::TrainConfig tc;
  tc.lr = 1e-3;
  tc.weight_decay = 0.01;
  tc.batch = 4;
  tc.epochs = 30;
  tc.seed = 1;
  tc.shift = 300;
  tc.model.d = 64;
  tc.model.heads = 4;
  tc.model.enc_layers = 4;
  tc.model.n_queries = 8;
  return tc;
}

Outcome full_shot() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto train_docs = synth(500, 11, "synth");
  const auto test_docs = synth(100, 12, "test");
  const auto tc = full_shot_config();
  nn::Model model(tc.model, doc::synthetic_vocabulary(), doc::synthetic_schema(), tc.seed);
  train::finetune(model, train_docs, tc);
  eval::EvalOptions eo;
  eo.mode = train::MatcherMode::Seq;
  const auto r = eval::evaluate(model, test_docs, eo);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {r.micro.f1 >= 0.90,
          fmt("F1 %.4f (P %.4f, R %.4f; threshold 0.90), ", r.micro.f1, r.micro.precision, r.micro.recall) +
              fmt("%.0f s", secs)};
}

// ---- 7 --------------------------------------------------------------------

Outcome pretrain_benefit() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto corpus = synth(2000, 31, "pre");
  const auto pool = synth(500, 11, "synth");
  const auto test_docs = synth(100, 12, "test");
  train::TrainConfig pc = full_shot_config();
  pc.phase = train::Phase::Pretrain;
  pc.epochs = 5;
  pc.batch = 8;
  pc.per_task = 4;
  pc.shift = 0;
  train::TrainConfig fc = full_shot_config();
  fc.max_steps = 300;

  nn::Model trunk(pc.model, doc::synthetic_vocabulary(), doc::synthetic_schema(), pc.seed);
  train::pretrain(trunk, corpus, pc);
  eval::EvalOptions eo;
  int wins = 0;
  std::string folds;
  for (const auto& episode : train::sample_episodes(pool, 5, 5, 7)) {
    const auto shots = train::episode_documents(pool, episode);
    nn::Model plain(fc.model, doc::synthetic_vocabulary(), doc::synthetic_schema(), fc.seed);
    nn::Model pretrained = trunk;
    train::finetune(plain, shots, fc);
    train::finetune(pretrained, shots, fc);
    const double a = eval::evaluate(plain, test_docs, eo).micro.f1;
    const double b = eval::evaluate(pretrained, test_docs, eo).micro.f1;
    if (b > a) ++wins;
    folds += fmt(" %.3f/%.3f", b, a);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {wins >= 4, std::to_string(wins) + "/5 folds improved (needs 4); pretrained/plain F1:" + folds +
                         fmt(", %.0f s", secs)};
}

// ---- 8 --------------------------------------------------------------------

Outcome shuffle_robustness() {
  const auto t0 = std::chrono::steady_clock::now();
  TempDir tmp("shuffle");
  const auto train_docs = synth(500, 11, "synth");
  const auto test_docs = synth(100, 12, "test");
  auto tc = full_shot_config();
  tc.epochs = 15;
  // Half the training documents arrive in random word order, for both arms.
  tc.shuffle = 0.5;
  {
    nn::Model trunk(tc.model, doc::synthetic_vocabulary(), doc::synthetic_schema(), tc.seed);
    train::CheckpointMeta meta;
    meta.phase = "init";
    meta.seed = tc.seed;
    train::save_checkpoint(trunk, meta, tmp.path / "trunk");
  }
  double drop[2] = {0, 0};
  std::string detail;
  for (const auto mode : {train::MatcherMode::Seq, train::MatcherMode::Bio}) {
    auto model = std::move(train::load_checkpoint(tmp.path / "trunk").model);
    auto c = tc;
    c.matcher = mode;
    train::finetune(*model, train_docs, c);
    eval::EvalOptions eo;
    eo.mode = mode;
    eo.seed = 9;
    const double clean = eval::evaluate(*model, test_docs, eo).micro.f1;
    eo.condition = eval::Condition::Shuffled;
    const double shuffled = eval::evaluate(*model, test_docs, eo).micro.f1;
    drop[mode == train::MatcherMode::Seq ? 0 : 1] = clean - shuffled;
    detail += train::to_string(mode) + fmt(" %.4f -> %.4f (drop %.4f); ", clean, shuffled, clean - shuffled);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {drop[0] <= drop[1], detail + fmt("%.0f s", secs)};
}

// ---- 9 --------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Every regular file under `dir`, keyed by relative path.
std::vector<std::pair<std::string, std::string>> tree(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.push_back({fs::relative(e.path(), dir).string(), slurp(e.path())});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  TempDir tmp("determinism");
  const std::string model_keys = "d=16,heads=2,enc_layers=1,dec_layers=1,res_layers=1,n_queries=4";
  std::vector<std::string> sets;
  {
    std::string key;
    std::istringstream s(model_keys);
    while (std::getline(s, key, ',')) sets.push_back(key);
  }
  std::string failure;
  for (const std::string run : {"a", "b"}) {
    const fs::path dir = tmp.path / run;
    fs::create_directories(dir);
    const auto p = [&](const std::string& f) { return (dir / f).string(); };
    const auto with_sets = [&](std::vector<std::string> args, const std::string& flag = "--set") {
      for (const auto& s : sets) {
        args.push_back(flag);
        args.push_back(s);
      }
      return args;
    };
    const std::vector<std::vector<std::string>> commands = {
        {"synth", "--count", "30", "--seed", "5", "--out", p("pre.jsonl")},
        {"synth", "--count", "12", "--seed", "6", "--out", p("train.jsonl")},
        {"synth", "--count", "6", "--seed", "7", "--prefix", "test", "--out", p("test.jsonl")},
        with_sets({"pretrain", "--data", p("pre.jsonl"), "--out", p("pt"), "--set", "max_steps=3", "--set",
                   "seed=3", "--set", "log_path=" + p("pt.log.jsonl")}),
        with_sets({"finetune", "--init", p("pt"), "--train", p("train.jsonl"), "--out", p("seq"), "--set",
                   "max_steps=4", "--set", "seed=3", "--set", "log_path=" + p("seq.log.jsonl")}),
        with_sets({"finetune", "--init", p("pt"), "--train", p("train.jsonl"), "--out", p("bio"), "--set",
                   "matcher=bio", "--set", "max_steps=4", "--set", "seed=3"}),
        {"eval", "--checkpoint", p("seq"), "--data", p("test.jsonl"), "--out", p("seq.clean.json"), "--csv",
         p("seq.clean.csv")},
        {"eval", "--checkpoint", p("seq"), "--data", p("test.jsonl"), "--condition", "shuffled", "--seed", "4",
         "--out", p("seq.shuffled.json")},
        {"eval", "--checkpoint", p("bio"), "--data", p("test.jsonl"), "--matcher", "bio", "--condition",
         "shuffled", "--seed", "4", "--out", p("bio.shuffled.json")},
        with_sets({"fewshot", "--init", p("pt"), "--train", p("train.jsonl"), "--test", p("test.jsonl"), "--shots",
                   "1,2", "--folds", "2", "--set", "max_steps=2", "--set", "seed=3", "--out", p("few.json")}),
        with_sets(with_sets({"ablate", "--grid", "pt-resampler", "--pretrain-data", p("pre.jsonl"), "--train",
                             p("train.jsonl"), "--test", p("test.jsonl"), "--set", "max_steps=2",
                             "--pretrain-set", "max_steps=2", "--out", p("ablation")}),
                  "--pretrain-set"),
        {"report", "--input", p("seq.clean.json"), "--input", p("few.json"), "--input", p("ablation.json"),
         "--input", p("seq.log.jsonl"), "--out-dir", p("plots")},
    };
    for (const auto& cmd : commands) {
      std::ostringstream out, err;
      if (run_cli(cmd, out, err) != 0) {
        failure = cmd[0] + " failed: " + err.str();
        break;
      }
      std::ofstream(dir / ("stdout." + std::to_string(&cmd - commands.data()))) << out.str();
    }
    if (!failure.empty()) break;
  }
  if (!failure.empty()) return {false, failure};
  // Logs and stdout name their own directory; compare with it normalised.
  auto a = tree(tmp.path / "a"), b = tree(tmp.path / "b");
  const std::string da = (tmp.path / "a").string(), db = (tmp.path / "b").string();
  for (auto& [name, content] : b) {
    for (std::size_t at = 0; (at = content.find(db, at)) != std::string::npos; at += da.size()) {
      content.replace(at, db.size(), da);
    }
  }
  int differing = 0;
  std::string first;
  if (a.size() != b.size()) return {false, "runs wrote different file sets"};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) {
      if (differing++ == 0) first = a[i].first;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {differing == 0, std::to_string(a.size()) + " files compared, " + std::to_string(differing) + " differ" +
                              (first.empty() ? "" : " (first: " + first + ")") + fmt(", %.1f s", secs)};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "geometric search equals brute force", geometric_oracle},
      {2, "end-to-end gradients match finite differences", gradient_fidelity},
      {3, "analytic loss values", analytic_losses},
      {4, "oracle labels compose back to gold", oracle_round_trips},
      {5, "seq composition ignores feed order, bio does not", permutation_invariance},
      {6, "full-shot synthetic F1 >= 0.90", full_shot},
      {7, "pre-training beats no pre-training in >= 4 of 5 five-shot folds", pretrain_benefit},
      {8, "seq loses no more F1 than bio under shuffled words", shuffle_robustness},
      {9, "fixed-seed commands reproduce byte-identical outputs", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  bool list = false;
  app.add_option("--criterion", selected, "Criterion number (repeatable; default: all)")->check(CLI::Range(1, 9));
  app.add_flag("--list", list, "List the criteria and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& c : criteria()) std::printf("%d %s\n", c.id, c.title);
    return 0;
  }
  int failed = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
