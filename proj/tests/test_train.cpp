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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "docmatch/doc/jsonl.hpp"
#include "docmatch/doc/synth.hpp"
#include "docmatch/error.hpp"
#include "docmatch/train/checkpoint.hpp"
#include "docmatch/train/config.hpp"
#include "docmatch/train/episodes.hpp"
#include "docmatch/train/optimizer.hpp"
#include "docmatch/train/trainer.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace docmatch;
using namespace docmatch::train;
namespace fs = std::filesystem;

namespace {

nn::ModelConfig tiny_model() {
  nn::ModelConfig c;
  c.d = 16;
  c.heads = 2;
  c.enc_layers = 1;
  c.dec_layers = 1;
  c.res_layers = 1;
  c.ffn_mult = 2;
  c.n_queries = 4;
  return c;
}

std::vector<doc::Document> corpus(int n, std::uint64_t seed = 31) {
  doc::SynthConfig c;
  c.count = n;
  return doc::synthesize(c, seed);
}

nn::Model tiny(std::uint64_t seed = 1, nn::ModelConfig c = tiny_model()) {
  return nn::Model(c, doc::synthetic_vocabulary(), doc::synthetic_schema(), seed);
}

TrainConfig quick(Phase phase) {
  TrainConfig c;
  c.phase = phase;
  c.lr = 1e-3;
  c.seed = 5;
  c.epochs = 1;
  c.batch = 2;
  c.per_task = 2;
  c.model = tiny_model();
  return c;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("docmatch-test-" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

// ---- configuration ---------------------------------------------------------

TEST_CASE("config defaults follow the published recipe") {
  TrainConfig c;
  CHECK(c.lr == 2e-5);
  CHECK(c.weight_decay == 0.1);
  CHECK(c.per_task == 8);
  CHECK(c.epochs == 10);
  c.phase = Phase::Pretrain;
  CHECK(c.effective_batch() == 32);
  c.phase = Phase::Finetune;
  CHECK(c.effective_batch() == 4);
  c.batch = 7;
  CHECK(c.effective_batch() == 7);
  CHECK(c.model.max_enc_len == 512);
  CHECK(c.model.max_dec_len == 128);
}

TEST_CASE("config text parsing") {
  const TrainConfig c = parse_train_config(
      "# comment line\n"
      "phase = pretrain\n"
      "lr=0.001   # trailing comment\n"
      "\n"
      "  sod = false\n"
      "matcher = bio\n"
      "d = 32\n"
      "resampler = vanilla\n"
      "seed = 12345678901\n");
  CHECK(c.phase == Phase::Pretrain);
  CHECK(c.lr == 0.001);
  CHECK(!c.tasks.sod);
  CHECK(c.tasks.mtf);
  CHECK(c.matcher == MatcherMode::Bio);
  CHECK(c.model.d == 32);
  CHECK(c.model.resampler == nn::ResamplerArm::Vanilla);
  CHECK(c.seed == 12345678901ULL);

  CHECK_THROWS_AS(parse_train_config("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_train_config("lr = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_train_config("lr\n"), ConfigError);
  CHECK_THROWS_AS(parse_train_config("matcher = crf\n"), ConfigError);
  CHECK_THROWS_AS(parse_train_config("mtf = maybe\n"), ConfigError);
  try {
    parse_train_config("lr = 1\n\nepochs = x\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_train_config("/nonexistent/docmatch.cfg"), ConfigError);
}

TEST_CASE("config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.lr = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = TrainConfig{};
  c.batch = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = TrainConfig{};
  c.epochs = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.max_steps = 10;
  CHECK_NOTHROW(c.validate());
  c = TrainConfig{};
  c.warmup = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = TrainConfig{};
  c.shift = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = TrainConfig{};
  c.shuffle = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config round trips and hashing") {
  TrainConfig c = quick(Phase::Pretrain);
  c.tasks.sad = false;
  c.shift = 40;
  c.shuffle = 0.25;
  c.model.resampler = nn::ResamplerArm::None;
  const TrainConfig from_text = parse_train_config(to_config_text(c));
  CHECK(to_json(from_text) == to_json(c));
  CHECK(to_json(train_config_from_json(to_json(c))) == to_json(c));

  TrainConfig relogged = c;
  relogged.log_path = "/tmp/elsewhere.jsonl";
  CHECK(config_hash(relogged) == config_hash(c));
  TrainConfig other = c;
  other.lr *= 2;
  CHECK(config_hash(other) != config_hash(c));
  CHECK(config_hash(c).size() == 40);
}

// ---- optimization ----------------------------------------------------------

TEST_CASE("learning-rate schedule: warmup then linear decay") {
  const int total = 100;
  CHECK(scheduled_lr(1.0, 0, total, 0.05) == doctest::Approx(0.2));
  CHECK(scheduled_lr(1.0, 4, total, 0.05) == doctest::Approx(1.0));
  CHECK(scheduled_lr(1.0, 5, total, 0.05) == doctest::Approx(1.0));
  CHECK(scheduled_lr(1.0, 99, total, 0.05) == doctest::Approx(1.0 / 95));
  CHECK(scheduled_lr(1.0, 0, 10, 0.0) == doctest::Approx(1.0));
  double prev = 2.0;
  for (int s = 5; s < total; ++s) {
    const double lr = scheduled_lr(1.0, s, total, 0.05);
    CHECK(lr < prev);
    CHECK(lr > 0);
    prev = lr;
  }
  // A one-step run still gets a positive rate.
  CHECK(scheduled_lr(3e-4, 0, 1, 0.05) == doctest::Approx(3e-4));
}

TEST_CASE("AdamW matches a scalar reference") {
  nn::ParameterStore store;
  auto& w = store.add("layer.w", 1, 2);
  auto& b = store.add("layer.b", 1, 1);
  w.value << 1.0, -2.0;
  b.value << 0.5;
  TrainConfig c;
  c.weight_decay = 0.1;
  c.clip = 0;  // no clipping
  AdamW opt(store, c);

  // Independent reference for one scalar.
  struct Ref {
    double p, m = 0, v = 0;
    bool decay;
    void step(double g, double lr, int t, const TrainConfig& c) {
      m = c.beta1 * m + (1 - c.beta1) * g;
      v = c.beta2 * v + (1 - c.beta2) * g * g;
      const double mh = m / (1 - std::pow(c.beta1, t)), vh = v / (1 - std::pow(c.beta2, t));
      if (decay) p -= lr * c.weight_decay * p;
      p -= lr * mh / (std::sqrt(vh) + c.adam_eps);
    }
  };
  Ref r0{1.0, 0, 0, true}, r1{-2.0, 0, 0, true}, rb{0.5, 0, 0, false};
  const double grads[3][3] = {{0.3, -1.0, 2.0}, {0.1, 0.4, -0.5}, {-0.2, 0.0, 0.7}};
  for (int t = 1; t <= 3; ++t) {
    const double* g = grads[t - 1];
    w.grad << g[0], g[1];
    b.grad << g[2];
    opt.step(0.01);
    r0.step(g[0], 0.01, t, c);
    r1.step(g[1], 0.01, t, c);
    rb.step(g[2], 0.01, t, c);
    CHECK(w.value(0, 0) == doctest::Approx(r0.p).epsilon(1e-12));
    CHECK(w.value(0, 1) == doctest::Approx(r1.p).epsilon(1e-12));
    CHECK(b.value(0, 0) == doctest::Approx(rb.p).epsilon(1e-12));
  }
  CHECK(opt.steps_taken() == 3);
}

TEST_CASE("AdamW: clipping, decay exclusions, frozen parameters") {
  nn::ParameterStore store;
  auto& w = store.add("x.w", 1, 2);
  auto& gain = store.add("x.gain", 1, 1);
  auto& sep = store.add("matcher.sep", 1, 1);
  w.value << 1.0, 1.0;
  gain.value << 1.0;
  sep.value << 1.0;
  TrainConfig c;
  c.clip = 1.0;
  AdamW opt(store, c);
  w.grad << 3.0, 4.0;
  gain.grad << 0.0;
  sep.grad << 0.0;
  CHECK(opt.step(0.1) == doctest::Approx(5.0));
  // Zero gradient: only decoupled decay could move these, and they are exempt.
  CHECK(gain.value(0, 0) == 1.0);
  CHECK(sep.value(0, 0) == 1.0);

  const nn::MatrixD before = w.value;
  w.grad << 1.0, 1.0;
  opt.step(0.1, [](const nn::Parameter& p) { return p.name == "x.w"; });
  CHECK(w.value == before);
}

// ---- episodes ----------------------------------------------------------------

TEST_CASE("few-shot episodes") {
  const auto pool = corpus(100);
  const auto a = sample_episodes(pool, 5, 5, 3);
  const auto b = sample_episodes(pool, 5, 5, 3);
  REQUIRE(a.size() == 5);
  for (std::size_t f = 0; f < a.size(); ++f) {
    CHECK(a[f].indices == b[f].indices);
    CHECK(a[f].doc_ids == b[f].doc_ids);
    CHECK(a[f].fold == static_cast<int>(f));
    CHECK(a[f].shots == 5);
    CHECK(a[f].indices.size() == 5);
    CHECK(episode_documents(pool, a[f]).size() == 5);
  }
  // A fold depends on (seed, n, fold) only.
  CHECK(sample_episodes(pool, 5, 2, 3)[1].indices == a[1].indices);
  CHECK(sample_episodes(pool, 5, 5, 4)[0].indices != a[0].indices);

  for (const auto& e : sample_episodes(pool, 1, 5, 9)) CHECK(e.indices.size() == 1);

  const std::vector<doc::Document> two(pool.begin(), pool.begin() + 2);
  bool repeat = false;
  for (const auto& e : sample_episodes(two, 10, 5, 1)) {
    repeat = repeat || std::set<int>(e.indices.begin(), e.indices.end()).size() < e.indices.size();
  }
  CHECK(repeat);

  CHECK_THROWS_AS(sample_episodes(pool, 0, 5, 1), ArgumentError);
  CHECK_THROWS_AS(sample_episodes(pool, 1, 0, 1), ArgumentError);
  CHECK_THROWS_AS(sample_episodes({}, 1, 5, 1), ArgumentError);
}

// ---- checkpoints ---------------------------------------------------------------

TEST_CASE("checkpoint round trip and provenance") {
  TempDir dir("ckpt");
  nn::Model m = tiny(4);
  const auto docs = corpus(3);
  CheckpointMeta meta;
  meta.phase = "finetune";
  meta.seed = 77;
  meta.steps = 12;
  meta.config_hash = config_hash(quick(Phase::Finetune));
  meta.corpus_hash = corpus_hash(docs);
  meta.train_config = to_json(quick(Phase::Finetune));
  save_checkpoint(m, meta, dir.path);
  CHECK(fs::exists(dir.path / "params.bin"));
  CHECK(fs::exists(dir.path / "meta.json"));

  const Checkpoint loaded = load_checkpoint(dir.path);
  CHECK(loaded.model->params().hash() == m.params().hash());
  for (std::size_t i = 0; i < m.params().size(); ++i) {
    CHECK(loaded.model->params().at(i).value == m.params().at(i).value);
  }
  CHECK(loaded.model->config() == m.config());
  CHECK(loaded.model->vocab().words() == m.vocab().words());
  CHECK(loaded.model->schema().size() == m.schema().size());
  CHECK(loaded.meta.seed == 77);
  CHECK(loaded.meta.steps == 12);
  CHECK(loaded.meta.config_hash == meta.config_hash);
  CHECK(loaded.meta.corpus_hash == meta.corpus_hash);
  CHECK(loaded.meta.corpus_hash.size() == 40);
  CHECK(corpus_hash(docs) != corpus_hash(corpus(3, 99)));
}

TEST_CASE("corpus hash is a git blob hash") {
  // git hash-object of the empty blob.
  CHECK(corpus_hash({}) == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("checkpoint load failures") {
  TempDir dir("ckpt-bad");
  nn::Model m = tiny(4);
  save_checkpoint(m, CheckpointMeta{}, dir.path);

  SUBCASE("wrong tag space names the tensor") {
    const doc::EntitySchema small(std::vector<doc::EntityType>{{"a", "a"}});
    nn::Model other(tiny_model(), doc::synthetic_vocabulary(), small, 1);
    try {
      load_parameters(other, dir.path);
      FAIL("expected CheckpointError");
    } catch (const CheckpointError& e) {
      // The first tensor sized by the schema.
      CHECK(std::string(e.what()).find("prompt.type") != std::string::npos);
    }
  }
  SUBCASE("version mismatch") {
    nlohmann::json meta;
    std::ifstream(dir.path / "meta.json") >> meta;
    meta["version"] = kCheckpointVersion + 1;
    std::ofstream(dir.path / "meta.json") << meta.dump();
    CHECK_THROWS_AS(load_checkpoint(dir.path), CheckpointError);
  }
  SUBCASE("missing parameters") {
    fs::remove(dir.path / "params.bin");
    CHECK_THROWS_AS(load_checkpoint(dir.path), CheckpointError);
  }
  SUBCASE("truncated parameters") {
    fs::resize_file(dir.path / "params.bin", fs::file_size(dir.path / "params.bin") / 2);
    CHECK_THROWS_AS(load_checkpoint(dir.path), CheckpointError);
  }
}

// ---- training ----------------------------------------------------------------

TEST_CASE("pre-training lowers the loss and logs every step") {
  TempDir dir("pretrain");
  const auto docs = corpus(200);
  nn::Model m = tiny(2);
  TrainConfig c = quick(Phase::Pretrain);
  c.epochs = 3;
  c.batch = 8;
  c.log_path = (dir.path / "log.jsonl").string();
  const TrainResult r = pretrain(m, docs, c);
  REQUIRE(r.epoch_loss.size() == 3);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());
  CHECK(r.steps == 3 * 25);
  CHECK(r.log.size() == 75u);
  std::ifstream in(c.log_path);
  int lines = 0;
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    CHECK(std::isfinite(j.at("loss").get<double>()));
    CHECK(j.contains("lr"));
    CHECK(j.at("task_mix").at("MTF") == 8 * c.per_task);
    ++lines;
  }
  CHECK(lines == 75);
}

TEST_CASE("task toggles control the instruction mix") {
  const auto docs = corpus(6);
  nn::Model m = tiny(2);
  TrainConfig c = quick(Phase::Pretrain);
  c.tasks.sod = false;
  for (const auto& e : pretrain(m, docs, c).log) {
    CHECK(e.task_mix.count("SOD") == 0);
    CHECK(e.task_mix.at("MTF") == 2 * c.per_task);
    CHECK(e.task_mix.at("SAD") == 2 * c.per_task);
  }
  c.tasks = {false, false, false};
  CHECK_THROWS_AS(pretrain(m, docs, c), ConfigError);
}

TEST_CASE("pre-training rejects documents outside the admitted window") {
  nn::Model m = tiny(2);
  const std::vector<doc::Document> docs = {docmatch::testing::line_doc(3)};
  CHECK_THROWS_AS(pretrain(m, docs, quick(Phase::Pretrain)), ValidationError);
}

TEST_CASE("training is deterministic for a fixed seed") {
  const auto docs = corpus(8);
  for (const auto mode : {MatcherMode::Seq, MatcherMode::Bio}) {
    TrainConfig c = quick(Phase::Finetune);
    c.matcher = mode;
    c.shift = 30;
    c.shuffle = 0.5;
    nn::Model a = tiny(3), b = tiny(3);
    const TrainResult ra = finetune(a, docs, c);
    const TrainResult rb = finetune(b, docs, c);
    CHECK(a.params().hash() == b.params().hash());
    CHECK(ra.epoch_loss == rb.epoch_loss);
    c.seed += 1;
    nn::Model d = tiny(3);
    finetune(d, docs, c);
    CHECK(d.params().hash() != a.params().hash());
  }
  TrainConfig p = quick(Phase::Pretrain);
  nn::Model a = tiny(3), b = tiny(3);
  pretrain(a, docs, p);
  pretrain(b, docs, p);
  CHECK(a.params().hash() == b.params().hash());
}

TEST_CASE("word-order shuffling changes what fine-tuning sees") {
  const auto docs = corpus(6);
  TrainConfig c = quick(Phase::Finetune);
  nn::Model plain = tiny(3), mixed = tiny(3);
  finetune(plain, docs, c);
  c.shuffle = 1.0;
  finetune(mixed, docs, c);
  CHECK(plain.params().hash() != mixed.params().hash());
}

TEST_CASE("fine-tuning covers every schema type each epoch") {
  const auto docs = corpus(5);
  nn::Model m = tiny(2);
  TrainConfig c = quick(Phase::Finetune);
  c.epochs = 2;
  const TrainResult r = finetune(m, docs, c);
  int extract = 0;
  for (const auto& e : r.log) extract += e.task_mix.at("EXTRACT");
  // Three batches of two per pass over five documents.
  CHECK(r.steps == 6);
  CHECK(extract == 6 * 2 * m.schema().size());
  CHECK_THROWS_AS(finetune(m, {}, c), ArgumentError);
}

TEST_CASE("step budget is exact") {
  // One document, a fixed step budget: the few-shot regime.
  const doc::EntitySchema schema(std::vector<doc::EntityType>{{"total", "total"}});
  nn::ModelConfig mc = tiny_model();
  mc.d = 8;
  nn::Model m(mc, doc::synthetic_vocabulary(), schema, 1);
  auto docs = corpus(1);
  TrainConfig c = quick(Phase::Finetune);
  c.model = mc;
  c.batch = 1;
  c.max_steps = 5000;
  const TrainResult r = finetune(m, docs, c);
  CHECK(r.steps == 5000);
  CHECK(r.log.size() == 5000u);
  CHECK(planned_steps(c, 1) == 5000);
  c.max_steps = 0;
  c.epochs = 3;
  CHECK(planned_steps(c, 10) == 3 * 10);
  c.batch = 4;
  CHECK(planned_steps(c, 10) == 3 * 3);
}

TEST_CASE("a frozen encoder is left untouched") {
  const auto docs = corpus(4);
  nn::Model m = tiny(2);
  const nn::MatrixD word = m.p("embed.word").value;
  const nn::MatrixD enc = m.p("encoder.0.attn.q.w").value;
  const nn::MatrixD queries = m.p("resampler.queries").value;
  TrainConfig c = quick(Phase::Pretrain);
  c.freeze_encoder = true;
  pretrain(m, docs, c);
  CHECK(m.p("embed.word").value == word);
  CHECK(m.p("encoder.0.attn.q.w").value == enc);
  CHECK(m.p("resampler.queries").value != queries);
}

TEST_CASE("non-finite loss aborts with a dump of the batch") {
  TempDir dir("nan");
  const auto docs = corpus(4);
  nn::Model m = tiny(2);
  m.p("matcher.proj.w").value(0, 0) = std::nan("");
  TrainConfig c = quick(Phase::Finetune);
  c.dump_path = (dir.path / "bad.jsonl").string();
  try {
    finetune(m, docs, c);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("step 0") != std::string::npos);
  }
  const auto dumped = doc::load_jsonl(c.dump_path);
  REQUIRE(dumped.size() == 2);
  for (const auto& d : dumped) {
    bool known = false;
    for (const auto& o : docs) known = known || o.doc_id == d.doc_id;
    CHECK(known);
  }
}

TEST_CASE("pre-trained trunk loads into either matcher mode") {
  TempDir dir("trunk");
  const auto docs = corpus(4);
  nn::Model m = tiny(2);
  pretrain(m, docs, quick(Phase::Pretrain));
  save_checkpoint(m, CheckpointMeta{}, dir.path);
  for (const auto mode : {MatcherMode::Bio, MatcherMode::Seq}) {
    nn::Model fresh = tiny(9);
    CHECK_NOTHROW(load_parameters(fresh, dir.path));
    CHECK(fresh.params().hash() == m.params().hash());
    TrainConfig c = quick(Phase::Finetune);
    c.matcher = mode;
    CHECK_NOTHROW(finetune(fresh, docs, c));
  }
}
