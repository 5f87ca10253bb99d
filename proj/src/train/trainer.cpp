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

#include "docmatch/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>

#include "docmatch/doc/jsonl.hpp"
#include "docmatch/error.hpp"
#include "docmatch/matcher/pipeline.hpp"
#include "docmatch/rng.hpp"
#include "docmatch/spatial/tasks.hpp"
#include "docmatch/train/optimizer.hpp"

namespace docmatch::train {

nlohmann::json to_json(const LogEntry& e) {
  return {{"step", e.step}, {"loss", e.loss}, {"lr", e.lr}, {"task_mix", e.task_mix}};
}

int planned_steps(const TrainConfig& config, std::size_t items) {
  if (config.max_steps > 0) return config.max_steps;
  const auto b = static_cast<std::size_t>(config.effective_batch());
  return config.epochs * static_cast<int>((items + b - 1) / b);
}

namespace {

// Moves every box of `d` by one random offset of at most `shift` grid units
// per axis, staying on the page.
doc::Document shifted(const doc::Document& d, int shift, std::uint64_t seed) {
  if (shift == 0 || d.tokens.empty()) return d;
  int lo_x = d.tokens.front().box.x0, hi_x = d.tokens.front().box.x1;
  int lo_y = d.tokens.front().box.y0, hi_y = d.tokens.front().box.y1;
  for (const auto& t : d.tokens) {
    lo_x = std::min(lo_x, t.box.x0);
    hi_x = std::max(hi_x, t.box.x1);
    lo_y = std::min(lo_y, t.box.y0);
    hi_y = std::max(hi_y, t.box.y1);
  }
  Rng rng(mix_seed(seed, 0x7368696674ULL));
  const auto dx = static_cast<int>(rng.uniform_int(-std::min(shift, lo_x), std::min(shift, doc::kGridMax - hi_x)));
  const auto dy = static_cast<int>(rng.uniform_int(-std::min(shift, lo_y), std::min(shift, doc::kGridMax - hi_y)));
  doc::Document out = d;
  for (auto& t : out.tokens) {
    t.box.x0 += dx;
    t.box.x1 += dx;
    t.box.y0 += dy;
    t.box.y1 += dy;
  }
  return out;
}

// Loss of one training unit on its own tape; gradients are scaled by
// `weight` and accumulated into the parameter store.
using UnitLoss = std::function<double(std::size_t item, int epoch, double weight,
                                      const nn::Noise& noise, std::map<std::string, int>& mix)>;

TrainResult run(nn::Model& model, const std::vector<doc::Document>& docs, const TrainConfig& config,
                const UnitLoss& unit, const std::function<bool(const nn::Parameter&)>& frozen) {
  config.validate();
  const int total = planned_steps(config, docs.size());
  const int batch = config.effective_batch();
  const std::size_t n = docs.size();
  AdamW opt(model.params(), config);
  Rng order_rng(mix_seed(config.seed, 0x6f72646572ULL));

  std::unique_ptr<std::ofstream> log_file;
  if (!config.log_path.empty()) {
    log_file = std::make_unique<std::ofstream>(config.log_path);
    if (!*log_file) throw ConfigError("cannot write training log " + config.log_path);
  }

  TrainResult result;
  std::vector<double> epoch_sum;
  std::vector<int> epoch_count;
  std::vector<std::size_t> order;
  std::size_t cursor = 0;
  int epoch = -1;
  for (int step = 0; step < total; ++step) {
    model.params().zero_grad();
    LogEntry entry;
    entry.step = step;
    entry.lr = scheduled_lr(config.lr, step, total, config.warmup);
    // The whole batch is drawn first so a failure can report all of it.
    std::vector<std::size_t> batch_items;
    std::vector<int> batch_epochs;
    for (int b = 0; b < batch; ++b) {
      if (cursor == order.size()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        order_rng.shuffle(order);
        cursor = 0;
        ++epoch;
        epoch_sum.push_back(0);
        epoch_count.push_back(0);
      }
      batch_items.push_back(order[cursor++]);
      batch_epochs.push_back(epoch);
    }
    double loss_sum = 0;
    for (std::size_t b = 0; b < batch_items.size(); ++b) {
      const std::size_t item = batch_items[b];
      nn::Noise noise;
      noise.dropout = config.dropout;
      noise.word_dropout = config.word_dropout;
      noise.seed = mix_seed(mix_seed(config.seed, static_cast<std::uint64_t>(step)), item);
      const double loss = unit(item, batch_epochs[b], 1.0 / batch, noise, entry.task_mix);
      if (!std::isfinite(loss)) {
        std::string ids;
        std::vector<doc::Document> dump;
        for (const auto i : batch_items) {
          ids += (ids.empty() ? "" : ", ") + docs[i].doc_id;
          dump.push_back(docs[i]);
        }
        if (!config.dump_path.empty()) doc::save_jsonl(dump, config.dump_path);
        throw NumericError("non-finite loss at step " + std::to_string(step) + " on document '" +
                           docs[item].doc_id + "' (batch: " + ids + ")" +
                           (config.dump_path.empty() ? "" : ", batch written to " + config.dump_path));
      }
      loss_sum += loss;
      epoch_sum[static_cast<std::size_t>(batch_epochs[b])] += loss;
      ++epoch_count[static_cast<std::size_t>(batch_epochs[b])];
    }
    opt.step(entry.lr, frozen);
    entry.loss = loss_sum / batch;
    if (log_file) *log_file << to_json(entry).dump() << "\n";
    result.log.push_back(std::move(entry));
  }
  result.steps = opt.steps_taken();
  for (std::size_t e = 0; e < epoch_sum.size(); ++e) {
    if (epoch_count[e] > 0) result.epoch_loss.push_back(epoch_sum[e] / epoch_count[e]);
  }
  return result;
}

template <typename F>
double accumulate_unit(const nn::Noise& noise, F&& build) {
  nn::Tape<float> tape(true);
  tape.set_noise(noise);
  const nn::Var loss = build(tape);
  const double value = tape.scalar(loss);
  if (std::isfinite(value)) tape.backward(loss);
  return value;
}

bool is_encoder_side(const nn::Parameter& p) {
  return p.name.rfind("embed.", 0) == 0 || p.name.rfind("encoder.", 0) == 0;
}

}  // namespace

TrainResult pretrain(nn::Model& model, const std::vector<doc::Document>& corpus,
                     const TrainConfig& config) {
  if (!config.tasks.any()) throw ConfigError("pre-training needs at least one of mtf, sod, sad");
  if (corpus.empty()) throw ArgumentError("pre-training corpus is empty");
  for (const auto& d : corpus) {
    if (!d.admitted()) {
      throw ValidationError("document '" + d.doc_id + "' has " + std::to_string(d.size()) +
                            " tokens, outside the admitted window");
    }
  }
  spatial::SamplingParams sampling;
  sampling.per_task = config.per_task;
  sampling.tasks = config.tasks;
  const UnitLoss unit = [&](std::size_t item, int epoch, double weight, const nn::Noise& noise,
                            std::map<std::string, int>& mix) {
    const auto& d = corpus[item];
    Rng rng(mix_seed(mix_seed(config.seed, static_cast<std::uint64_t>(epoch)), item));
    const auto instructions = spatial::sample_instructions(d, sampling, rng);
    for (const auto& ins : instructions) ++mix[spatial::to_string(ins.task)];
    if (instructions.empty()) return 0.0;
    return accumulate_unit(noise, [&](nn::Tape<float>& tape) {
      const auto enc = matcher::encode_document(tape, model, d);
      std::vector<nn::Var> losses;
      for (const auto& ins : instructions) losses.push_back(matcher::instruction_loss(tape, model, enc, ins));
      const nn::Var sum = tape.sum_scalars(losses);
      return tape.scale(sum, static_cast<float>(weight));
    }) / weight;
  };
  std::function<bool(const nn::Parameter&)> frozen;
  if (config.freeze_encoder) frozen = is_encoder_side;
  return run(model, corpus, config, unit, frozen);
}

TrainResult finetune(nn::Model& model, const std::vector<doc::Document>& train_docs,
                     const TrainConfig& config) {
  if (train_docs.empty()) throw ArgumentError("fine-tuning set is empty");
  const int types = model.schema().size();
  const UnitLoss unit = [&](std::size_t item, int, double weight, const nn::Noise& noise,
                            std::map<std::string, int>& mix) {
    auto d = shifted(train_docs[item], config.shift, noise.seed);
    if (config.shuffle > 0) {
      Rng rng(mix_seed(noise.seed, 0x73687566ULL));
      if (rng.uniform() < config.shuffle) d = doc::shuffled_feed(d, rng.next());
    }
    mix["EXTRACT"] += types;
    return accumulate_unit(noise, [&](nn::Tape<float>& tape) {
      nn::Var loss;
      if (config.matcher == MatcherMode::Bio) {
        loss = matcher::bio_document_loss(tape, model, d);
      } else {
        const auto enc = matcher::encode_document(tape, model, d);
        std::vector<nn::Var> losses;
        for (int t = 0; t < types; ++t) losses.push_back(matcher::seq_type_loss(tape, model, enc, d, t));
        loss = tape.sum_scalars(losses);
      }
      return tape.scale(loss, static_cast<float>(weight));
    }) / weight;
  };
  return run(model, train_docs, config, unit, {});
}

}  // namespace docmatch::train
