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
#include <filesystem>
#include <string>

#include "docmatch/nn/model.hpp"
#include "docmatch/spatial/tasks.hpp"
#include "json.hpp"

namespace docmatch::train {

enum class Phase { Pretrain, Finetune };
enum class MatcherMode { Bio, Seq };

std::string to_string(Phase p);
Phase parse_phase(const std::string& s);
std::string to_string(MatcherMode m);
MatcherMode parse_matcher_mode(const std::string& s);

// Everything a training run needs besides data. The config file is flat
// `key = value` lines; `#` starts a comment. Keys are the field names below,
// the model keys (d, heads, enc_layers, dec_layers, res_layers, ffn_mult,
// n_queries, max_dec_len, resampler, bio_prompts) and mtf/sod/sad for the
// pre-training task toggles.
struct TrainConfig {
  Phase phase = Phase::Finetune;
  double lr = 2e-5;
  double weight_decay = 0.1;
  int batch = 0;  // 0 selects 32 for pre-training, 4 for fine-tuning
  double warmup = 0.05;  // fraction of steps with a rising learning rate
  double clip = 1.0;     // global gradient norm limit, 0 disables
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int epochs = 10;
  int max_steps = 0;  // when positive, overrides epochs
  std::uint64_t seed = 0;
  MatcherMode matcher = MatcherMode::Seq;
  spatial::TaskToggles tasks;
  int per_task = 8;
  double dropout = 0.1;       // residual-branch dropout during training
  double word_dropout = 0.1;  // chance a training token is read as unknown
  int shift = 0;  // max random page translation of a training unit, grid units
  double shuffle = 0;  // chance a fine-tuning unit is fed in random word order
  bool freeze_encoder = false;  // pre-training only
  std::string log_path;         // JSONL training log, empty for none
  std::string dump_path;        // where a batch with a non-finite loss is written
  nn::ModelConfig model;

  int effective_batch() const;
  // Throws ConfigError.
  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Throws ConfigError on an unknown key or a malformed value.
void apply_setting(TrainConfig& config, const std::string& key, const std::string& value);
TrainConfig parse_train_config(const std::string& text, TrainConfig base = {});
// Throws ConfigError when the file cannot be read.
TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base = {});
std::string to_config_text(const TrainConfig& config);

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);
// SHA-1 of the canonical JSON form, excluding log and dump paths.
std::string config_hash(const TrainConfig& config);

}  // namespace docmatch::train
