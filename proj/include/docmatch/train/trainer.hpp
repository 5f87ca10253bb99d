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

#include <map>
#include <string>
#include <vector>

#include "docmatch/doc/document.hpp"
#include "docmatch/nn/model.hpp"
#include "docmatch/train/config.hpp"
#include "json.hpp"

namespace docmatch::train {

struct LogEntry {
  int step = 0;
  double loss = 0;  // mean per-document loss of the batch
  double lr = 0;
  std::map<std::string, int> task_mix;  // prompts per task in the batch
};

nlohmann::json to_json(const LogEntry& e);

struct TrainResult {
  int steps = 0;
  std::vector<LogEntry> log;
  std::vector<double> epoch_loss;  // mean per-document loss per pass over the data
};

// Optimizer steps for `items` training units: max_steps when set, otherwise
// epochs * ceil(items / batch).
int planned_steps(const TrainConfig& config, std::size_t items);

// Spatial-instruction pre-training with the pointer loss. Every document of a
// batch contributes per_task instructions for each enabled task. Throws
// ConfigError when no task is enabled and ValidationError for a document
// outside the admitted size window.
TrainResult pretrain(nn::Model& model, const std::vector<doc::Document>& corpus,
                     const TrainConfig& config);

// Extraction fine-tuning. Every document of a batch is asked for every schema
// type (seq) or tagged once over the full tag space (bio). Throws
// ArgumentError for an empty training set.
TrainResult finetune(nn::Model& model, const std::vector<doc::Document>& train_docs,
                     const TrainConfig& config);

}  // namespace docmatch::train
