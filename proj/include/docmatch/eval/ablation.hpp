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

#include <string>
#include <vector>

#include "docmatch/doc/document.hpp"
#include "docmatch/doc/schema.hpp"
#include "docmatch/doc/vocab.hpp"
#include "docmatch/eval/evaluate.hpp"
#include "docmatch/nn/model.hpp"
#include "docmatch/train/config.hpp"
#include "json.hpp"

namespace docmatch::eval {

// One row of an ablation table.
struct AblationArm {
  std::string name;
  bool pretrain = false;
  nn::ResamplerArm resampler = nn::ResamplerArm::Par;
  spatial::TaskToggles tasks;
};

// {no pre-training, pre-training} x {par, vanilla, none}.
std::vector<AblationArm> pretrain_resampler_grid();
// Every subset of {MTF, SOD, SAD}; the empty subset is the no-pre-training
// baseline.
std::vector<AblationArm> task_subset_grid();
// Throws ArgumentError for a name other than "pt-resampler" or "tasks".
std::vector<AblationArm> ablation_grid(const std::string& name);

struct AblationData {
  std::vector<doc::Document> pretrain;
  std::vector<doc::Document> train;
  std::vector<doc::Document> test;
  doc::Vocabulary vocab;
  doc::EntitySchema schema;
};

struct AblationRow {
  AblationArm arm;
  bool ok = false;
  std::string error;  // set when the arm failed
  Score micro;
  std::uint64_t seed = 0;
  int pretrain_steps = 0;
  int finetune_steps = 0;
};

struct AblationTable {
  std::vector<AblationRow> rows;
};

// Trains and evaluates every arm from the same model seed and training
// seeds. An arm that throws is recorded as failed and the run goes on.
// The model settings come from `finetune_config`; each arm overrides the
// resampler and the pre-training task toggles.
AblationTable run_ablation(const std::vector<AblationArm>& arms, const train::TrainConfig& pretrain_config,
                           const train::TrainConfig& finetune_config, const AblationData& data,
                           const EvalOptions& eval_options);

std::string to_text(const AblationTable& table);
std::string to_csv(const AblationTable& table);
nlohmann::json to_json(const AblationTable& table);
// Only precision, recall and F1 of the micro score survive the round trip.
// Throws nlohmann::json exceptions on a malformed table.
AblationTable ablation_from_json(const nlohmann::json& j);

}  // namespace docmatch::eval
