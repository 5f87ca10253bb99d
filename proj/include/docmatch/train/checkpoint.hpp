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
#include <memory>
#include <string>
#include <vector>

#include "docmatch/doc/document.hpp"
#include "docmatch/nn/model.hpp"
#include "json.hpp"

namespace docmatch::train {

inline constexpr int kCheckpointVersion = 1;

// Provenance stored next to the parameters as meta.json.
struct CheckpointMeta {
  int version = kCheckpointVersion;
  std::string phase;
  std::uint64_t seed = 0;
  int steps = 0;
  std::string config_hash;
  std::string corpus_hash;
  nlohmann::json train_config;  // as written by to_json(TrainConfig)
};

// Git blob hash of the corpus in its JSONL form.
std::string corpus_hash(const std::vector<doc::Document>& docs);

// Directory layout: params.bin, meta.json (meta plus model config and
// parameter hash), vocab.txt, schema.json.
void save_checkpoint(const nn::Model& model, const CheckpointMeta& meta,
                     const std::filesystem::path& dir);

struct Checkpoint {
  std::unique_ptr<nn::Model> model;
  CheckpointMeta meta;
};

// Throws CheckpointError on a missing file, a version mismatch or a tensor
// whose shape disagrees with the stored model config.
Checkpoint load_checkpoint(const std::filesystem::path& dir);

// Copies every stored tensor into the same-named parameter of `model`;
// parameters absent from the checkpoint keep their values. Throws
// CheckpointError naming the tensor on a shape mismatch.
void load_parameters(nn::Model& model, const std::filesystem::path& dir);

}  // namespace docmatch::train
