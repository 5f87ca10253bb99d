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
#include <string>

#include "docmatch/doc/schema.hpp"
#include "docmatch/doc/vocab.hpp"
#include "docmatch/nn/params.hpp"
#include "json.hpp"

namespace docmatch::nn {

// Which module sits between the encoder and the target generator.
enum class ResamplerArm { Par, Vanilla, None };

// How BIO mode conditions the generator: all type prompts in one pass, or one
// pass per type.
enum class BioPromptMode { FullSpace, PerPrompt };

std::string to_string(ResamplerArm arm);
ResamplerArm parse_resampler_arm(const std::string& s);
std::string to_string(BioPromptMode mode);
BioPromptMode parse_bio_prompt_mode(const std::string& s);

struct ModelConfig {
  int d = 128;
  int heads = 4;
  int enc_layers = 2;
  int dec_layers = 2;
  int res_layers = 2;
  int ffn_mult = 4;
  int n_queries = 16;
  int max_enc_len = 512;
  int max_dec_len = 128;
  int coord_buckets = 1001;
  int k_buckets = 11;
  ResamplerArm resampler = ResamplerArm::Par;
  BioPromptMode bio_prompts = BioPromptMode::FullSpace;
  // Filled from the vocabulary and schema by Model.
  int vocab = 0;
  int num_types = 0;

  // Throws ConfigError.
  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

// Trainable model: configuration, vocabulary, schema and parameters. The BIO
// and sequential matchers share every trunk parameter.
class Model {
 public:
  Model(ModelConfig config, doc::Vocabulary vocab, doc::EntitySchema schema, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ModelConfig& mutable_config() { return config_; }
  const doc::Vocabulary& vocab() const { return vocab_; }
  const doc::EntitySchema& schema() const { return schema_; }
  const doc::TagSpace& tag_space() const { return tags_; }
  std::uint64_t seed() const { return seed_; }

  ParameterStore& params() { return params_; }
  const ParameterStore& params() const { return params_; }
  Parameter& p(const std::string& name) { return params_.get(name); }

 private:
  void register_parameters();
  void initialize(std::uint64_t seed);

  ModelConfig config_;
  doc::Vocabulary vocab_;
  doc::EntitySchema schema_;
  doc::TagSpace tags_;
  std::uint64_t seed_;
  ParameterStore params_;
};

}  // namespace docmatch::nn
