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

#include "docmatch/nn/model.hpp"

#include <cmath>

#include "docmatch/error.hpp"
#include "docmatch/rng.hpp"

namespace docmatch::nn {

std::string to_string(ResamplerArm arm) {
  switch (arm) {
    case ResamplerArm::Par:
      return "par";
    case ResamplerArm::Vanilla:
      return "vanilla";
    case ResamplerArm::None:
      return "none";
  }
  return "?";
}

ResamplerArm parse_resampler_arm(const std::string& s) {
  if (s == "par") return ResamplerArm::Par;
  if (s == "vanilla") return ResamplerArm::Vanilla;
  if (s == "none") return ResamplerArm::None;
  throw ConfigError("resampler must be one of par, vanilla, none (got '" + s + "')");
}

std::string to_string(BioPromptMode mode) {
  return mode == BioPromptMode::FullSpace ? "full" : "per_prompt";
}

BioPromptMode parse_bio_prompt_mode(const std::string& s) {
  if (s == "full") return BioPromptMode::FullSpace;
  if (s == "per_prompt") return BioPromptMode::PerPrompt;
  throw ConfigError("bio_prompts must be full or per_prompt (got '" + s + "')");
}

void ModelConfig::validate() const {
  const auto positive = [](int v, const char* name) {
    if (v <= 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(d, "d");
  positive(heads, "heads");
  positive(enc_layers, "enc_layers");
  positive(dec_layers, "dec_layers");
  positive(res_layers, "res_layers");
  positive(ffn_mult, "ffn_mult");
  positive(n_queries, "n_queries");
  positive(max_enc_len, "max_enc_len");
  positive(max_dec_len, "max_dec_len");
  positive(k_buckets, "k_buckets");
  if (d % heads != 0) throw ConfigError("d must be divisible by heads");
  if (max_enc_len > 512) throw ConfigError("max_enc_len is capped at 512");
  if (max_dec_len > 128) throw ConfigError("max_dec_len is capped at 128");
  if (coord_buckets != 1001) throw ConfigError("coord_buckets must be 1001 (0..1000 grid)");
}

nlohmann::json to_json(const ModelConfig& c) {
  return {{"d", c.d},
          {"heads", c.heads},
          {"enc_layers", c.enc_layers},
          {"dec_layers", c.dec_layers},
          {"res_layers", c.res_layers},
          {"ffn_mult", c.ffn_mult},
          {"n_queries", c.n_queries},
          {"max_enc_len", c.max_enc_len},
          {"max_dec_len", c.max_dec_len},
          {"coord_buckets", c.coord_buckets},
          {"k_buckets", c.k_buckets},
          {"resampler", to_string(c.resampler)},
          {"bio_prompts", to_string(c.bio_prompts)},
          {"vocab", c.vocab},
          {"num_types", c.num_types}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.d = j.at("d");
    c.heads = j.at("heads");
    c.enc_layers = j.at("enc_layers");
    c.dec_layers = j.at("dec_layers");
    c.res_layers = j.at("res_layers");
    c.ffn_mult = j.at("ffn_mult");
    c.n_queries = j.at("n_queries");
    c.max_enc_len = j.at("max_enc_len");
    c.max_dec_len = j.at("max_dec_len");
    c.coord_buckets = j.at("coord_buckets");
    c.k_buckets = j.at("k_buckets");
    c.resampler = parse_resampler_arm(j.at("resampler"));
    c.bio_prompts = parse_bio_prompt_mode(j.at("bio_prompts"));
    c.vocab = j.at("vocab");
    c.num_types = j.at("num_types");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model config: ") + e.what());
  }
  return c;
}

Model::Model(ModelConfig config, doc::Vocabulary vocab, doc::EntitySchema schema,
             std::uint64_t seed)
    : config_(config),
      vocab_(std::move(vocab)),
      schema_(std::move(schema)),
      tags_(schema_),
      seed_(seed) {
  config_.vocab = vocab_.size();
  config_.num_types = schema_.size();
  config_.validate();
  register_parameters();
  initialize(seed);
}

void Model::register_parameters() {
  const int d = config_.d;
  const int ff = d * config_.ffn_mult;
  auto& ps = params_;
  const auto linear = [&](const std::string& prefix, int in, int out) {
    ps.add(prefix + ".w", in, out);
    ps.add(prefix + ".b", 1, out);
  };
  const auto norm = [&](const std::string& prefix) {
    ps.add(prefix + ".gain", 1, d);
    ps.add(prefix + ".bias", 1, d);
  };
  const auto attention = [&](const std::string& prefix) {
    linear(prefix + ".q", d, d);
    linear(prefix + ".k", d, d);
    linear(prefix + ".v", d, d);
    linear(prefix + ".o", d, d);
  };
  const auto ffn = [&](const std::string& prefix) {
    linear(prefix + ".up", d, ff);
    linear(prefix + ".down", ff, d);
  };

  ps.add("embed.word", config_.vocab, d);
  ps.add("embed.position", config_.max_enc_len, d);
  for (const char* axis : {"x0", "y0", "x1", "y1", "width", "height"}) {
    ps.add(std::string("embed.") + axis, config_.coord_buckets, d);
  }
  for (int l = 0; l < config_.enc_layers; ++l) {
    const std::string p = "encoder." + std::to_string(l);
    norm(p + ".ln_attn");
    attention(p + ".attn");
    norm(p + ".ln_ffn");
    ffn(p + ".ffn");
  }
  norm("encoder.ln");

  ps.add("prompt.task", 4, d);
  ps.add("prompt.type", std::max(1, config_.num_types), d);
  ps.add("prompt.direction", 5, d);
  ps.add("prompt.k", config_.k_buckets, d);
  ps.add("prompt.pad", 1, d);

  ps.add("resampler.queries", config_.n_queries, d);
  for (int l = 0; l < config_.res_layers; ++l) {
    const std::string p = "resampler." + std::to_string(l);
    norm(p + ".ln_query");
    norm(p + ".ln_memory");
    attention(p + ".attn");
    norm(p + ".ln_ffn");
    ffn(p + ".ffn");
  }
  norm("resampler.ln");

  ps.add("generator.tag_queries", tags_.size(), d);
  ps.add("generator.bos", 1, d);
  ps.add("generator.step", config_.max_dec_len, d);
  norm("generator.ln_memory");
  for (int l = 0; l < config_.dec_layers; ++l) {
    const std::string p = "generator." + std::to_string(l);
    norm(p + ".ln_self");
    attention(p + ".self");
    norm(p + ".ln_cross");
    attention(p + ".cross");
    norm(p + ".ln_ffn");
    ffn(p + ".ffn");
  }
  norm("generator.ln");

  linear("matcher.proj", d, d);
  ps.add("matcher.sep", 1, d);
  ps.add("matcher.eos", 1, d);
}

namespace {

constexpr double kOrdinalAmplitude = 0.1;

void add_sinusoid(MatrixD& table, double amplitude) {
  const auto d = static_cast<double>(table.cols());
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
      const double rate = std::pow(10000.0, -static_cast<double>(c - c % 2) / d);
      const double angle = static_cast<double>(r) * rate;
      table(r, c) += amplitude * (c % 2 == 0 ? std::sin(angle) : std::cos(angle));
    }
  }
}

}  // namespace

void Model::initialize(std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_.at(i);
    const auto ends_with = [&p](const std::string& s) {
      return p.name.size() >= s.size() && p.name.compare(p.name.size() - s.size(), s.size(), s) == 0;
    };
    if (ends_with(".gain")) {
      p.value.setOnes();
    } else if (ends_with(".bias") || ends_with(".b")) {
      p.value.setZero();
    } else {
      for (Eigen::Index k = 0; k < p.value.size(); ++k) p.value.data()[k] = rng.normal(0.0, 0.02);
    }
    // Ordinal tables start from a sinusoid so that neighbouring buckets,
    // including ones rarely seen in training, begin close together.
    if (p.name.rfind("embed.", 0) == 0 && p.name != "embed.word") {
      add_sinusoid(p.value, kOrdinalAmplitude);
    }
  }
}

}  // namespace docmatch::nn
