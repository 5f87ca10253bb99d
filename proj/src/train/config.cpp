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

#include "docmatch/train/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "docmatch/error.hpp"
#include "docmatch/hash.hpp"

namespace docmatch::train {

std::string to_string(Phase p) { return p == Phase::Pretrain ? "pretrain" : "finetune"; }

Phase parse_phase(const std::string& s) {
  if (s == "pretrain") return Phase::Pretrain;
  if (s == "finetune") return Phase::Finetune;
  throw ConfigError("unknown phase '" + s + "' (expected pretrain or finetune)");
}

std::string to_string(MatcherMode m) { return m == MatcherMode::Bio ? "bio" : "seq"; }

MatcherMode parse_matcher_mode(const std::string& s) {
  if (s == "bio") return MatcherMode::Bio;
  if (s == "seq") return MatcherMode::Seq;
  throw ConfigError("unknown matcher '" + s + "' (expected bio or seq)");
}

int TrainConfig::effective_batch() const {
  if (batch > 0) return batch;
  return phase == Phase::Pretrain ? 32 : 4;
}

void TrainConfig::validate() const {
  if (!(lr > 0)) throw ConfigError("lr must be positive");
  if (weight_decay < 0) throw ConfigError("weight_decay must be non-negative");
  if (batch < 0) throw ConfigError("batch must be positive");
  if (warmup < 0 || warmup >= 1) throw ConfigError("warmup must lie in [0, 1)");
  if (clip < 0) throw ConfigError("clip must be non-negative");
  if (epochs <= 0 && max_steps <= 0) throw ConfigError("epochs or max_steps must be positive");
  if (max_steps < 0) throw ConfigError("max_steps must be non-negative");
  if (per_task <= 0) throw ConfigError("per_task must be positive");
  if (dropout < 0 || dropout >= 1) throw ConfigError("dropout must lie in [0, 1)");
  if (word_dropout < 0 || word_dropout >= 1) throw ConfigError("word_dropout must lie in [0, 1)");
  if (shift < 0 || shift > 500) throw ConfigError("shift must lie in [0, 500]");
  if (shuffle < 0 || shuffle > 1) throw ConfigError("shuffle must lie in [0, 1]");
  if (phase == Phase::Pretrain && !tasks.any()) {
    throw ConfigError("pre-training needs at least one of mtf, sod, sad");
  }
  model.validate();
}

namespace {

template <typename N>
N number(const std::string& key, const std::string& value) {
  N out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError("bad value '" + value + "' for " + key);
  return out;
}

bool boolean(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("bad value '" + value + "' for " + key + " (expected true or false)");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_setting(TrainConfig& c, const std::string& key, const std::string& value) {
  using Setter = std::function<void(const std::string&)>;
  const auto integer = [&key](int& field) {
    return Setter([&field, &key](const std::string& v) { field = number<int>(key, v); });
  };
  const auto real = [&key](double& field) {
    return Setter([&field, &key](const std::string& v) { field = number<double>(key, v); });
  };
  const auto flag = [&key](bool& field) {
    return Setter([&field, &key](const std::string& v) { field = boolean(key, v); });
  };
  const std::map<std::string, Setter> setters = {
      {"phase", [&](const std::string& v) { c.phase = parse_phase(v); }},
      {"lr", real(c.lr)},
      {"weight_decay", real(c.weight_decay)},
      {"batch", integer(c.batch)},
      {"warmup", real(c.warmup)},
      {"clip", real(c.clip)},
      {"beta1", real(c.beta1)},
      {"beta2", real(c.beta2)},
      {"adam_eps", real(c.adam_eps)},
      {"epochs", integer(c.epochs)},
      {"max_steps", integer(c.max_steps)},
      {"seed", [&](const std::string& v) { c.seed = number<std::uint64_t>(key, v); }},
      {"matcher", [&](const std::string& v) { c.matcher = parse_matcher_mode(v); }},
      {"mtf", flag(c.tasks.mtf)},
      {"sod", flag(c.tasks.sod)},
      {"sad", flag(c.tasks.sad)},
      {"per_task", integer(c.per_task)},
      {"dropout", real(c.dropout)},
      {"word_dropout", real(c.word_dropout)},
      {"shift", integer(c.shift)},
      {"shuffle", real(c.shuffle)},
      {"freeze_encoder", flag(c.freeze_encoder)},
      {"log_path", [&](const std::string& v) { c.log_path = v; }},
      {"dump_path", [&](const std::string& v) { c.dump_path = v; }},
      {"d", integer(c.model.d)},
      {"heads", integer(c.model.heads)},
      {"enc_layers", integer(c.model.enc_layers)},
      {"dec_layers", integer(c.model.dec_layers)},
      {"res_layers", integer(c.model.res_layers)},
      {"ffn_mult", integer(c.model.ffn_mult)},
      {"n_queries", integer(c.model.n_queries)},
      {"max_dec_len", integer(c.model.max_dec_len)},
      {"resampler",
       [&](const std::string& v) {
         try {
           c.model.resampler = nn::parse_resampler_arm(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       }},
      {"bio_prompts",
       [&](const std::string& v) {
         try {
           c.model.bio_prompts = nn::parse_bio_prompt_mode(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(value);
}

TrainConfig parse_train_config(const std::string& text, TrainConfig base) {
  std::istringstream in(text);
  std::string line;
  int number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number_of_line) + ": expected key = value");
    }
    try {
      apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(number_of_line) + ": " + e.what());
    }
  }
  return base;
}

TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_train_config(ss.str(), std::move(base));
}

std::string to_config_text(const TrainConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "phase = " << to_string(c.phase) << "\n"
      << "lr = " << c.lr << "\n"
      << "weight_decay = " << c.weight_decay << "\n"
      << "batch = " << c.batch << "\n"
      << "warmup = " << c.warmup << "\n"
      << "clip = " << c.clip << "\n"
      << "beta1 = " << c.beta1 << "\n"
      << "beta2 = " << c.beta2 << "\n"
      << "adam_eps = " << c.adam_eps << "\n"
      << "epochs = " << c.epochs << "\n"
      << "max_steps = " << c.max_steps << "\n"
      << "seed = " << c.seed << "\n"
      << "matcher = " << to_string(c.matcher) << "\n"
      << "mtf = " << (c.tasks.mtf ? "true" : "false") << "\n"
      << "sod = " << (c.tasks.sod ? "true" : "false") << "\n"
      << "sad = " << (c.tasks.sad ? "true" : "false") << "\n"
      << "per_task = " << c.per_task << "\n"
      << "dropout = " << c.dropout << "\n"
      << "word_dropout = " << c.word_dropout << "\n"
      << "shift = " << c.shift << "\n"
      << "shuffle = " << c.shuffle << "\n"
      << "freeze_encoder = " << (c.freeze_encoder ? "true" : "false") << "\n"
      << "d = " << c.model.d << "\n"
      << "heads = " << c.model.heads << "\n"
      << "enc_layers = " << c.model.enc_layers << "\n"
      << "dec_layers = " << c.model.dec_layers << "\n"
      << "res_layers = " << c.model.res_layers << "\n"
      << "ffn_mult = " << c.model.ffn_mult << "\n"
      << "n_queries = " << c.model.n_queries << "\n"
      << "max_dec_len = " << c.model.max_dec_len << "\n"
      << "resampler = " << nn::to_string(c.model.resampler) << "\n"
      << "bio_prompts = " << nn::to_string(c.model.bio_prompts) << "\n";
  if (!c.log_path.empty()) out << "log_path = " << c.log_path << "\n";
  if (!c.dump_path.empty()) out << "dump_path = " << c.dump_path << "\n";
  return out.str();
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"phase", to_string(c.phase)},
          {"lr", c.lr},
          {"weight_decay", c.weight_decay},
          {"batch", c.batch},
          {"warmup", c.warmup},
          {"clip", c.clip},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"adam_eps", c.adam_eps},
          {"epochs", c.epochs},
          {"max_steps", c.max_steps},
          {"seed", c.seed},
          {"matcher", to_string(c.matcher)},
          {"tasks", {{"mtf", c.tasks.mtf}, {"sod", c.tasks.sod}, {"sad", c.tasks.sad}}},
          {"per_task", c.per_task},
          {"dropout", c.dropout},
          {"word_dropout", c.word_dropout},
          {"shift", c.shift},
          {"shuffle", c.shuffle},
          {"freeze_encoder", c.freeze_encoder},
          {"log_path", c.log_path},
          {"dump_path", c.dump_path},
          {"model", nn::to_json(c.model)}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  try {
    TrainConfig c;
    c.phase = parse_phase(j.at("phase").get<std::string>());
    c.lr = j.at("lr");
    c.weight_decay = j.at("weight_decay");
    c.batch = j.at("batch");
    c.warmup = j.at("warmup");
    c.clip = j.at("clip");
    c.beta1 = j.at("beta1");
    c.beta2 = j.at("beta2");
    c.adam_eps = j.at("adam_eps");
    c.epochs = j.at("epochs");
    c.max_steps = j.at("max_steps");
    c.seed = j.at("seed");
    c.matcher = parse_matcher_mode(j.at("matcher").get<std::string>());
    c.tasks.mtf = j.at("tasks").at("mtf");
    c.tasks.sod = j.at("tasks").at("sod");
    c.tasks.sad = j.at("tasks").at("sad");
    c.per_task = j.at("per_task");
    c.dropout = j.at("dropout");
    c.word_dropout = j.at("word_dropout");
    c.shift = j.value("shift", 0);
    c.shuffle = j.value("shuffle", 0.0);
    c.freeze_encoder = j.at("freeze_encoder");
    c.log_path = j.value("log_path", "");
    c.dump_path = j.value("dump_path", "");
    c.model = nn::model_config_from_json(j.at("model"));
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("train config: ") + e.what());
  }
}

std::string config_hash(const TrainConfig& config) {
  auto j = to_json(config);
  j.erase("log_path");
  j.erase("dump_path");
  return sha1_hex(j.dump());
}

}  // namespace docmatch::train
