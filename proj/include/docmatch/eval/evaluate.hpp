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
#include <vector>

#include "docmatch/doc/document.hpp"
#include "docmatch/eval/metrics.hpp"
#include "docmatch/nn/model.hpp"
#include "docmatch/train/config.hpp"
#include "json.hpp"

namespace docmatch::eval {

enum class Condition { Clean, Shuffled };
std::string to_string(Condition c);
Condition parse_condition(const std::string& s);

struct EvalOptions {
  Condition condition = Condition::Clean;
  train::MatcherMode mode = train::MatcherMode::Seq;
  std::uint64_t seed = 0;  // shuffle seed
  bool strict = false;
  // Replaces the model's decisions with gold ones: one-hot similarity rows in
  // bio mode, gold injection into every decoding step in seq mode.
  bool oracle = false;
};

struct TypeScore {
  std::string type;
  Score score;
  friend bool operator==(const TypeScore&, const TypeScore&) = default;
};

struct EvalReport {
  std::string condition;
  std::string matcher;
  int doc_count = 0;
  bool strict = false;
  Score micro;
  std::vector<TypeScore> per_type;  // every schema type, schema order
  nlohmann::json provenance = nlohmann::json::object();
  // Few-shot runs: micro F1 of every fold with mean and sample std.
  std::vector<double> fold_f1;
  double fold_mean = 0;
  double fold_std = 0;
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

nlohmann::json to_json(const EvalReport& r);
EvalReport report_from_json(const nlohmann::json& j);
// One header line and one row per type plus a "micro" row.
std::string to_csv(const EvalReport& r);
// Fixed-width table for terminals.
std::string to_text(const EvalReport& r);

// Mean and sample standard deviation (0 for fewer than two values).
std::pair<double, double> mean_std(const std::vector<double>& values);

// Predictions of `model` on one document.
std::vector<EntityPrediction> predict(nn::Model& model, const doc::Document& doc,
                                      const EvalOptions& options);

// Throws ArgumentError for an empty document list and SchemaError when a gold
// entity type is not in the model's schema.
EvalReport evaluate(nn::Model& model, const std::vector<doc::Document>& docs,
                    const EvalOptions& options, DocumentEntities* predictions = nullptr);

}  // namespace docmatch::eval
