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

#include "docmatch/eval/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "docmatch/error.hpp"
#include "docmatch/hash.hpp"
#include "docmatch/matcher/pipeline.hpp"

namespace docmatch::eval {

std::string to_string(Condition c) { return c == Condition::Clean ? "clean" : "shuffled"; }

Condition parse_condition(const std::string& s) {
  if (s == "clean") return Condition::Clean;
  if (s == "shuffled") return Condition::Shuffled;
  throw ArgumentError("unknown condition '" + s + "' (expected clean or shuffled)");
}

namespace {

nlohmann::json score_json(const Score& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
          {"tp", s.true_positives},   {"predicted", s.predicted}, {"gold", s.gold}};
}

Score score_from(const nlohmann::json& j) {
  Score s;
  s.precision = j.at("precision");
  s.recall = j.at("recall");
  s.f1 = j.at("f1");
  s.true_positives = j.at("tp");
  s.predicted = j.at("predicted");
  s.gold = j.at("gold");
  return s;
}

}  // namespace

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json types = nlohmann::json::array();
  for (const auto& t : r.per_type) {
    auto row = score_json(t.score);
    row["type"] = t.type;
    types.push_back(row);
  }
  nlohmann::json j = {{"condition", r.condition}, {"matcher", r.matcher},
                      {"doc_count", r.doc_count}, {"strict", r.strict},
                      {"micro", score_json(r.micro)}, {"per_type", types},
                      {"provenance", r.provenance}};
  if (!r.fold_f1.empty()) {
    j["folds"] = {{"f1", r.fold_f1}, {"mean", r.fold_mean}, {"std", r.fold_std}};
  }
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.condition = j.at("condition");
    r.matcher = j.at("matcher");
    r.doc_count = j.at("doc_count");
    r.strict = j.at("strict");
    r.micro = score_from(j.at("micro"));
    for (const auto& t : j.at("per_type")) r.per_type.push_back({t.at("type"), score_from(t)});
    r.provenance = j.at("provenance");
    if (j.contains("folds")) {
      r.fold_f1 = j.at("folds").at("f1").get<std::vector<double>>();
      r.fold_mean = j.at("folds").at("mean");
      r.fold_std = j.at("folds").at("std");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("eval report: ") + e.what());
  }
}

std::string to_csv(const EvalReport& r) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "condition,matcher,type,precision,recall,f1,tp,predicted,gold\n";
  const auto row = [&](const std::string& type, const Score& s) {
    out << r.condition << ',' << r.matcher << ',' << type << ',' << s.precision << ',' << s.recall
        << ',' << s.f1 << ',' << s.true_positives << ',' << s.predicted << ',' << s.gold << "\n";
  };
  for (const auto& t : r.per_type) row(t.type, t.score);
  row("micro", r.micro);
  return out.str();
}

std::string to_text(const EvalReport& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%s / %s, %d documents%s\n", r.condition.c_str(), r.matcher.c_str(),
                r.doc_count, r.strict ? ", strict" : "");
  out << line;
  std::snprintf(line, sizeof line, "%-16s %8s %8s %8s %6s %6s %6s\n", "type", "P", "R", "F1", "tp", "pred",
                "gold");
  out << line;
  const auto row = [&](const std::string& type, const Score& s) {
    std::snprintf(line, sizeof line, "%-16s %8.4f %8.4f %8.4f %6d %6d %6d\n", type.c_str(), s.precision,
                  s.recall, s.f1, s.true_positives, s.predicted, s.gold);
    out << line;
  };
  for (const auto& t : r.per_type) row(t.type, t.score);
  row("micro", r.micro);
  if (!r.fold_f1.empty()) {
    std::snprintf(line, sizeof line, "folds: %zu, F1 %.4f \u00b1 %.4f\n", r.fold_f1.size(), r.fold_mean,
                  r.fold_std);
    out << line;
  }
  return out.str();
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::vector<EntityPrediction> predict(nn::Model& model, const doc::Document& doc,
                                      const EvalOptions& options) {
  const auto& tags = model.tag_space();
  if (options.mode == train::MatcherMode::Bio) {
    const nn::MatrixD m = options.oracle
                              ? matcher::one_hot<double>(matcher::bio_labels(doc, tags), tags.size())
                              : matcher::predict_bio(model, doc);
    return compositor::compose_bio(m, doc, tags);
  }
  std::vector<std::vector<int>> sequences;
  if (options.oracle) {
    // Gold injection through the real decoding loop on a model whose trunk
    // is irrelevant to the result.
    sequences = matcher::predict_seq(model, doc, [&](int t) {
      return matcher::gold_injection(matcher::seq_targets(doc, tags.type_id(t)));
    });
  } else {
    sequences = matcher::predict_seq(model, doc);
  }
  std::vector<EntityPrediction> out;
  for (int t = 0; t < tags.num_types(); ++t) {
    auto part = compositor::compose_seq(sequences[static_cast<std::size_t>(t)], doc, t, tags);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

EvalReport evaluate(nn::Model& model, const std::vector<doc::Document>& docs,
                    const EvalOptions& options, DocumentEntities* predictions) {
  if (docs.empty()) throw ArgumentError("evaluation needs at least one document");
  const auto& tags = model.tag_space();
  DocumentEntities preds, gold;
  for (const auto& original : docs) {
    for (const auto& e : original.entities) {
      tags.type_index(e.type);  // throws SchemaError for a foreign type
    }
    const doc::Document d = options.condition == Condition::Shuffled
                                ? shuffle_words(original, shuffle_seed(options.seed, original.doc_id))
                                : original;
    preds.push_back(predict(model, d, options));
    gold.push_back(compositor::gold_entities(d, tags));
  }
  EvalReport r;
  r.condition = to_string(options.condition);
  r.matcher = train::to_string(options.mode);
  r.doc_count = static_cast<int>(docs.size());
  r.strict = options.strict;
  r.micro = field_f1(preds, gold, options.strict);
  for (int t = 0; t < tags.num_types(); ++t) {
    r.per_type.push_back({tags.type_id(t), field_f1_for_type(preds, gold, tags.type_id(t), options.strict)});
  }
  r.provenance = {{"seed", options.seed},
                  {"oracle", options.oracle},
                  {"model_config_hash", sha1_hex(nn::to_json(model.config()).dump())},
                  {"params_hash", model.params().hash()}};
  if (predictions) *predictions = std::move(preds);
  return r;
}

}  // namespace docmatch::eval
