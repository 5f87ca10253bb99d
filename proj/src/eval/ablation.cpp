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

#include "docmatch/eval/ablation.hpp"

#include <cstdio>
#include <sstream>

#include "docmatch/error.hpp"
#include "docmatch/train/trainer.hpp"

namespace docmatch::eval {

namespace {

std::string task_label(const spatial::TaskToggles& t) {
  std::string s;
  const auto add = [&s](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += "+";
    s += name;
  };
  add(t.mtf, "MTF");
  add(t.sod, "SOD");
  add(t.sad, "SAD");
  return s.empty() ? "-" : s;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::vector<AblationArm> pretrain_resampler_grid() {
  std::vector<AblationArm> arms;
  for (const bool pt : {false, true}) {
    for (const auto r : {nn::ResamplerArm::Par, nn::ResamplerArm::Vanilla, nn::ResamplerArm::None}) {
      AblationArm a;
      a.pretrain = pt;
      a.resampler = r;
      a.name = std::string(pt ? "pt" : "no-pt") + "/" + nn::to_string(r);
      arms.push_back(a);
    }
  }
  return arms;
}

std::vector<AblationArm> task_subset_grid() {
  std::vector<AblationArm> arms;
  for (int mask = 0; mask < 8; ++mask) {
    AblationArm a;
    a.tasks = {(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
    a.pretrain = mask != 0;
    a.name = mask == 0 ? "baseline" : task_label(a.tasks);
    arms.push_back(a);
  }
  return arms;
}

std::vector<AblationArm> ablation_grid(const std::string& name) {
  if (name == "pt-resampler") return pretrain_resampler_grid();
  if (name == "tasks") return task_subset_grid();
  throw ArgumentError("unknown ablation grid '" + name + "' (expected pt-resampler or tasks)");
}

AblationTable run_ablation(const std::vector<AblationArm>& arms, const train::TrainConfig& pretrain_config,
                           const train::TrainConfig& finetune_config, const AblationData& data,
                           const EvalOptions& eval_options) {
  AblationTable table;
  for (const auto& arm : arms) {
    AblationRow row;
    row.arm = arm;
    row.seed = finetune_config.seed;
    try {
      nn::ModelConfig mc = finetune_config.model;
      mc.resampler = arm.resampler;
      nn::Model model(mc, data.vocab, data.schema, finetune_config.seed);
      if (arm.pretrain) {
        train::TrainConfig pc = pretrain_config;
        pc.phase = train::Phase::Pretrain;
        pc.tasks = arm.tasks;
        pc.model = mc;
        row.pretrain_steps = train::pretrain(model, data.pretrain, pc).steps;
      }
      train::TrainConfig fc = finetune_config;
      fc.phase = train::Phase::Finetune;
      fc.model = mc;
      row.finetune_steps = train::finetune(model, data.train, fc).steps;
      EvalOptions eo = eval_options;
      eo.mode = fc.matcher;
      row.micro = evaluate(model, data.test, eo).micro;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string to_text(const AblationTable& table) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %-3s %-8s %-12s %8s %8s %8s %6s\n", "arm", "PT", "resamp",
                "tasks", "P", "R", "F1", "seed");
  out << line;
  for (const auto& r : table.rows) {
    const std::string tasks = r.arm.pretrain ? task_label(r.arm.tasks) : "-";
    if (r.ok) {
      std::snprintf(line, sizeof line, "%-18s %-3s %-8s %-12s %8.4f %8.4f %8.4f %6llu\n",
                    r.arm.name.c_str(), r.arm.pretrain ? "yes" : "no",
                    nn::to_string(r.arm.resampler).c_str(), tasks.c_str(), r.micro.precision,
                    r.micro.recall, r.micro.f1, static_cast<unsigned long long>(r.seed));
    } else {
      std::snprintf(line, sizeof line, "%-18s %-3s %-8s %-12s %26s %6llu  (%s)\n", r.arm.name.c_str(),
                    r.arm.pretrain ? "yes" : "no", nn::to_string(r.arm.resampler).c_str(), tasks.c_str(),
                    "FAILED", static_cast<unsigned long long>(r.seed), r.error.c_str());
    }
    out << line;
  }
  return out.str();
}

std::string to_csv(const AblationTable& table) {
  std::ostringstream out;
  out << "arm,pretrain,resampler,tasks,status,precision,recall,f1,seed\n";
  for (const auto& r : table.rows) {
    out << r.arm.name << ',' << (r.arm.pretrain ? 1 : 0) << ',' << nn::to_string(r.arm.resampler) << ','
        << (r.arm.pretrain ? task_label(r.arm.tasks) : "-") << ',' << (r.ok ? "ok" : "failed") << ',';
    if (r.ok) {
      out << fixed(r.micro.precision) << ',' << fixed(r.micro.recall) << ',' << fixed(r.micro.f1);
    } else {
      out << ",,";
    }
    out << ',' << r.seed << "\n";
  }
  return out.str();
}

nlohmann::json to_json(const AblationTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json j = {{"arm", r.arm.name},
                        {"pretrain", r.arm.pretrain},
                        {"resampler", nn::to_string(r.arm.resampler)},
                        {"tasks", r.arm.pretrain ? task_label(r.arm.tasks) : "-"},
                        {"mtf", r.arm.tasks.mtf},
                        {"sod", r.arm.tasks.sod},
                        {"sad", r.arm.tasks.sad},
                        {"ok", r.ok},
                        {"seed", r.seed},
                        {"pretrain_steps", r.pretrain_steps},
                        {"finetune_steps", r.finetune_steps}};
    if (r.ok) {
      j["precision"] = r.micro.precision;
      j["recall"] = r.micro.recall;
      j["f1"] = r.micro.f1;
    } else {
      j["error"] = r.error;
    }
    rows.push_back(std::move(j));
  }
  return {{"rows", rows}};
}

AblationTable ablation_from_json(const nlohmann::json& j) {
  AblationTable table;
  for (const auto& jr : j.at("rows")) {
    AblationRow r;
    r.arm.name = jr.at("arm");
    r.arm.pretrain = jr.at("pretrain");
    r.arm.resampler = nn::parse_resampler_arm(jr.at("resampler"));
    r.arm.tasks = {jr.at("mtf"), jr.at("sod"), jr.at("sad")};
    r.ok = jr.at("ok");
    r.seed = jr.at("seed");
    r.pretrain_steps = jr.at("pretrain_steps");
    r.finetune_steps = jr.at("finetune_steps");
    if (r.ok) {
      r.micro.precision = jr.at("precision");
      r.micro.recall = jr.at("recall");
      r.micro.f1 = jr.at("f1");
    } else {
      r.error = jr.at("error");
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace docmatch::eval
