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

#include "docmatch/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "docmatch/doc/jsonl.hpp"
#include "docmatch/doc/synth.hpp"
#include "docmatch/error.hpp"
#include "docmatch/eval/ablation.hpp"
#include "docmatch/eval/evaluate.hpp"
#include "docmatch/eval/plot.hpp"
#include "docmatch/train/checkpoint.hpp"
#include "docmatch/train/episodes.hpp"
#include "docmatch/train/trainer.hpp"
#include "json.hpp"

namespace docmatch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigArgs {
  std::string path;
  std::vector<std::string> sets;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args, const std::string& prefix = "") {
  cmd->add_option("--" + prefix + "config", args.path, "Training config file (key = value lines)");
  cmd->add_option("--" + prefix + "set", args.sets, "Override one config key, as key=value (repeatable)");
}

train::TrainConfig resolve_config(const ConfigArgs& args, train::TrainConfig base) {
  if (!args.path.empty()) {
    if (!fs::is_regular_file(args.path)) throw UsageError("config file not found: " + args.path);
    base = train::load_train_config(args.path, base);
  }
  for (const auto& s : args.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
    train::apply_setting(base, s.substr(0, eq), s.substr(eq + 1));
  }
  base.validate();
  return base;
}

struct VocabArgs {
  std::string vocab;
  std::string schema;
};

void add_vocab_options(CLI::App* cmd, VocabArgs& args) {
  cmd->add_option("--vocab", args.vocab, "Vocabulary file, one word per line (default: synthetic vocabulary)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--schema", args.schema, "Entity schema JSON (default: synthetic schema)")
      ->check(CLI::ExistingFile);
}

doc::Vocabulary vocab_of(const VocabArgs& a) {
  return a.vocab.empty() ? doc::synthetic_vocabulary() : doc::Vocabulary::load(a.vocab);
}

doc::EntitySchema schema_of(const VocabArgs& a) {
  return a.schema.empty() ? doc::synthetic_schema() : doc::EntitySchema::load(a.schema);
}

// A fresh model from the config, or the checkpoint at `init` with the
// config's model section replaced by the stored one.
std::unique_ptr<nn::Model> make_model(const std::string& init, train::TrainConfig& config, const VocabArgs& va) {
  if (!init.empty()) {
    auto ckpt = train::load_checkpoint(init);
    config.model = ckpt.model->config();
    return std::move(ckpt.model);
  }
  return std::make_unique<nn::Model>(config.model, vocab_of(va), schema_of(va), config.seed);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + path.string());
  f << text;
  if (!f) throw ArgumentError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void save_trained(const nn::Model& model, const train::TrainConfig& config, const train::TrainResult& result,
                  const std::vector<doc::Document>& corpus, const std::string& out_dir) {
  train::CheckpointMeta meta;
  meta.phase = train::to_string(config.phase);
  meta.seed = config.seed;
  meta.steps = result.steps;
  meta.config_hash = train::config_hash(config);
  meta.corpus_hash = train::corpus_hash(corpus);
  meta.train_config = train::to_json(config);
  train::save_checkpoint(model, meta, out_dir);
}

void print_training(std::ostream& out, const train::TrainResult& r, const std::string& dir) {
  out << "steps: " << r.steps << "\n";
  if (!r.epoch_loss.empty()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", r.epoch_loss.back());
    out << "final epoch loss: " << buf << "\n";
  }
  out << "checkpoint: " << dir << "\n";
}

// Pools per-type and micro counts over fold reports.
eval::EvalReport pool_folds(const std::vector<eval::EvalReport>& folds) {
  eval::EvalReport r = folds.front();
  int tp = 0, pred = 0, gold = 0;
  for (auto& t : r.per_type) t.score = {};
  std::vector<std::array<int, 3>> counts(r.per_type.size(), {0, 0, 0});
  for (const auto& f : folds) {
    tp += f.micro.true_positives;
    pred += f.micro.predicted;
    gold += f.micro.gold;
    for (std::size_t i = 0; i < f.per_type.size() && i < counts.size(); ++i) {
      counts[i][0] += f.per_type[i].score.true_positives;
      counts[i][1] += f.per_type[i].score.predicted;
      counts[i][2] += f.per_type[i].score.gold;
    }
    r.fold_f1.push_back(f.micro.f1);
  }
  r.micro = eval::make_score(tp, pred, gold);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    r.per_type[i].score = eval::make_score(counts[i][0], counts[i][1], counts[i][2]);
  }
  std::tie(r.fold_mean, r.fold_std) = eval::mean_std(r.fold_f1);
  return r;
}

std::string fewshot_text(const json& runs) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-6s %-6s %s\n", "shots", "folds", "F1 (mean ± std)");
  out << line;
  for (const auto& run : runs) {
    const auto r = eval::report_from_json(run.at("report"));
    std::snprintf(line, sizeof line, "%-6d %-6zu %.4f ± %.4f\n", run.at("shots").get<int>(), r.fold_f1.size(),
                  r.fold_mean, r.fold_std);
    out << line;
  }
  return out.str();
}

std::string fewshot_csv(const json& runs) {
  std::ostringstream out;
  out << "shots,folds,mean_f1,std_f1\n";
  for (const auto& run : runs) {
    const auto r = eval::report_from_json(run.at("report"));
    char line[96];
    std::snprintf(line, sizeof line, "%d,%zu,%.6f,%.6f\n", run.at("shots").get<int>(), r.fold_f1.size(),
                  r.fold_mean, r.fold_std);
    out << line;
  }
  return out.str();
}

// Renders one input of the report command; returns the files written.
std::vector<fs::path> render_report(const fs::path& input, const fs::path& out_dir, std::ostream& out) {
  const std::string stem = input.stem().string();
  const auto target = [&](const std::string& suffix) { return out_dir / (stem + suffix); };
  std::vector<fs::path> written;
  const auto emit = [&](const fs::path& path, const std::string& text) {
    write_text(path, text);
    written.push_back(path);
  };

  if (input.extension() == ".jsonl") {
    // Training log: one JSON object per optimizer step.
    eval::Series loss{"batch loss", {}};
    std::istringstream lines(read_text(input));
    std::string line;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      const auto j = json::parse(line);
      loss.points.emplace_back(j.at("step").get<double>(), j.at("loss").get<double>());
    }
    emit(target(".loss.svg"), eval::line_chart_svg({loss}, "Training loss: " + stem, "step", "loss"));
    out << stem << ": " << loss.points.size() << " logged steps\n";
    return written;
  }

  const json j = json::parse(read_text(input));
  if (j.contains("rows")) {
    const auto table = eval::ablation_from_json(j);
    const std::string text = eval::to_text(table);
    emit(target(".txt"), text);
    emit(target(".csv"), eval::to_csv(table));
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& r : table.rows) {
      labels.push_back(r.arm.name);
      values.push_back(r.ok ? r.micro.f1 : 0.0);
    }
    emit(target(".f1.svg"), eval::bar_chart_svg(labels, values, "Ablation F1: " + stem));
    out << text;
  } else if (j.contains("runs")) {
    const std::string text = fewshot_text(j.at("runs"));
    emit(target(".txt"), text);
    emit(target(".csv"), fewshot_csv(j.at("runs")));
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& run : j.at("runs")) {
      labels.push_back(std::to_string(run.at("shots").get<int>()) + "-shot");
      values.push_back(eval::report_from_json(run.at("report")).fold_mean);
    }
    emit(target(".f1.svg"), eval::bar_chart_svg(labels, values, "Few-shot mean F1: " + stem));
    out << text;
  } else if (j.contains("micro")) {
    const auto r = eval::report_from_json(j);
    const std::string text = eval::to_text(r);
    emit(target(".txt"), text);
    emit(target(".csv"), eval::to_csv(r));
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& t : r.per_type) {
      labels.push_back(t.type);
      values.push_back(t.score.f1);
    }
    labels.push_back("micro");
    values.push_back(r.micro.f1);
    emit(target(".f1.svg"), eval::bar_chart_svg(labels, values, "Field F1: " + stem));
    out << text;
  } else {
    throw ArgumentError(input.string() + " is not an eval report, few-shot result, ablation table or training log");
  }
  return written;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatial-prompt key information extraction: data, training, evaluation and reports", "docmatch"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic document corpus as JSONL");
  doc::SynthConfig sc;
  std::uint64_t synth_seed = 0;
  std::string synth_out, vocab_out, schema_out;
  std::vector<double> mix;
  synth->add_option("--count", sc.count, "Number of documents")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--jitter", sc.jitter, "Max per-box offset in pixels")->capture_default_str();
  synth->add_option("--min-items", sc.min_items, "Min line items per table document")->capture_default_str();
  synth->add_option("--max-items", sc.max_items, "Max line items per table document")->capture_default_str();
  synth->add_option("--mix", mix, "Layout weights horizontal,vertical,table")->delimiter(',')->expected(3);
  synth->add_option("--prefix", sc.id_prefix, "Document id prefix")->capture_default_str();
  synth->add_option("--out", synth_out, "Output JSONL path")->required();
  synth->add_option("--vocab-out", vocab_out, "Also write the synthetic vocabulary here");
  synth->add_option("--schema-out", schema_out, "Also write the synthetic schema here");

  // pretrain
  auto* pre = app.add_subcommand("pretrain", "Spatial-instruction pre-training of the shared trunk");
  ConfigArgs pre_cfg;
  VocabArgs pre_voc;
  std::string pre_data, pre_out, pre_init;
  add_config_options(pre, pre_cfg);
  add_vocab_options(pre, pre_voc);
  pre->add_option("--data", pre_data, "Pre-training corpus (JSONL)")->required()->check(CLI::ExistingFile);
  pre->add_option("--init", pre_init, "Start from this checkpoint directory")->check(CLI::ExistingDirectory);
  pre->add_option("--out", pre_out, "Checkpoint directory to write")->required();

  // finetune
  auto* fine = app.add_subcommand("finetune", "Extraction fine-tuning with the seq or bio matcher");
  ConfigArgs fine_cfg;
  VocabArgs fine_voc;
  std::string fine_data, fine_out, fine_init;
  add_config_options(fine, fine_cfg);
  add_vocab_options(fine, fine_voc);
  fine->add_option("--train", fine_data, "Training documents (JSONL)")->required()->check(CLI::ExistingFile);
  fine->add_option("--init", fine_init, "Start from this checkpoint directory, e.g. a pre-trained trunk")
      ->check(CLI::ExistingDirectory);
  fine->add_option("--out", fine_out, "Checkpoint directory to write")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "Field-level F1 of a checkpoint on a labelled corpus");
  std::string ev_ckpt, ev_data, ev_out, ev_csv, ev_condition = "clean", ev_matcher = "seq";
  eval::EvalOptions ev_opts;
  ev->add_option("--checkpoint", ev_ckpt, "Checkpoint directory")->required()->check(CLI::ExistingDirectory);
  ev->add_option("--data", ev_data, "Evaluation documents (JSONL)")->required()->check(CLI::ExistingFile);
  ev->add_option("--condition", ev_condition, "clean or shuffled")
      ->capture_default_str()
      ->check(CLI::IsMember({"clean", "shuffled"}));
  ev->add_option("--matcher", ev_matcher, "seq or bio")->capture_default_str()->check(CLI::IsMember({"seq", "bio"}));
  ev->add_option("--seed", ev_opts.seed, "Shuffle seed")->capture_default_str();
  ev->add_flag("--strict", ev_opts.strict, "Also require the token span to match");
  ev->add_flag("--oracle", ev_opts.oracle, "Replace model decisions with gold ones (pipeline check)");
  ev->add_option("--out", ev_out, "Write the report JSON here instead of stdout");
  ev->add_option("--csv", ev_csv, "Also write the report as CSV");

  // fewshot
  auto* few = app.add_subcommand("fewshot", "Repeated few-shot fine-tuning and evaluation");
  ConfigArgs few_cfg;
  VocabArgs few_voc;
  std::string few_train, few_test, few_init, few_out, few_condition = "clean";
  std::vector<int> shots{1, 2, 5, 10};
  int folds = 5;
  std::optional<std::uint64_t> few_seed;
  add_config_options(few, few_cfg);
  add_vocab_options(few, few_voc);
  few->add_option("--train", few_train, "Pool the episodes are drawn from (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  few->add_option("--test", few_test, "Evaluation documents (JSONL)")->required()->check(CLI::ExistingFile);
  few->add_option("--init", few_init, "Checkpoint every fold starts from")->check(CLI::ExistingDirectory);
  few->add_option("--shots", shots, "Comma-separated shot counts")->delimiter(',')->capture_default_str();
  few->add_option("--folds", folds, "Episodes per shot count")->capture_default_str()->check(CLI::PositiveNumber);
  few->add_option("--episode-seed", few_seed, "Episode sampling seed (default: config seed)");
  few->add_option("--condition", few_condition, "clean or shuffled")
      ->capture_default_str()
      ->check(CLI::IsMember({"clean", "shuffled"}));
  few->add_option("--out", few_out, "Write the result JSON here");

  // ablate
  auto* abl = app.add_subcommand("ablate", "Train and evaluate every arm of an ablation grid");
  ConfigArgs abl_cfg, abl_pre_cfg;
  VocabArgs abl_voc;
  std::string grid, abl_pre_data, abl_train, abl_test, abl_out, abl_condition = "clean";
  abl->add_option("--grid", grid, "pt-resampler (2x3 arms) or tasks (8 task subsets)")
      ->required()
      ->check(CLI::IsMember({"pt-resampler", "tasks"}));
  add_config_options(abl, abl_cfg);
  add_config_options(abl, abl_pre_cfg, "pretrain-");
  add_vocab_options(abl, abl_voc);
  abl->add_option("--pretrain-data", abl_pre_data, "Pre-training corpus (JSONL)")->check(CLI::ExistingFile);
  abl->add_option("--train", abl_train, "Fine-tuning documents (JSONL)")->required()->check(CLI::ExistingFile);
  abl->add_option("--test", abl_test, "Evaluation documents (JSONL)")->required()->check(CLI::ExistingFile);
  abl->add_option("--condition", abl_condition, "clean or shuffled")
      ->capture_default_str()
      ->check(CLI::IsMember({"clean", "shuffled"}));
  abl->add_option("--out", abl_out, "Output prefix; writes <prefix>.json, .csv and .txt");

  // report
  auto* rep = app.add_subcommand("report", "Render tables (text, CSV) and SVG plots from result files");
  std::vector<std::string> rep_inputs;
  std::string rep_dir;
  rep->add_option("--input", rep_inputs,
                  "Eval report, few-shot or ablation JSON, or a JSONL training log (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("--out-dir", rep_dir, "Directory for the rendered files")->required();

  std::vector<const char*> argv{"docmatch"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*synth) {
      if (!mix.empty()) sc.mix = {mix[0], mix[1], mix[2]};
      const auto docs = doc::synthesize(sc, synth_seed);
      doc::save_jsonl(docs, synth_out);
      if (!vocab_out.empty()) doc::synthetic_vocabulary().save(vocab_out);
      if (!schema_out.empty()) doc::synthetic_schema().save(schema_out);
      out << "wrote " << docs.size() << " documents to " << synth_out << "\n";
    } else if (*pre) {
      train::TrainConfig base;
      base.phase = train::Phase::Pretrain;
      auto config = resolve_config(pre_cfg, base);
      config.phase = train::Phase::Pretrain;
      const auto corpus = doc::load_jsonl(pre_data);
      auto model = make_model(pre_init, config, pre_voc);
      const auto result = train::pretrain(*model, corpus, config);
      save_trained(*model, config, result, corpus, pre_out);
      print_training(out, result, pre_out);
    } else if (*fine) {
      auto config = resolve_config(fine_cfg, {});
      config.phase = train::Phase::Finetune;
      const auto docs = doc::load_jsonl(fine_data);
      auto model = make_model(fine_init, config, fine_voc);
      const auto result = train::finetune(*model, docs, config);
      save_trained(*model, config, result, docs, fine_out);
      print_training(out, result, fine_out);
    } else if (*ev) {
      ev_opts.condition = eval::parse_condition(ev_condition);
      ev_opts.mode = train::parse_matcher_mode(ev_matcher);
      auto ckpt = train::load_checkpoint(ev_ckpt);
      const auto docs = doc::load_jsonl(ev_data);
      auto report = eval::evaluate(*ckpt.model, docs, ev_opts);
      report.provenance["checkpoint_config_hash"] = ckpt.meta.config_hash;
      report.provenance["corpus_hash"] = train::corpus_hash(docs);
      const std::string text = eval::to_json(report).dump(2) + "\n";
      if (ev_out.empty()) {
        out << text;
      } else {
        write_text(ev_out, text);
        out << eval::to_text(report);
      }
      if (!ev_csv.empty()) write_text(ev_csv, eval::to_csv(report));
    } else if (*few) {
      train::TrainConfig base;
      base.max_steps = 5000;
      auto config = resolve_config(few_cfg, base);
      config.phase = train::Phase::Finetune;
      for (const int n : shots) {
        if (n <= 0) throw UsageError("--shots values must be positive");
      }
      const auto pool = doc::load_jsonl(few_train);
      const auto test = doc::load_jsonl(few_test);
      const std::uint64_t episode_seed = few_seed.value_or(config.seed);
      eval::EvalOptions eo;
      eo.condition = eval::parse_condition(few_condition);
      eo.mode = config.matcher;
      eo.seed = config.seed;
      json runs = json::array();
      for (const int n : shots) {
        std::vector<eval::EvalReport> fold_reports;
        for (const auto& episode : train::sample_episodes(pool, n, folds, episode_seed)) {
          auto fold_config = config;
          auto model = make_model(few_init, fold_config, few_voc);
          train::finetune(*model, train::episode_documents(pool, episode), fold_config);
          fold_reports.push_back(eval::evaluate(*model, test, eo));
        }
        auto pooled = pool_folds(fold_reports);
        pooled.provenance["shots"] = n;
        pooled.provenance["folds"] = folds;
        pooled.provenance["episode_seed"] = episode_seed;
        pooled.provenance["train_config_hash"] = train::config_hash(config);
        char line[96];
        std::snprintf(line, sizeof line, "%d-shot: F1 %.4f ± %.4f over %d folds\n", n, pooled.fold_mean,
                      pooled.fold_std, folds);
        out << line;
        runs.push_back({{"shots", n}, {"report", eval::to_json(pooled)}});
      }
      if (!few_out.empty()) write_text(few_out, json{{"runs", runs}}.dump(2) + "\n");
    } else if (*abl) {
      train::TrainConfig pre_base;
      pre_base.phase = train::Phase::Pretrain;
      const auto pc = resolve_config(abl_pre_cfg, pre_base);
      const auto fc = resolve_config(abl_cfg, {});
      const auto arms = eval::ablation_grid(grid);
      const bool needs_pretrain = std::any_of(arms.begin(), arms.end(), [](const auto& a) { return a.pretrain; });
      if (needs_pretrain && abl_pre_data.empty()) {
        throw UsageError("--pretrain-data is required for the " + grid + " grid");
      }
      eval::AblationData data{needs_pretrain ? doc::load_jsonl(abl_pre_data) : std::vector<doc::Document>{},
                              doc::load_jsonl(abl_train), doc::load_jsonl(abl_test), vocab_of(abl_voc),
                              schema_of(abl_voc)};
      eval::EvalOptions eo;
      eo.condition = eval::parse_condition(abl_condition);
      eo.seed = fc.seed;
      const auto table = eval::run_ablation(arms, pc, fc, data, eo);
      const std::string text = eval::to_text(table);
      out << text;
      if (!abl_out.empty()) {
        write_text(abl_out + ".json", eval::to_json(table).dump(2) + "\n");
        write_text(abl_out + ".csv", eval::to_csv(table));
        write_text(abl_out + ".txt", text);
      }
    } else if (*rep) {
      fs::create_directories(rep_dir);
      for (const auto& input : rep_inputs) {
        for (const auto& path : render_report(input, rep_dir, out)) out << "wrote " << path.string() << "\n";
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace docmatch
