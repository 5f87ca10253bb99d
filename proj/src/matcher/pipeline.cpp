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

#include "docmatch/matcher/pipeline.hpp"

#include <algorithm>

#include "docmatch/error.hpp"
#include "docmatch/nn/forward.hpp"

namespace docmatch::matcher {

template <typename T>
EncodedDocument encode_document(Tape<T>& tape, Model& model, const doc::Document& doc) {
  EncodedDocument enc;
  enc.n_words = doc.size();
  enc.source = nn::embed_source(tape, model, doc);
  enc.x_m = nn::encoder_forward(tape, model, enc.source);
  if (model.config().resampler == nn::ResamplerArm::None) {
    enc.cache.memory = enc.x_m;
  } else {
    enc.cache = resampler::cache_memory(tape, model, enc.x_m);
  }
  enc.pool = seq_pool(tape, model, enc.x_m);
  return enc;
}

template <typename T>
Var conditioned_memory(Tape<T>& tape, Model& model, const EncodedDocument& enc,
                       std::span<const nn::Prompt> prompts) {
  std::vector<Var> rows;
  rows.reserve(prompts.size());
  for (const auto& p : prompts) rows.push_back(nn::embed_prompt(tape, model, p, enc.source));
  const Var x_p = rows.empty() ? Var{} : tape.concat_rows(rows);
  return resampler::generator_memory(tape, model, enc.cache, x_p);
}

template <typename T>
Var bio_scores(Tape<T>& tape, Model& model, const EncodedDocument& enc) {
  const int types = model.schema().size();
  if (model.config().bio_prompts == nn::BioPromptMode::FullSpace) {
    std::vector<nn::Prompt> prompts;
    for (int t = 0; t < types; ++t) prompts.push_back(nn::extract_prompt(t));
    const Var memory = conditioned_memory<T>(tape, model, enc, prompts);
    return bio_similarity(tape, enc.x_m, bio_matcher_vectors(tape, model, memory));
  }
  // Rows of M^T: O first, then B/I per type.
  std::vector<Var> outside;
  std::vector<Var> rows(1);
  for (int t = 0; t < types; ++t) {
    const nn::Prompt prompt = nn::extract_prompt(t);
    const Var memory = conditioned_memory<T>(tape, model, enc, std::span(&prompt, 1));
    const int tags[3] = {doc::TagSpace::kOutside, doc::TagSpace::begin_tag(t),
                         doc::TagSpace::inside_tag(t)};
    const Var v = bio_matcher_vectors(tape, model, memory, tags);
    if (tape.cols(v) != tape.cols(enc.x_m)) throw ShapeError("matcher width mismatch");
    const Var s = tape.matmul_nt(v, enc.x_m);
    outside.push_back(tape.slice_rows(s, 0, 1));
    rows.push_back(tape.slice_rows(s, 1, 2));
  }
  if (outside.empty()) throw SchemaError("tagging needs at least one entity type");
  Var o = outside[0];
  for (std::size_t i = 1; i < outside.size(); ++i) o = tape.add(o, outside[i]);
  rows[0] = tape.scale(o, T(1) / static_cast<T>(types));
  return tape.transpose(tape.concat_rows(rows));
}

template <typename T>
Var bio_document_loss(Tape<T>& tape, Model& model, const doc::Document& doc) {
  const EncodedDocument enc = encode_document(tape, model, doc);
  const Var m = bio_scores(tape, model, enc);
  const auto labels = one_hot<T>(bio_labels(doc, model.tag_space()), model.tag_space().size());
  return bio_loss(tape, m, labels);
}

template <typename T>
Var seq_type_loss(Tape<T>& tape, Model& model, const EncodedDocument& enc, const doc::Document& doc,
                  int type) {
  const nn::Prompt prompt = nn::extract_prompt(type);
  const Var memory = conditioned_memory<T>(tape, model, enc, std::span(&prompt, 1));
  const auto targets = seq_targets(doc, model.schema().types().at(static_cast<std::size_t>(type)).id);
  return seq_loss(tape, model, enc.pool, memory, targets);
}

template <typename T>
Var instruction_loss(Tape<T>& tape, Model& model, const EncodedDocument& enc,
                     const spatial::Instruction& instruction) {
  const nn::Prompt prompt = nn::make_prompt(instruction, model.schema());
  const Var memory = conditioned_memory<T>(tape, model, enc, std::span(&prompt, 1));
  std::vector<int> targets = instruction.targets;
  targets.push_back(eos_index(enc.n_words));
  return seq_loss(tape, model, enc.pool, memory, targets);
}

nn::MatrixD predict_bio(Model& model, const doc::Document& doc) {
  Tape<float> tape(false);
  const EncodedDocument enc = encode_document(tape, model, doc);
  return tape.value(bio_scores(tape, model, enc)).cast<double>();
}

std::vector<std::vector<int>> predict_seq(Model& model, const doc::Document& doc,
                                          const HookFactory& hooks, int max_len) {
  Tape<float> tape(false);
  const EncodedDocument enc = encode_document(tape, model, doc);
  if (max_len <= 0) max_len = std::min(model.config().max_dec_len, 2 * enc.n_words + 1);
  std::vector<std::vector<int>> out;
  for (int t = 0; t < model.schema().size(); ++t) {
    const nn::Prompt prompt = nn::extract_prompt(t);
    const Var memory = conditioned_memory<float>(tape, model, enc, std::span(&prompt, 1));
    out.push_back(seq_generate(tape, model, enc.pool, memory, max_len, hooks ? hooks(t) : LogitHook{}));
  }
  return out;
}

#define DOCMATCH_INSTANTIATE(T)                                                                  \
  template EncodedDocument encode_document<T>(Tape<T>&, Model&, const doc::Document&);           \
  template Var conditioned_memory<T>(Tape<T>&, Model&, const EncodedDocument&,                   \
                                     std::span<const nn::Prompt>);                               \
  template Var bio_scores<T>(Tape<T>&, Model&, const EncodedDocument&);                          \
  template Var bio_document_loss<T>(Tape<T>&, Model&, const doc::Document&);                     \
  template Var seq_type_loss<T>(Tape<T>&, Model&, const EncodedDocument&, const doc::Document&,  \
                                int);                                                            \
  template Var instruction_loss<T>(Tape<T>&, Model&, const EncodedDocument&,                     \
                                   const spatial::Instruction&);

DOCMATCH_INSTANTIATE(float)
DOCMATCH_INSTANTIATE(double)
#undef DOCMATCH_INSTANTIATE

}  // namespace docmatch::matcher
