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

#include "docmatch/nn/forward.hpp"

#include <algorithm>
#include <vector>

#include "docmatch/error.hpp"

namespace docmatch::nn {

template <typename T>
Var linear(Tape<T>& tape, Model& model, const std::string& prefix, Var x) {
  return tape.add_row(tape.matmul(x, tape.param(model.p(prefix + ".w"))),
                      tape.param(model.p(prefix + ".b")));
}

template <typename T>
Var norm(Tape<T>& tape, Model& model, const std::string& prefix, Var x) {
  return tape.layer_norm(x, tape.param(model.p(prefix + ".gain")),
                         tape.param(model.p(prefix + ".bias")));
}

template <typename T>
Var feed_forward(Tape<T>& tape, Model& model, const std::string& prefix, Var x) {
  return linear(tape, model, prefix + ".down", tape.gelu(linear(tape, model, prefix + ".up", x)));
}

template <typename T>
Var attention_block(Tape<T>& tape, Model& model, const std::string& prefix, Var x, Var memory,
                    bool causal) {
  const Var q = linear(tape, model, prefix + ".q", x);
  const Var k = linear(tape, model, prefix + ".k", memory);
  const Var v = linear(tape, model, prefix + ".v", memory);
  return linear(tape, model, prefix + ".o", tape.attention(q, k, v, model.config().heads, causal));
}

template <typename T>
Var embed_source(Tape<T>& tape, Model& model, const doc::Document& doc) {
  const int n = doc.size();
  if (n > model.config().max_enc_len) {
    throw ArgumentError("document '" + doc.doc_id + "' has " + std::to_string(n) +
                        " tokens, more than the encoder limit " +
                        std::to_string(model.config().max_enc_len));
  }
  if (n == 0) throw ArgumentError("document '" + doc.doc_id + "' has no tokens");
  std::vector<int> word(n), pos(n), x0(n), y0(n), x1(n), y1(n), w(n), h(n);
  for (int i = 0; i < n; ++i) {
    const auto& t = doc.tokens[static_cast<std::size_t>(i)];
    word[i] = model.vocab().id(t.text);
    if (tape.noise().word_dropout > 0 && tape.noise_rng().uniform() < tape.noise().word_dropout) {
      word[i] = doc::Vocabulary::kUnknown;
    }
    pos[i] = t.index;
    x0[i] = t.box.x0;
    y0[i] = t.box.y0;
    x1[i] = t.box.x1;
    y1[i] = t.box.y1;
    w[i] = t.box.width();
    h[i] = t.box.height();
  }
  Var x = tape.embedding(model.p("embed.word"), word);
  x = tape.add(x, tape.embedding(model.p("embed.position"), pos));
  x = tape.add(x, tape.embedding(model.p("embed.x0"), x0));
  x = tape.add(x, tape.embedding(model.p("embed.y0"), y0));
  x = tape.add(x, tape.embedding(model.p("embed.x1"), x1));
  x = tape.add(x, tape.embedding(model.p("embed.y1"), y1));
  x = tape.add(x, tape.embedding(model.p("embed.width"), w));
  return tape.dropout(tape.add(x, tape.embedding(model.p("embed.height"), h)));
}

template <typename T>
Var encoder_forward(Tape<T>& tape, Model& model, Var x) {
  if (!tape.value(x).allFinite()) throw NumericError("encoder input contains non-finite values");
  for (int l = 0; l < model.config().enc_layers; ++l) {
    const std::string p = "encoder." + std::to_string(l);
    const Var a = norm(tape, model, p + ".ln_attn", x);
    x = tape.add(x, tape.dropout(attention_block(tape, model, p + ".attn", a, a, false)));
    x = tape.add(x, tape.dropout(feed_forward(tape, model, p + ".ffn", norm(tape, model, p + ".ln_ffn", x))));
  }
  return norm(tape, model, "encoder.ln", x);
}

template <typename T>
Var decoder_forward(Tape<T>& tape, Model& model, Var queries, Var memory, bool causal) {
  if (tape.rows(memory) == 0) throw ArgumentError("generator memory is empty");
  if (tape.rows(queries) > model.config().max_dec_len) {
    throw ArgumentError("generator input of " + std::to_string(tape.rows(queries)) +
                        " rows exceeds max_dec_len " + std::to_string(model.config().max_dec_len));
  }
  const Var mem = norm(tape, model, "generator.ln_memory", memory);
  Var x = queries;
  for (int l = 0; l < model.config().dec_layers; ++l) {
    const std::string p = "generator." + std::to_string(l);
    const Var a = norm(tape, model, p + ".ln_self", x);
    x = tape.add(x, tape.dropout(attention_block(tape, model, p + ".self", a, a, causal)));
    const Var c = norm(tape, model, p + ".ln_cross", x);
    x = tape.add(x, tape.dropout(attention_block(tape, model, p + ".cross", c, mem, false)));
    x = tape.add(x, tape.dropout(feed_forward(tape, model, p + ".ffn", norm(tape, model, p + ".ln_ffn", x))));
  }
  return norm(tape, model, "generator.ln", x);
}

template <typename T>
Var embed_prompt(Tape<T>& tape, Model& model, const Prompt& prompt, Var source_rows) {
  using Kind = PromptSlot::Kind;
  std::vector<Var> rows;
  rows.reserve(prompt.slots.size());
  for (const auto& s : prompt.slots) {
    const int one[1] = {s.value};
    switch (s.kind) {
      case Kind::Task:
        rows.push_back(tape.embedding(model.p("prompt.task"), one));
        break;
      case Kind::EntityType:
        if (s.value < 0 || s.value >= model.config().num_types) {
          throw ArgumentError("prompt entity type " + std::to_string(s.value) + " out of range");
        }
        rows.push_back(tape.embedding(model.p("prompt.type"), one));
        break;
      case Kind::Direction:
        rows.push_back(tape.embedding(model.p("prompt.direction"), one));
        break;
      case Kind::K: {
        const int bucket[1] = {std::min(std::max(s.value, 0), model.config().k_buckets - 1)};
        rows.push_back(tape.embedding(model.p("prompt.k"), bucket));
        break;
      }
      case Kind::Anchor:
        if (s.value < 0 || s.value >= tape.rows(source_rows)) {
          throw ArgumentError("prompt anchor " + std::to_string(s.value) + " out of range for " +
                              std::to_string(tape.rows(source_rows)) + " tokens");
        }
        rows.push_back(tape.select_rows(source_rows, one));
        break;
      case Kind::Pad: {
        const int zero[1] = {0};
        rows.push_back(tape.embedding(model.p("prompt.pad"), zero));
        break;
      }
    }
  }
  if (rows.empty()) {
    return tape.constant(typename Tape<T>::Mat(0, model.config().d));
  }
  return tape.concat_rows(rows);
}

#define DOCMATCH_INSTANTIATE(T)                                                                   \
  template Var linear<T>(Tape<T>&, Model&, const std::string&, Var);                              \
  template Var norm<T>(Tape<T>&, Model&, const std::string&, Var);                                \
  template Var feed_forward<T>(Tape<T>&, Model&, const std::string&, Var);                        \
  template Var attention_block<T>(Tape<T>&, Model&, const std::string&, Var, Var, bool);          \
  template Var embed_source<T>(Tape<T>&, Model&, const doc::Document&);                           \
  template Var encoder_forward<T>(Tape<T>&, Model&, Var);                                         \
  template Var decoder_forward<T>(Tape<T>&, Model&, Var, Var, bool);                              \
  template Var embed_prompt<T>(Tape<T>&, Model&, const Prompt&, Var);

DOCMATCH_INSTANTIATE(float)
DOCMATCH_INSTANTIATE(double)
#undef DOCMATCH_INSTANTIATE

}  // namespace docmatch::nn
