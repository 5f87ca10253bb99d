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

#include "docmatch/resampler/resampler.hpp"

#include <string>

#include "docmatch/error.hpp"
#include "docmatch/nn/forward.hpp"

namespace docmatch::resampler {

namespace {

std::string layer(int l) { return "resampler." + std::to_string(l); }

template <typename T>
bool has_rows(Tape<T>& tape, Var v) {
  return v.valid() && tape.rows(v) > 0;
}

}  // namespace

template <typename T>
MemoryCache cache_memory(Tape<T>& tape, Model& model, Var x_m) {
  if (!x_m.valid() || tape.rows(x_m) == 0) throw ArgumentError("resampler memory is empty");
  MemoryCache cache;
  cache.memory = x_m;
  for (int l = 0; l < model.config().res_layers; ++l) {
    const Var m = nn::norm(tape, model, layer(l) + ".ln_memory", x_m);
    cache.keys.push_back(nn::linear(tape, model, layer(l) + ".attn.k", m));
    cache.values.push_back(nn::linear(tape, model, layer(l) + ".attn.v", m));
  }
  return cache;
}

template <typename T>
ResampleOutput par_forward(Tape<T>& tape, Model& model, Var x_q, Var x_p, const MemoryCache& memory) {
  if (static_cast<int>(memory.keys.size()) != model.config().res_layers) {
    throw ArgumentError("memory cache does not match the resampler depth");
  }
  const int n_q = tape.rows(x_q);
  if (n_q < 1) throw ArgumentError("resampler needs at least one query");
  const bool prompted = has_rows(tape, x_p);
  Var c = x_q;
  if (prompted) {
    const Var parts[2] = {x_q, x_p};
    c = tape.concat_rows(parts);
  }
  for (int l = 0; l < model.config().res_layers; ++l) {
    const std::string p = layer(l);
    const Var a = nn::norm(tape, model, p + ".ln_query", c);
    const Var q = nn::linear(tape, model, p + ".attn.q", a);
    const Var k_parts[2] = {memory.keys[static_cast<std::size_t>(l)],
                            nn::linear(tape, model, p + ".attn.k", a)};
    const Var v_parts[2] = {memory.values[static_cast<std::size_t>(l)],
                            nn::linear(tape, model, p + ".attn.v", a)};
    const Var att = tape.attention(q, tape.concat_rows(k_parts), tape.concat_rows(v_parts),
                                   model.config().heads, false);
    c = tape.add(c, tape.dropout(nn::linear(tape, model, p + ".attn.o", att)));
    c = tape.add(c, tape.dropout(
                        nn::feed_forward(tape, model, p + ".ffn", nn::norm(tape, model, p + ".ln_ffn", c))));
  }
  c = nn::norm(tape, model, "resampler.ln", c);
  ResampleOutput out;
  if (prompted) {
    out.queries = tape.slice_rows(c, 0, n_q);
    out.prompts = tape.slice_rows(c, n_q, tape.rows(c) - n_q);
  } else {
    out.queries = c;
    out.prompts = tape.constant(typename Tape<T>::Mat(0, tape.cols(c)));
  }
  return out;
}

template <typename T>
ResampleOutput par_forward(Tape<T>& tape, Model& model, Var x_q, Var x_p, Var x_m) {
  return par_forward(tape, model, x_q, x_p, cache_memory(tape, model, x_m));
}

template <typename T>
Var vanilla_forward(Tape<T>& tape, Model& model, Var x_q, const MemoryCache& memory) {
  return par_forward(tape, model, x_q, Var{}, memory).queries;
}

template <typename T>
Var vanilla_forward(Tape<T>& tape, Model& model, Var x_q, Var x_m) {
  return vanilla_forward(tape, model, x_q, cache_memory(tape, model, x_m));
}

template <typename T>
Var generator_memory(Tape<T>& tape, Model& model, const MemoryCache& memory, Var x_p) {
  const Var x_q = tape.param(model.p("resampler.queries"));
  Var head;
  Var tail = x_p;
  switch (model.config().resampler) {
    case nn::ResamplerArm::Par: {
      const ResampleOutput out = par_forward(tape, model, x_q, x_p, memory);
      head = out.queries;
      tail = out.prompts;
      break;
    }
    case nn::ResamplerArm::Vanilla:
      head = vanilla_forward(tape, model, x_q, memory);
      break;
    case nn::ResamplerArm::None:
      head = bypass(memory.memory);
      break;
  }
  if (!has_rows(tape, tail)) return head;
  const Var parts[2] = {head, tail};
  return tape.concat_rows(parts);
}

#define DOCMATCH_INSTANTIATE(T)                                                              \
  template MemoryCache cache_memory<T>(Tape<T>&, Model&, Var);                               \
  template ResampleOutput par_forward<T>(Tape<T>&, Model&, Var, Var, const MemoryCache&);    \
  template ResampleOutput par_forward<T>(Tape<T>&, Model&, Var, Var, Var);                   \
  template Var vanilla_forward<T>(Tape<T>&, Model&, Var, const MemoryCache&);                \
  template Var vanilla_forward<T>(Tape<T>&, Model&, Var, Var);                               \
  template Var generator_memory<T>(Tape<T>&, Model&, const MemoryCache&, Var);

DOCMATCH_INSTANTIATE(float)
DOCMATCH_INSTANTIATE(double)
#undef DOCMATCH_INSTANTIATE

}  // namespace docmatch::resampler
