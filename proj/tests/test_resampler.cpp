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

#include <numeric>
#include <vector>

#include "docmatch/error.hpp"
#include "docmatch/nn/grad_check.hpp"
#include "docmatch/resampler/resampler.hpp"
#include "docmatch/rng.hpp"
#include "doctest.h"

using namespace docmatch;
using namespace docmatch::nn;
using namespace docmatch::resampler;

namespace {

Model make_model(int d = 16, int n_queries = 4, ResamplerArm arm = ResamplerArm::Par) {
  ModelConfig c;
  c.d = d;
  c.heads = 2;
  c.enc_layers = 1;
  c.dec_layers = 1;
  c.res_layers = 2;
  c.ffn_mult = 2;
  c.n_queries = n_queries;
  c.resampler = arm;
  return Model(c, doc::Vocabulary({"a", "b"}), doc::EntitySchema(std::vector<doc::EntityType>{{"t", "t"}}),
               5);
}

MatrixD random_matrix(Rng& rng, int r, int c) {
  MatrixD m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

double max_diff(const MatrixD& a, const MatrixD& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("par_forward: shapes") {
  Model m = make_model(128, 16);
  Rng rng(1);
  Tape<float> t(false);
  const Var x_q = t.param(m.p("resampler.queries"));
  const Var x_p = t.constant(random_matrix(rng, 8, 128).cast<float>());
  const Var x_m = t.constant(random_matrix(rng, 30, 128).cast<float>());
  const ResampleOutput out = par_forward(t, m, x_q, x_p, x_m);
  CHECK(t.rows(out.queries) == 16);
  CHECK(t.cols(out.queries) == 128);
  CHECK(t.rows(out.prompts) == 8);
  CHECK(t.cols(out.prompts) == 128);
}

TEST_CASE("par_forward without a prompt equals vanilla_forward") {
  Model m = make_model();
  Rng rng(2);
  Tape<double> t(false);
  const Var x_q = t.param(m.p("resampler.queries"));
  const Var x_m = t.constant(random_matrix(rng, 11, 16));
  const ResampleOutput par = par_forward(t, m, x_q, t.constant(MatrixD(0, 16)), x_m);
  const Var vanilla = vanilla_forward(t, m, x_q, x_m);
  CHECK(t.rows(par.prompts) == 0);
  CHECK(t.value(par.queries) == t.value(vanilla));
  // An absent prompt and a zero-row prompt are the same thing.
  CHECK(t.value(par_forward(t, m, x_q, Var{}, x_m).queries) == t.value(vanilla));
}

TEST_CASE("par_forward: permuting memory rows changes nothing") {
  Model m = make_model();
  Rng rng(3);
  const MatrixD mem = random_matrix(rng, 13, 16);
  const MatrixD prompt = random_matrix(rng, 4, 16);
  std::vector<int> perm(13);
  std::iota(perm.begin(), perm.end(), 0);
  for (int trial = 0; trial < 5; ++trial) {
    rng.shuffle(perm);
    MatrixD shuffled(13, 16);
    for (int i = 0; i < 13; ++i) shuffled.row(i) = mem.row(perm[static_cast<std::size_t>(i)]);
    Tape<double> t(false);
    const Var x_q = t.param(m.p("resampler.queries"));
    const auto a = par_forward(t, m, x_q, t.constant(prompt), t.constant(mem));
    const auto b = par_forward(t, m, x_q, t.constant(prompt), t.constant(shuffled));
    CHECK(max_diff(t.value(a.queries), t.value(b.queries)) < 1e-12);
    CHECK(max_diff(t.value(a.prompts), t.value(b.prompts)) < 1e-12);
  }
}

TEST_CASE("par_forward: prompt changes the queries") {
  Model m = make_model();
  Rng rng(4);
  Tape<double> t(false);
  const Var x_q = t.param(m.p("resampler.queries"));
  const Var x_m = t.constant(random_matrix(rng, 6, 16));
  const auto a = par_forward(t, m, x_q, t.constant(random_matrix(rng, 4, 16)), x_m);
  const auto b = par_forward(t, m, x_q, t.constant(random_matrix(rng, 4, 16)), x_m);
  CHECK(max_diff(t.value(a.queries), t.value(b.queries)) > 1e-6);
}

TEST_CASE("par_forward: finite output across memory sizes") {
  Model m = make_model();
  Rng rng(5);
  for (const int n : {1, 2, 17, 130, 512}) {
    Tape<float> t(false);
    const Var x_q = t.param(m.p("resampler.queries"));
    const auto out = par_forward(t, m, x_q, t.constant(random_matrix(rng, 4, 16).cast<float>()),
                                 t.constant(random_matrix(rng, n, 16).cast<float>()));
    CHECK(t.rows(out.queries) == 4);
    CHECK(t.value(out.queries).allFinite());
    CHECK(t.value(out.prompts).allFinite());
  }
}

TEST_CASE("resampler rejects empty memory") {
  Model m = make_model();
  Tape<double> t(false);
  const Var x_q = t.param(m.p("resampler.queries"));
  const Var empty = t.constant(MatrixD(0, 16));
  CHECK_THROWS_AS(par_forward(t, m, x_q, Var{}, empty), ArgumentError);
  CHECK_THROWS_AS(vanilla_forward(t, m, x_q, empty), ArgumentError);
  CHECK_THROWS_AS(cache_memory(t, m, empty), ArgumentError);
}

TEST_CASE("bypass is the identity") {
  Rng rng(6);
  Tape<double> t(false);
  const Var x = t.constant(random_matrix(rng, 7, 16));
  CHECK(t.value(bypass(x)) == t.value(x));
}

TEST_CASE("generator memory length per arm") {
  Rng rng(7);
  const MatrixD mem = random_matrix(rng, 9, 16);
  const MatrixD prompt = random_matrix(rng, 4, 16);
  const auto rows_for = [&](ResamplerArm arm) {
    Model m = make_model(16, 3, arm);
    Tape<double> t(false);
    const MemoryCache cache = cache_memory(t, m, t.constant(mem));
    return t.rows(generator_memory(t, m, cache, t.constant(prompt)));
  };
  CHECK(rows_for(ResamplerArm::Par) == 3 + 4);
  CHECK(rows_for(ResamplerArm::Vanilla) == 3 + 4);
  CHECK(rows_for(ResamplerArm::None) == 9 + 4);
  for (const auto arm : {ResamplerArm::Par, ResamplerArm::Vanilla, ResamplerArm::None}) {
    CHECK(parse_resampler_arm(to_string(arm)) == arm);
  }
  CHECK_THROWS_AS(parse_resampler_arm("bogus"), ConfigError);
}

TEST_CASE("cached and uncached paths agree") {
  Model m = make_model();
  Rng rng(8);
  Tape<double> t(false);
  const Var x_q = t.param(m.p("resampler.queries"));
  const Var x_p = t.constant(random_matrix(rng, 4, 16));
  const Var x_m = t.constant(random_matrix(rng, 10, 16));
  const MemoryCache cache = cache_memory(t, m, x_m);
  const MatrixD cached = t.value(par_forward(t, m, x_q, x_p, cache).queries);
  const MatrixD direct = t.value(par_forward(t, m, x_q, x_p, x_m).queries);
  CHECK(cached == direct);
}

TEST_CASE("par_forward passes a gradient check") {
  Model m = make_model();
  Rng rng(9);
  const MatrixD mem = random_matrix(rng, 5, 16);
  const LossBuilder loss = [&](Tape<double>& t) {
    const Var x_q = t.param(m.p("resampler.queries"));
    const Var x_p = t.slice_rows(t.param(m.p("prompt.type")), 0, 1);
    const auto out = par_forward(t, m, x_q, x_p, t.constant(mem));
    const Var parts[2] = {out.queries, out.prompts};
    const Var all = t.concat_rows(parts);
    const int targets[5] = {0, 3, 7, 11, 15};
    return t.softmax_cross_entropy_sum(all, targets);
  };
  GradCheckOptions opt;
  opt.samples = 60;
  opt.seed = 2;
  CHECK(grad_check(loss, m.params(), {}, opt).max_rel_error < 1e-4);
}
