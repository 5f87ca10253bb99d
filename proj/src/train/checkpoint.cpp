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

#include "docmatch/train/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "docmatch/doc/jsonl.hpp"
#include "docmatch/error.hpp"
#include "docmatch/hash.hpp"

namespace docmatch::train {

namespace {

constexpr char kMagic[8] = {'D', 'M', 'P', 'A', 'R', 'A', 'M', 'S'};
constexpr std::uint8_t kFloat64 = 1;

template <typename I>
void put(std::ostream& out, I v) {
  unsigned char bytes[sizeof(I)];
  for (std::size_t i = 0; i < sizeof(I); ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(I));
}

template <typename I>
I get(std::istream& in, const std::string& what) {
  unsigned char bytes[sizeof(I)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(I))) throw CheckpointError("truncated params file at " + what);
  I v = 0;
  for (std::size_t i = 0; i < sizeof(I); ++i) v |= static_cast<I>(bytes[i]) << (8 * i);
  return v;
}

void write_params(const nn::ParameterStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(store.size()));
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& p = store.at(i);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put<std::uint8_t>(out, kFloat64);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.value.rows()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.value.cols()));
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      std::uint64_t bits;
      std::memcpy(&bits, p.value.data() + k, sizeof bits);
      put<std::uint64_t>(out, bits);
    }
  }
  if (!out) throw CheckpointError("failed writing " + path.string());
}

struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;
};

std::map<std::string, Tensor> read_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read " + path.string());
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw CheckpointError(path.string() + " is not a parameter file");
  }
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kCheckpointVersion) {
    throw CheckpointError("params version " + std::to_string(version) + ", expected " +
                          std::to_string(kCheckpointVersion));
  }
  const auto count = get<std::uint32_t>(in, "count");
  std::map<std::string, Tensor> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = get<std::uint32_t>(in, "name length");
    std::string name(len, '\0');
    if (!in.read(name.data(), len)) throw CheckpointError("truncated params file at tensor name");
    if (get<std::uint8_t>(in, name) != kFloat64) throw CheckpointError("tensor " + name + ": unsupported dtype");
    Tensor t;
    t.rows = static_cast<int>(get<std::uint32_t>(in, name));
    t.cols = static_cast<int>(get<std::uint32_t>(in, name));
    t.data.resize(static_cast<std::size_t>(t.rows) * static_cast<std::size_t>(t.cols));
    for (auto& v : t.data) {
      const auto bits = get<std::uint64_t>(in, name);
      std::memcpy(&v, &bits, sizeof v);
    }
    out.emplace(std::move(name), std::move(t));
  }
  return out;
}

void copy_into(nn::Model& model, const std::map<std::string, Tensor>& tensors, bool require_all) {
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    auto& p = model.params().at(i);
    const auto it = tensors.find(p.name);
    if (it == tensors.end()) {
      if (require_all) throw CheckpointError("checkpoint lacks tensor " + p.name);
      continue;
    }
    const Tensor& t = it->second;
    if (t.rows != p.value.rows() || t.cols != p.value.cols()) {
      throw CheckpointError("shape mismatch for tensor " + p.name + ": checkpoint " +
                            std::to_string(t.rows) + "x" + std::to_string(t.cols) + ", model " +
                            std::to_string(p.value.rows()) + "x" + std::to_string(p.value.cols()));
    }
    std::copy(t.data.begin(), t.data.end(), p.value.data());
  }
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::string corpus_hash(const std::vector<doc::Document>& docs) {
  return git_blob_hash(doc::to_jsonl(docs));
}

void save_checkpoint(const nn::Model& model, const CheckpointMeta& meta,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_params(model.params(), dir / "params.bin");
  const nlohmann::json j = {{"version", meta.version},
                            {"phase", meta.phase},
                            {"seed", meta.seed},
                            {"steps", meta.steps},
                            {"config_hash", meta.config_hash},
                            {"corpus_hash", meta.corpus_hash},
                            {"params_hash", model.params().hash()},
                            {"model_seed", model.seed()},
                            {"model", nn::to_json(model.config())},
                            {"train_config", meta.train_config}};
  std::ofstream out(dir / "meta.json");
  if (!out) throw CheckpointError("cannot write " + (dir / "meta.json").string());
  out << j.dump(2) << "\n";
  model.vocab().save(dir / "vocab.txt");
  model.schema().save(dir / "schema.json");
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  const auto j = read_json(dir / "meta.json");
  Checkpoint ck;
  try {
    ck.meta.version = j.at("version");
    if (ck.meta.version != kCheckpointVersion) {
      throw CheckpointError("checkpoint version " + std::to_string(ck.meta.version) + ", expected " +
                            std::to_string(kCheckpointVersion));
    }
    ck.meta.phase = j.at("phase");
    ck.meta.seed = j.at("seed");
    ck.meta.steps = j.at("steps");
    ck.meta.config_hash = j.at("config_hash");
    ck.meta.corpus_hash = j.at("corpus_hash");
    ck.meta.train_config = j.at("train_config");
    auto config = nn::model_config_from_json(j.at("model"));
    auto vocab = doc::Vocabulary::load(dir / "vocab.txt");
    auto schema = doc::EntitySchema::load(dir / "schema.json");
    ck.model = std::make_unique<nn::Model>(config, std::move(vocab), std::move(schema),
                                           j.at("model_seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("meta.json: " + std::string(e.what()));
  } catch (const CheckpointError&) {
    throw;
  } catch (const Error& e) {
    throw CheckpointError(dir.string() + ": " + e.what());
  }
  copy_into(*ck.model, read_params(dir / "params.bin"), true);
  return ck;
}

void load_parameters(nn::Model& model, const std::filesystem::path& dir) {
  copy_into(model, read_params(dir / "params.bin"), false);
}

}  // namespace docmatch::train
