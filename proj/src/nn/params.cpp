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

#include "docmatch/nn/params.hpp"

#include "docmatch/error.hpp"
#include "docmatch/hash.hpp"

namespace docmatch::nn {

ParameterStore::ParameterStore(const ParameterStore& other) { *this = other; }

ParameterStore& ParameterStore::operator=(const ParameterStore& other) {
  if (this == &other) return *this;
  params_.clear();
  index_.clear();
  for (const auto& p : other.params_) {
    index_.emplace(p->name, params_.size());
    params_.push_back(std::make_unique<Parameter>(*p));
  }
  return *this;
}

Parameter& ParameterStore::add(const std::string& name, int rows, int cols) {
  if (index_.count(name)) throw ArgumentError("duplicate parameter name '" + name + "'");
  if (rows < 0 || cols < 0) throw ShapeError("negative shape for parameter '" + name + "'");
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = MatrixD::Zero(rows, cols);
  p->grad = MatrixD::Zero(rows, cols);
  index_.emplace(name, params_.size());
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter* ParameterStore::find(const std::string& name) {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : params_[it->second].get();
}

const Parameter* ParameterStore::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : params_[it->second].get();
}

Parameter& ParameterStore::get(const std::string& name) {
  if (auto* p = find(name)) return *p;
  throw ArgumentError("no parameter named '" + name + "'");
}

const Parameter& ParameterStore::get(const std::string& name) const {
  if (const auto* p = find(name)) return *p;
  throw ArgumentError("no parameter named '" + name + "'");
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p->grad.setZero();
}

std::string ParameterStore::hash() const {
  std::string bytes;
  for (const auto& p : params_) {
    bytes += p->name;
    bytes += '\0';
    bytes += std::to_string(p->value.rows()) + "x" + std::to_string(p->value.cols());
    bytes += '\0';
    bytes.append(reinterpret_cast<const char*>(p->value.data()),
                 static_cast<std::size_t>(p->value.size()) * sizeof(double));
  }
  return sha1_hex(bytes);
}

}  // namespace docmatch::nn
