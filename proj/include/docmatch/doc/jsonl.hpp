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

#include <filesystem>
#include <string>
#include <vector>

#include "docmatch/doc/document.hpp"
#include "json.hpp"

namespace docmatch::doc {

nlohmann::json to_json(const Document& doc);
// Parses and validates one record. Boxes are read as pixels and normalized.
Document document_from_json(const nlohmann::json& j);

std::string to_jsonl_line(const Document& doc);
std::string to_jsonl(const std::vector<Document>& docs);

// Malformed lines raise ParseError with the line number; invariant
// violations raise ValidationError.
std::vector<Document> load_jsonl(const std::filesystem::path& path);
std::vector<Document> parse_jsonl(const std::string& text);
void save_jsonl(const std::vector<Document>& docs, const std::filesystem::path& path);

}  // namespace docmatch::doc
