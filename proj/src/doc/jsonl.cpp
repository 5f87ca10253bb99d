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

#include "docmatch/doc/jsonl.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "docmatch/error.hpp"

namespace docmatch::doc {

using nlohmann::json;

json to_json(const Document& doc) {
  json tokens = json::array();
  for (const auto& t : doc.tokens) {
    tokens.push_back({{"text", t.text},
                      {"box", {t.raw_box.x0, t.raw_box.y0, t.raw_box.x1, t.raw_box.y1}},
                      {"index", t.index}});
  }
  json entities = json::array();
  for (const auto& e : doc.entities) entities.push_back({{"type", e.type}, {"spans", e.spans}});
  return {{"doc_id", doc.doc_id},
          {"page", {doc.page.width, doc.page.height}},
          {"tokens", std::move(tokens)},
          {"entities", std::move(entities)}};
}

Document document_from_json(const json& j) {
  Document doc;
  try {
    doc.doc_id = j.at("doc_id").get<std::string>();
    const auto& page = j.at("page");
    if (!page.is_array() || page.size() != 2) throw ParseError("\"page\" must be [w, h]");
    doc.page = {page[0].get<int>(), page[1].get<int>()};
    for (const auto& jt : j.at("tokens")) {
      WordToken t;
      t.text = jt.at("text").get<std::string>();
      const auto& b = jt.at("box");
      if (!b.is_array() || b.size() != 4) throw ParseError("token \"box\" must have 4 entries");
      t.raw_box = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
      t.index = jt.at("index").get<int>();
      doc.tokens.push_back(std::move(t));
    }
    if (j.contains("entities")) {
      for (const auto& je : j.at("entities")) {
        EntityAnnotation e;
        e.type = je.at("type").get<std::string>();
        e.spans = je.at("spans").get<std::vector<std::vector<int>>>();
        doc.entities.push_back(std::move(e));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  std::stable_sort(doc.tokens.begin(), doc.tokens.end(),
                   [](const WordToken& a, const WordToken& b) { return a.index < b.index; });
  finalize(doc);
  return doc;
}

std::string to_jsonl_line(const Document& doc) { return to_json(doc).dump(); }

std::string to_jsonl(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& d : docs) {
    out += to_jsonl_line(d);
    out += '\n';
  }
  return out;
}

std::vector<Document> parse_jsonl(const std::string& text) {
  std::vector<Document> docs;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      docs.push_back(document_from_json(j));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::vector<Document> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_jsonl(buf.str());
}

void save_jsonl(const std::vector<Document>& docs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << to_jsonl(docs);
}

}  // namespace docmatch::doc
