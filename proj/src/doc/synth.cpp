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

#include "docmatch/doc/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "docmatch/error.hpp"
#include "docmatch/rng.hpp"

namespace docmatch::doc {

namespace {

using Words = std::vector<std::string>;

const Words kFirstNames = {"James",  "Mary",   "John",   "Linda",  "Robert", "Susan",  "Michael",
                           "Karen",  "David",  "Sarah",  "William", "Nancy", "Richard", "Lisa",
                           "Joseph", "Betty",  "Thomas", "Sandra", "Daniel", "Ashley", "Paul",
                           "Emily",  "Mark",   "Donna",  "Steven", "Carol",  "Andrew", "Ruth",
                           "Kevin",  "Sharon", "Brian",  "Laura",  "George", "Helen",  "Edward",
                           "Anna",   "Ryan",   "Grace",  "Jason",  "Alice"};
const Words kLastNames = {"Smith",   "Johnson", "Brown",    "Jones",    "Garcia",  "Miller",
                          "Davis",   "Wilson",  "Moore",    "Taylor",   "Anderson", "Jackson",
                          "White",   "Harris",  "Martin",   "Thompson", "Lee",     "Walker",
                          "Hall",    "Allen",   "Young",    "King",     "Wright",  "Scott",
                          "Green",   "Baker",   "Adams",    "Nelson",   "Hill",    "Campbell",
                          "Mitchell", "Roberts", "Carter",  "Phillips", "Evans",   "Turner",
                          "Parker",  "Collins", "Edwards",  "Stewart"};
const Words kCompanyPrefix = {"Golden", "Silver",  "Blue",   "Royal",   "Sunny",  "Urban", "Prime",
                              "Global", "Central", "Eastern", "Pacific", "Metro", "Bright",
                              "Happy",  "Lucky",   "Grand",  "Star",    "Ocean",  "Maple"};
const Words kCompanyCore = {"Bakery",  "Cafe",     "Trading",  "Mart",        "Kitchen", "Foods",
                            "Supplies", "Logistics", "Books",  "Pharmacy",    "Electronics",
                            "Coffee",  "Diner",    "Market",   "Studio",      "Motors",  "Textiles"};
const Words kCompanySuffix = {"Co", "Ltd", "Inc", "Group", "LLC"};
const Words kStreets = {"Oak",  "Pine", "Cedar",  "Elm",    "Main",   "Park",  "Lake",  "Hill",
                        "River", "Sunset", "Church", "Mill", "Spring", "Walnut", "Willow"};
const Words kStreetSuffix = {"St", "Ave", "Rd", "Blvd", "Lane"};
const Words kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                       "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
const Words kMenu = {"kopi",    "susu",    "kampung", "ice",      "tea",     "latte",   "mocha",
                     "espresso", "milk",   "rice",    "fried",    "noodle",  "chicken", "beef",
                     "soup",    "salad",   "bread",   "butter",   "cheese",  "cake",    "chocolate",
                     "vanilla", "mango",   "lemon",   "orange",   "apple",   "banana",  "sandwich",
                     "burger",  "fries",   "pizza",   "pasta",    "curry",   "spicy",   "sweet",
                     "hot",     "cold",    "large",   "small",    "special", "house",   "fish",
                     "egg",     "tofu",    "pork",    "lamb",     "shrimp",  "dumpling", "bun",
                     "roll",    "waffle",  "pancake", "honey",    "toast",   "bagel",   "muffin",
                     "cookie",  "donut",   "smoothie", "juice",   "soda",    "water",   "matcha",
                     "caramel", "peanut",  "sesame",  "garlic",   "onion",   "tomato",  "potato"};
const Words kTitles = {"INVOICE", "RECEIPT", "REGISTRATION", "FORM", "SERVICE", "REQUEST",
                       "ORDER",   "PURCHASE", "STATEMENT", "APPLICATION", "BILL", "CUSTOMER"};
const Words kFooters = {"Thank", "you", "Please", "come", "again", "Have", "a", "nice", "day"};

Words numbers(int lo, int hi) {
  Words out;
  for (int i = lo; i <= hi; ++i) out.push_back(std::to_string(i));
  return out;
}

Words price_words() {
  Words out;
  char buf[16];
  for (int cents = 50; cents <= 15000; cents += 25) {
    std::snprintf(buf, sizeof buf, "%d.%02d", cents / 100, cents % 100);
    out.emplace_back(buf);
  }
  return out;
}

Words invoice_codes() {
  Words out;
  for (int i = 0; i < 300; ++i) out.push_back("INV" + std::to_string(10000 + 7 * i));
  return out;
}

Words phone_numbers() {
  Words out;
  char buf[16];
  for (int i = 0; i < 200; ++i) {
    std::snprintf(buf, sizeof buf, "555-%04d", (1000 + 37 * i) % 10000);
    out.emplace_back(buf);
  }
  return out;
}

const Words& prices() {
  static const Words w = price_words();
  return w;
}
const Words& codes() {
  static const Words w = invoice_codes();
  return w;
}
const Words& phones() {
  static const Words w = phone_numbers();
  return w;
}

// Key phrase variants for every keyed field, plus distractor keys.
const std::map<std::string, std::vector<Words>>& key_variants() {
  static const std::map<std::string, std::vector<Words>> k = {
      {"company", {{"Company:"}, {"Vendor:"}, {"Store", "Name:"}}},
      {"date", {{"Date:"}, {"Issue", "Date:"}, {"Dated"}}},
      {"invoice_no", {{"Invoice", "No:"}, {"Invoice", "#"}, {"Bill", "No."}}},
      {"customer", {{"Customer:"}, {"Name:"}, {"Bill", "To:"}}},
      {"phone", {{"Phone:"}, {"Tel:"}, {"Contact", "No:"}}},
      {"address", {{"Address:"}, {"Addr:"}}},
      {"subtotal", {{"Subtotal"}, {"Sub", "Total"}}},
      {"tax", {{"Tax"}, {"VAT"}, {"Service", "Tax"}}},
      {"total", {{"Total"}, {"TOTAL"}, {"Amount", "Due"}, {"Grand", "Total"}}},
  };
  return k;
}

const Words kDistractorKeyWords = {"Due",     "Date:", "Fax:",   "Ref:",  "Page",   "of",
                                   "Cashier:", "Cash", "Change", "Discount", "Item", "Qty",
                                   "Price",   "Description", "Amount"};

enum class Distractor { DueDate, Fax, Ref, Page, Cashier, Cash, Change, Discount };

struct PendingWord {
  std::string text;
  Box box;
  int line = 0;
};

class PageBuilder {
 public:
  PageBuilder(Rng& rng, int jitter) : rng_(rng), jitter_(jitter) {
    page_.width = static_cast<int>(rng_.uniform_int(780, 860));
    page_.height = static_cast<int>(rng_.uniform_int(1000, 1120));
    char_w_ = static_cast<int>(rng_.uniform_int(8, 10));
    word_h_ = static_cast<int>(rng_.uniform_int(14, 18));
    margin_ = static_cast<int>(rng_.uniform_int(40, 70));
    spacing_ = static_cast<int>(rng_.uniform_int(26, 32));
    y_ = static_cast<int>(rng_.uniform_int(40, 80));
  }

  PageSize page() const { return page_; }
  int margin() const { return margin_; }
  int char_width() const { return char_w_; }

  int word_width(const std::string& w) const {
    return static_cast<int>(w.size()) * char_w_ + 4;
  }
  int phrase_width(const Words& ws) const {
    int total = 0;
    for (const auto& w : ws) total += word_width(w) + char_w_;
    return ws.empty() ? 0 : total - char_w_;
  }

  // Places words left to right starting at x on the current line. Returns the
  // pending ids and the x just past the phrase.
  std::vector<int> place(const Words& ws, int x, int y_offset = 0) {
    std::vector<int> ids;
    for (const auto& w : ws) {
      const int width = word_width(w);
      PendingWord pw;
      pw.text = w;
      pw.line = line_;
      pw.box = {x, y_ + y_offset, x + width, y_ + y_offset + word_h_};
      ids.push_back(static_cast<int>(words_.size()));
      words_.push_back(std::move(pw));
      x += width + char_w_;
    }
    last_x_ = x;
    return ids;
  }

  std::vector<int> place_right(const Words& ws, int right_edge) {
    return place(ws, right_edge - phrase_width(ws));
  }

  int last_x() const { return last_x_; }

  void newline(int gap = 0) {
    ++line_;
    y_ += spacing_ + gap;
  }

  int y() const { return y_; }
  int spacing() const { return spacing_; }
  std::size_t word_count() const { return words_.size(); }

  // Emits tokens in raster reading order with jittered pixel boxes. `old_to_new`
  // maps pending ids to token indices.
  std::vector<WordToken> finish(std::vector<int>& old_to_new) {
    std::vector<int> order(words_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const auto& wa = words_[static_cast<std::size_t>(a)];
      const auto& wb = words_[static_cast<std::size_t>(b)];
      if (wa.line != wb.line) return wa.line < wb.line;
      return wa.box.x0 < wb.box.x0;
    });
    old_to_new.assign(words_.size(), -1);
    std::vector<WordToken> tokens;
    tokens.reserve(words_.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto& pw = words_[static_cast<std::size_t>(order[k])];
      WordToken t;
      t.text = pw.text;
      t.index = static_cast<int>(k);
      t.raw_box = jittered(pw.box);
      tokens.push_back(std::move(t));
      old_to_new[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
    }
    return tokens;
  }

 private:
  Box jittered(Box b) {
    const int dx = static_cast<int>(rng_.uniform_int(-jitter_, jitter_));
    const int dy = static_cast<int>(rng_.uniform_int(-jitter_, jitter_));
    b.x0 += dx;
    b.x1 += dx;
    b.y0 += dy;
    b.y1 += dy;
    const auto clamp_pair = [](int& lo, int& hi, int extent) {
      const int w = hi - lo;
      if (lo < 0) {
        lo = 0;
        hi = w;
      }
      if (hi > extent) {
        hi = extent;
        lo = std::max(0, extent - w);
      }
    };
    clamp_pair(b.x0, b.x1, page_.width);
    clamp_pair(b.y0, b.y1, page_.height);
    return b;
  }

  Rng& rng_;
  int jitter_;
  PageSize page_;
  int char_w_, word_h_, margin_, spacing_, y_;
  int line_ = 0;
  int last_x_ = 0;
  std::vector<PendingWord> words_;
};

struct Generator {
  Rng& rng;

  Words value(const std::string& type) {
    if (type == "company") {
      Words w = {rng.pick(kCompanyPrefix), rng.pick(kCompanyCore)};
      if (rng.bernoulli(0.5)) w.push_back(rng.pick(kCompanySuffix));
      return w;
    }
    if (type == "date") {
      return {std::to_string(rng.uniform_int(1, 28)), rng.pick(kMonths),
              std::to_string(rng.uniform_int(2015, 2024))};
    }
    if (type == "invoice_no") return {rng.pick(codes())};
    if (type == "customer") return {rng.pick(kFirstNames), rng.pick(kLastNames)};
    if (type == "phone") return {rng.pick(phones())};
    if (type == "address") {
      return {std::to_string(rng.uniform_int(1, 200)), rng.pick(kStreets), rng.pick(kStreetSuffix)};
    }
    if (type == "item_name") {
      const auto n = rng.uniform_int(1, 3);
      Words w;
      for (int i = 0; i < n; ++i) w.push_back(rng.pick(kMenu));
      return w;
    }
    if (type == "item_qty") return {std::to_string(rng.uniform_int(1, 9))};
    // item_price, subtotal, tax, total
    return {rng.pick(prices())};
  }

  Words key(const std::string& type) { return rng.pick(key_variants().at(type)); }

  std::pair<Words, Words> distractor(Distractor d) {
    switch (d) {
      case Distractor::DueDate:
        return {{"Due", "Date:"}, value("date")};
      case Distractor::Fax:
        return {{"Fax:"}, value("phone")};
      case Distractor::Ref:
        return {{"Ref:"}, {rng.pick(codes())}};
      case Distractor::Page:
        return {{"Page"}, {"1", "of", std::to_string(rng.uniform_int(1, 3))}};
      case Distractor::Cashier:
        return {{"Cashier:"}, {rng.pick(kFirstNames)}};
      case Distractor::Cash:
        return {{"Cash"}, {rng.pick(prices())}};
      case Distractor::Change:
        return {{"Change"}, {rng.pick(prices())}};
      case Distractor::Discount:
        return {{"Discount"}, {rng.pick(prices())}};
    }
    return {};
  }
};

using Instances = std::map<std::string, std::vector<std::vector<int>>>;

const Words kFormFields = {"company", "date", "invoice_no", "customer", "phone", "address", "total"};

void title_line(PageBuilder& pb, Rng& rng) {
  Words title = {rng.pick(kTitles)};
  if (rng.bernoulli(0.6)) title.push_back(rng.pick(kTitles));
  const int x = (pb.page().width - pb.phrase_width(title)) / 2;
  pb.place(title, x);
  pb.newline(static_cast<int>(rng.uniform_int(10, 30)));
}

// Picks the field list for a form and interleaves distractor markers (empty
// strings stand for distractors).
Words form_fields(Rng& rng) {
  Words fields = kFormFields;
  rng.shuffle(fields);
  fields.resize(static_cast<std::size_t>(rng.uniform_int(3, 6)));
  const auto n_distract = rng.uniform_int(0, 2);
  for (int i = 0; i < n_distract; ++i) {
    const auto pos = rng.uniform_int(0, static_cast<std::int64_t>(fields.size()));
    fields.insert(fields.begin() + pos, std::string());
  }
  return fields;
}

Distractor form_distractor(Rng& rng) {
  static const std::vector<Distractor> kinds = {Distractor::DueDate, Distractor::Fax,
                                                Distractor::Ref, Distractor::Page,
                                                Distractor::Cashier};
  return rng.pick(kinds);
}

void horizontal_form(PageBuilder& pb, Rng& rng, Instances& inst) {
  Generator gen{rng};
  title_line(pb, rng);
  const bool aligned = rng.bernoulli(0.5);
  const int value_col = pb.margin() + static_cast<int>(rng.uniform_int(170, 230));
  const int gap = static_cast<int>(rng.uniform_int(10, 20));
  for (const auto& field : form_fields(rng)) {
    Words key, val;
    if (field.empty()) {
      std::tie(key, val) = gen.distractor(form_distractor(rng));
    } else {
      key = gen.key(field);
      val = gen.value(field);
    }
    pb.place(key, pb.margin());
    const int x = aligned ? std::max(value_col, pb.last_x() + gap) : pb.last_x() + gap;
    auto ids = pb.place(val, x);
    if (!field.empty()) inst[field].push_back(ids);
    pb.newline(static_cast<int>(rng.uniform_int(0, 12)));
  }
}

void vertical_form(PageBuilder& pb, Rng& rng, Instances& inst) {
  Generator gen{rng};
  title_line(pb, rng);
  const Words fields = form_fields(rng);
  const int col2 = pb.page().width / 2 + static_cast<int>(rng.uniform_int(-20, 20));
  const bool two_columns = rng.bernoulli(0.6);
  const std::size_t per_row = two_columns ? 2 : 1;
  for (std::size_t r = 0; r < fields.size(); r += per_row) {
    std::vector<std::pair<Words, Words>> row;
    std::vector<std::string> types;
    for (std::size_t c = 0; c < per_row && r + c < fields.size(); ++c) {
      const auto& field = fields[r + c];
      if (field.empty()) {
        row.push_back(gen.distractor(form_distractor(rng)));
      } else {
        row.emplace_back(gen.key(field), gen.value(field));
      }
      types.push_back(field);
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      pb.place(row[c].first, c == 0 ? pb.margin() : col2);
    }
    pb.newline(-static_cast<int>(rng.uniform_int(4, 8)));
    for (std::size_t c = 0; c < row.size(); ++c) {
      auto ids = pb.place(row[c].second, c == 0 ? pb.margin() : col2);
      if (!types[c].empty()) inst[types[c]].push_back(ids);
    }
    pb.newline(static_cast<int>(rng.uniform_int(8, 20)));
  }
}

void table_doc(PageBuilder& pb, Rng& rng, Instances& inst, int items) {
  Generator gen{rng};
  const int right = pb.page().width - pb.margin() - static_cast<int>(rng.uniform_int(0, 60));
  const int qty_col = pb.page().width * 55 / 100 + static_cast<int>(rng.uniform_int(-20, 20));

  auto company = gen.value("company");
  inst["company"].push_back(pb.place(company, (pb.page().width - pb.phrase_width(company)) / 2));
  pb.newline();
  if (rng.bernoulli(0.5)) {
    auto addr = gen.value("address");
    inst["address"].push_back(pb.place(addr, (pb.page().width - pb.phrase_width(addr)) / 2));
    pb.newline();
  }
  const auto kv_line = [&](const std::string& type, bool right_aligned) {
    pb.place(gen.key(type), pb.margin());
    auto val = gen.value(type);
    auto ids = right_aligned ? pb.place_right(val, right) : pb.place(val, pb.last_x() + 12);
    inst[type].push_back(ids);
    pb.newline();
  };
  if (rng.bernoulli(0.5)) kv_line("phone", false);
  kv_line("date", false);
  if (rng.bernoulli(0.4)) kv_line("invoice_no", false);
  pb.newline(static_cast<int>(rng.uniform_int(0, 10)));

  const bool alt_header = rng.bernoulli(0.5);
  pb.place({alt_header ? "Description" : "Item"}, pb.margin());
  pb.place({"Qty"}, qty_col);
  pb.place_right({alt_header ? "Amount" : "Price"}, right);
  pb.newline();
  for (int i = 0; i < items; ++i) {
    inst["item_name"].push_back(pb.place(gen.value("item_name"), pb.margin()));
    inst["item_qty"].push_back(pb.place(gen.value("item_qty"), qty_col));
    inst["item_price"].push_back(pb.place_right(gen.value("item_price"), right));
    pb.newline(static_cast<int>(rng.uniform_int(-4, 4)));
  }
  pb.newline(static_cast<int>(rng.uniform_int(0, 10)));
  kv_line("subtotal", true);
  if (rng.bernoulli(0.5)) kv_line("tax", true);
  if (rng.bernoulli(0.3)) {
    auto [k, v] = gen.distractor(Distractor::Discount);
    pb.place(k, pb.margin());
    pb.place_right(v, right);
    pb.newline();
  }
  kv_line("total", true);
  for (auto d : {Distractor::Cash, Distractor::Change}) {
    if (!rng.bernoulli(0.5)) continue;
    auto [k, v] = gen.distractor(d);
    pb.place(k, pb.margin());
    pb.place_right(v, right);
    pb.newline();
  }
  if (rng.bernoulli(0.7)) {
    const Words footer =
        rng.bernoulli(0.5) ? Words{"Thank", "you"} : Words{"Please", "come", "again"};
    pb.place(footer, (pb.page().width - pb.phrase_width(footer)) / 2);
  }
}

char layout_code(Layout l) {
  switch (l) {
    case Layout::HorizontalKV:
      return 'h';
    case Layout::VerticalKV:
      return 'v';
    case Layout::Table:
      return 't';
  }
  return '?';
}

Document build_document(Layout layout, Rng& rng, const SynthConfig& config, int items,
                        std::string doc_id) {
  PageBuilder pb(rng, config.jitter);
  Instances inst;
  switch (layout) {
    case Layout::HorizontalKV:
      horizontal_form(pb, rng, inst);
      break;
    case Layout::VerticalKV:
      vertical_form(pb, rng, inst);
      break;
    case Layout::Table:
      table_doc(pb, rng, inst, items);
      break;
  }
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.page = pb.page();
  std::vector<int> remap;
  doc.tokens = pb.finish(remap);
  const EntitySchema schema = synthetic_schema();
  for (const auto& type : schema.types()) {
    auto it = inst.find(type.id);
    if (it == inst.end()) continue;
    EntityAnnotation e;
    e.type = type.id;
    for (const auto& span : it->second) {
      std::vector<int> mapped;
      for (int id : span) mapped.push_back(remap[static_cast<std::size_t>(id)]);
      e.spans.push_back(std::move(mapped));
    }
    doc.entities.push_back(std::move(e));
  }
  return doc;
}

}  // namespace

Layout layout_from_id(const std::string& doc_id) {
  const auto pos = doc_id.rfind('-');
  if (pos == std::string::npos || pos < 2 || doc_id[pos - 2] != '-') {
    throw ArgumentError("doc id '" + doc_id + "' carries no layout code");
  }
  switch (doc_id[pos - 1]) {
    case 'h':
      return Layout::HorizontalKV;
    case 'v':
      return Layout::VerticalKV;
    case 't':
      return Layout::Table;
    default:
      throw ArgumentError("doc id '" + doc_id + "' carries no layout code");
  }
}

EntitySchema synthetic_schema() {
  return EntitySchema({{"company", "company name"},
                       {"date", "date"},
                       {"invoice_no", "invoice number"},
                       {"customer", "customer name"},
                       {"phone", "phone number"},
                       {"address", "address"},
                       {"item_name", "menu item name"},
                       {"item_qty", "item quantity"},
                       {"item_price", "item price"},
                       {"subtotal", "subtotal"},
                       {"tax", "tax"},
                       {"total", "total"}});
}

Vocabulary synthetic_vocabulary() {
  Words all;
  const auto add = [&all](const Words& ws) { all.insert(all.end(), ws.begin(), ws.end()); };
  add(kFirstNames);
  add(kLastNames);
  add(kCompanyPrefix);
  add(kCompanyCore);
  add(kCompanySuffix);
  add(kStreets);
  add(kStreetSuffix);
  add(kMonths);
  add(kMenu);
  add(kTitles);
  add(kFooters);
  add(kDistractorKeyWords);
  for (const auto& [type, variants] : key_variants()) {
    for (const auto& v : variants) add(v);
  }
  add(numbers(1, 200));
  add(numbers(2015, 2024));
  add(prices());
  add(codes());
  add(phones());
  return Vocabulary(all);
}

std::vector<Document> synthesize(const SynthConfig& config, std::uint64_t seed) {
  if (config.count < 0) throw ArgumentError("synthesis count must be non-negative");
  const double weights_arr[3] = {config.mix.horizontal, config.mix.vertical, config.mix.table};
  if (weights_arr[0] < 0 || weights_arr[1] < 0 || weights_arr[2] < 0 ||
      weights_arr[0] + weights_arr[1] + weights_arr[2] <= 0) {
    throw ArgumentError("layout mix weights must be non-negative with a positive sum");
  }
  const int min_items = std::max(2, config.min_items);
  const int max_items = std::max(min_items, config.max_items);

  std::vector<Document> docs;
  docs.reserve(static_cast<std::size_t>(config.count));
  Rng rng(seed);
  for (int n = 0; n < config.count; ++n) {
    const auto layout = static_cast<Layout>(rng.weighted(weights_arr));
    // Each document draws from its own stream so regeneration stays local.
    const std::uint64_t doc_seed = rng.next();
    int items = static_cast<int>(Rng(doc_seed).uniform_int(min_items, max_items));
    char id[64];
    std::snprintf(id, sizeof id, "%s-%c-%06d", config.id_prefix.c_str(), layout_code(layout), n);
    for (int attempt = 0;; ++attempt) {
      Rng doc_rng(mix_seed(doc_seed, static_cast<std::uint64_t>(attempt)));
      Document doc = build_document(layout, doc_rng, config, items, id);
      if (doc.size() <= kMaxAdmittedTokens && doc.size() >= kMinAdmittedTokens) {
        finalize(doc);
        docs.push_back(std::move(doc));
        break;
      }
      if (items > min_items) --items;
      if (attempt > 32) throw ValidationError("synthesizer could not fit document " + std::string(id));
    }
  }
  return docs;
}

}  // namespace docmatch::doc
