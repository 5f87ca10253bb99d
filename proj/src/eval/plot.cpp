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

#include "docmatch/eval/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "docmatch/error.hpp"

namespace docmatch::eval {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 64;
constexpr double kRight = 24;
constexpr double kTop = 40;
constexpr double kBottom = 64;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
}

void axes(std::ostringstream& out) {
  const double x0 = kLeft, y0 = kHeight - kBottom;
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(kWidth - kRight) << "\" y2=\""
      << num(y0) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << num(x0) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x0) << "\" y2=\"" << num(y0)
      << "\" stroke=\"black\"/>\n";
}

}  // namespace

std::string line_chart_svg(const std::vector<Series>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) throw ArgumentError("line chart has no finite points");
  if (xmax == xmin) xmax = xmin + 1;
  ymin = std::min(ymin, 0.0);
  if (ymax == ymin) ymax = ymin + 1;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return kTop + (1 - (y - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream out;
  header(out, title);
  axes(out);
  for (int i = 0; i <= 4; ++i) {
    const double y = ymin + (ymax - ymin) * i / 4;
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">" << tick(y)
        << "</text>\n";
    const double x = xmin + (xmax - xmin) * i / 4;
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kHeight - kBottom + 16)
        << "\" text-anchor=\"middle\">" << tick(x) << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 20) << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(kTop + ph / 2) << ")\">" << escape(y_label) << "</text>\n";

  int color = 0;
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    const char* stroke = kColors[color % 6];
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      out << (first ? "" : " ") << num(px(x)) << ',' << num(py(y));
      first = false;
    }
    out << "\"/>\n";
    const double ly = kTop + 14 + 16 * color;
    out << "<text x=\"" << num(kWidth - kRight - 8) << "\" y=\"" << num(ly) << "\" text-anchor=\"end\" fill=\""
        << stroke << "\">" << escape(s.name) << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
  return out.str();
}

std::string bar_chart_svg(const std::vector<std::string>& labels, const std::vector<double>& values,
                          const std::string& title) {
  if (labels.size() != values.size()) throw ArgumentError("bar chart labels and values differ in length");
  if (labels.empty()) throw ArgumentError("bar chart has no bars");
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double slot = pw / static_cast<double>(labels.size());
  const auto py = [&](double y) { return kTop + (1 - std::clamp(y, 0.0, 1.0)) * ph; };

  std::ostringstream out;
  header(out, title);
  axes(out);
  for (int i = 0; i <= 4; ++i) {
    const double y = i / 4.0;
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">" << tick(y)
        << "</text>\n";
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double v = std::isfinite(values[i]) ? values[i] : 0.0;
    const double x = kLeft + slot * (static_cast<double>(i) + 0.15);
    const double w = slot * 0.7;
    const double top = py(v);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(top) << "\" width=\"" << num(w) << "\" height=\""
        << num(kHeight - kBottom - top) << "\" fill=\"" << kColors[0] << "\"/>\n"
        << "<text x=\"" << num(x + w / 2) << "\" y=\"" << num(top - 4) << "\" text-anchor=\"middle\">"
        << tick(v) << "</text>\n"
        << "<text x=\"" << num(x + w / 2) << "\" y=\"" << num(kHeight - kBottom + 16)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << escape(labels[i]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace docmatch::eval
