// Copyright 2026 The revrl Authors
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

#include "revrl/experiments/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace revrl {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string render_line_chart(const LineChart& chart, int width, int height) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const LineSeries& s : chart.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("line chart: x/y length mismatch");
    const bool band = !s.lo.empty();
    if (band && (s.lo.size() != s.y.size() || s.hi.size() != s.y.size())) {
      throw std::invalid_argument("line chart: band length mismatch");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, band ? s.lo[i] : s.y[i]);
      y1 = std::max(y1, band ? s.hi[i] : s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double ml = 70, mr = 150, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return mt + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << esc(chart.title) << "</text>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    o << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
      << num(fx) << "</text>\n";
    o << "<text x=\"" << ml - 6 << "\" y=\"" << py(fy) + 4 << "\" text-anchor=\"end\">" << num(fy)
      << "</text>\n";
    o << "<line x1=\"" << ml << "\" x2=\"" << ml + pw << "\" y1=\"" << py(fy) << "\" y2=\""
      << py(fy) << "\" stroke=\"#eee\"/>\n";
  }
  o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
    << esc(chart.x_label) << "</text>\n";
  o << "<text transform=\"translate(16," << mt + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << esc(chart.y_label) << "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const LineSeries& s = chart.series[k];
    const char* color = kPalette[k % 8];
    if (!s.lo.empty() && !s.x.empty()) {
      o << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) o << px(s.x[i]) << ',' << py(s.hi[i]) << ' ';
      for (std::size_t i = s.x.size(); i-- > 0;) o << px(s.x[i]) << ',' << py(s.lo[i]) << ' ';
      o << "\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) o << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    o << "\"/>\n";
    const double ly = mt + 16 + 18.0 * static_cast<double>(k);
    o << "<line x1=\"" << ml + pw + 10 << "\" x2=\"" << ml + pw + 30 << "\" y1=\"" << ly
      << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << ml + pw + 34 << "\" y=\"" << ly + 4 << "\">" << esc(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string render_heatmap(const Heatmap& map, int cell) {
  if (map.rows < 1 || map.cols < 1 ||
      map.values.size() != static_cast<std::size_t>(map.rows) * map.cols) {
    throw std::invalid_argument("heatmap: shape");
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : map.values) {
    if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi == lo) hi = lo + 1;
  const int ml = 60, mt = 40;
  const int width = ml + map.cols * cell + 20, height = mt + map.rows * cell + 30;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << esc(map.title) << "</text>\n";
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      const double v = map.values[static_cast<std::size_t>(r) * map.cols + c];
      const double t = std::isfinite(v) ? (v - lo) / (hi - lo) : 0.0;
      // white -> dark blue
      const int red = static_cast<int>(255 - 225 * t), green = static_cast<int>(255 - 180 * t);
      o << "<rect x=\"" << ml + c * cell << "\" y=\"" << mt + r * cell << "\" width=\"" << cell
        << "\" height=\"" << cell << "\" fill=\"rgb(" << red << ',' << green
        << ",255)\" stroke=\"#ccc\"/>\n";
      if (map.annotate) {
        o << "<text x=\"" << ml + c * cell + cell / 2 << "\" y=\"" << mt + r * cell + cell / 2 + 4
          << "\" text-anchor=\"middle\" fill=\"" << (t > 0.6 ? "white" : "black") << "\">"
          << fixed(v) << "</text>\n";
      }
    }
    if (static_cast<std::size_t>(r) < map.row_labels.size()) {
      o << "<text x=\"" << ml - 6 << "\" y=\"" << mt + r * cell + cell / 2 + 4
        << "\" text-anchor=\"end\">" << esc(map.row_labels[r]) << "</text>\n";
    }
  }
  for (int c = 0; c < map.cols && static_cast<std::size_t>(c) < map.col_labels.size(); ++c) {
    o << "<text x=\"" << ml + c * cell + cell / 2 << "\" y=\"" << mt + map.rows * cell + 16
      << "\" text-anchor=\"middle\">" << esc(map.col_labels[c]) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace revrl
