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

#ifndef REVRL_EXPERIMENTS_SVG_H_
#define REVRL_EXPERIMENTS_SVG_H_

#include <string>
#include <vector>

namespace revrl {

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> lo;  // optional band, same length as y
  std::vector<double> hi;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<LineSeries> series;
};

std::string render_line_chart(const LineChart& chart, int width = 720, int height = 420);

struct Heatmap {
  std::string title;
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  bool annotate = false;
};

std::string render_heatmap(const Heatmap& map, int cell = 48);

}  // namespace revrl

#endif  // REVRL_EXPERIMENTS_SVG_H_
