// Copyright 2026 The evperf Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal SVG writer and the handful of chart shapes the figure emitters
// need. Output depends only on the inputs; coordinates are printed with two
// decimals so files are stable across platforms.

#ifndef EVPERF_CLI_SVG_H_
#define EVPERF_CLI_SVG_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace evperf::cli {

std::string svg_escape(std::string_view text);
std::string svg_coord(double v);

class SvgDocument {
 public:
  SvgDocument(double width, double height);

  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none");
  void line(double x1, double y1, double x2, double y2, std::string_view stroke,
            double stroke_width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& points,
                std::string_view stroke, double stroke_width = 1.5);
  void circle(double cx, double cy, double r, std::string_view fill,
              double opacity = 1.0);
  // anchor: "start", "middle" or "end".
  void text(double x, double y, std::string_view content,
            std::string_view anchor = "start", double size = 12.0,
            double rotate = 0.0);

  double width() const { return width_; }
  double height() const { return height_; }
  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

// Roughly `count` round tick positions covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int count = 5);
std::string tick_label(double v);

struct BarChart {
  std::string title;
  std::string value_label;
  std::vector<std::string> labels;
  std::vector<double> values;
};
// Horizontal bars in the given order.
std::string render_bar_chart(const BarChart& chart);

struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<double>> values;  // [row][col]
};
std::string render_heatmap(const Heatmap& map);

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool connect = false;  // polyline instead of markers
};

struct ScatterPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};
std::string render_scatter(const ScatterPlot& plot);

struct SwarmRow {
  std::string label;
  std::vector<double> values;
};

struct SwarmPlot {
  std::string title;
  std::string value_label;
  std::vector<SwarmRow> rows;
};
// One horizontal strip per row; points are stacked vertically where they
// would overlap.
std::string render_swarm(const SwarmPlot& plot);

struct ForceBar {
  std::string label;
  double value = 0.0;
};

struct ForceChart {
  std::string title;
  double base = 0.0;
  double output = 0.0;
  std::vector<ForceBar> bars;
};
// Waterfall from the base value to the output, one bar per contribution.
std::string render_force(const ForceChart& chart);

}  // namespace evperf::cli

#endif  // EVPERF_CLI_SVG_H_
