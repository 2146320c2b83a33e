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

#include "evperf/cli/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

namespace evperf::cli {
namespace {

constexpr double kLeft = 200.0;
constexpr double kRight = 40.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 56.0;
constexpr double kPlotWidth = 460.0;
constexpr double kPlotHeight = 300.0;

constexpr const char* kAxis = "#333333";
constexpr const char* kGrid = "#dddddd";
constexpr const char* kPositive = "#d62728";
constexpr const char* kNegative = "#1f77b4";
constexpr const char* kBar = "#4c72b0";

struct Scale {
  double lo = 0.0;
  double hi = 1.0;
  double px_lo = 0.0;
  double px_hi = 1.0;

  double operator()(double v) const {
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

// Widens a degenerate interval so scales never divide by zero.
std::pair<double, double> padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

std::pair<double, double> extent(const std::vector<double>& values, bool with_zero) {
  double lo = with_zero ? 0.0 : INFINITY;
  double hi = with_zero ? 0.0 : -INFINITY;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
  return padded(lo, hi);
}

// Ticks may overshoot the data range; stretch the range to cover them.
std::vector<double> fit_ticks(double& lo, double& hi, int count = 5) {
  auto ticks = nice_ticks(lo, hi, count);
  if (ticks.size() >= 2) {
    const double step = ticks[1] - ticks[0];
    if (ticks.front() - lo > 1e-12 * step) ticks.insert(ticks.begin(), ticks.front() - step);
    if (hi - ticks.back() > 1e-12 * step) ticks.push_back(ticks.back() + step);
    lo = ticks.front();
    hi = ticks.back();
  }
  return ticks;
}

void x_axis(SvgDocument& doc, const Scale& x, const std::vector<double>& ticks,
            double y0, double y1, std::string_view label) {
  for (double t : ticks) {
    const double px = x(t);
    doc.line(px, y0, px, y1, kGrid);
    doc.line(px, y1, px, y1 + 4, kAxis);
    doc.text(px, y1 + 16, tick_label(t), "middle", 10);
  }
  doc.line(x.px_lo, y1, x.px_hi, y1, kAxis);
  doc.text((x.px_lo + x.px_hi) / 2, y1 + 36, label, "middle", 12);
}

void y_axis(SvgDocument& doc, const Scale& y, const std::vector<double>& ticks,
            double x0, double x1, std::string_view label) {
  for (double t : ticks) {
    const double py = y(t);
    doc.line(x0, py, x1, py, kGrid);
    doc.line(x0 - 4, py, x0, py, kAxis);
    doc.text(x0 - 7, py + 4, tick_label(t), "end", 10);
  }
  doc.line(x0, y.px_lo, x0, y.px_hi, kAxis);
  const double cy = (y.px_lo + y.px_hi) / 2;
  doc.text(x0 - 52, cy, label, "middle", 12, -90);
}

void title(SvgDocument& doc, std::string_view text) {
  doc.text(doc.width() / 2, 24, text, "middle", 14);
}

std::string blend(double t, bool negative) {
  t = std::clamp(t, 0.0, 1.0);
  // White to the diverging end colour.
  const int r2 = negative ? 214 : 31, g2 = negative ? 39 : 119, b2 = negative ? 40 : 180;
  const auto mix = [t](int to) { return static_cast<int>(std::lround(255 + (to - 255) * t)); };
  char buf[32];
  std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)", mix(r2), mix(g2), mix(b2));
  return buf;
}

}  // namespace

std::string svg_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_coord(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

SvgDocument::SvgDocument(double width, double height) : width_(width), height_(height) {}

void SvgDocument::rect(double x, double y, double w, double h, std::string_view fill,
                       std::string_view stroke) {
  if (w < 0) {
    x += w;
    w = -w;
  }
  body_ += "<rect x=\"" + svg_coord(x) + "\" y=\"" + svg_coord(y) + "\" width=\"" +
           svg_coord(w) + "\" height=\"" + svg_coord(h) + "\" fill=\"" +
           std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
}

void SvgDocument::line(double x1, double y1, double x2, double y2,
                       std::string_view stroke, double stroke_width) {
  body_ += "<line x1=\"" + svg_coord(x1) + "\" y1=\"" + svg_coord(y1) + "\" x2=\"" +
           svg_coord(x2) + "\" y2=\"" + svg_coord(y2) + "\" stroke=\"" +
           std::string(stroke) + "\" stroke-width=\"" + svg_coord(stroke_width) + "\"/>\n";
}

void SvgDocument::polyline(const std::vector<std::pair<double, double>>& points,
                           std::string_view stroke, double stroke_width) {
  if (points.empty()) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"" + svg_coord(stroke_width) + "\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ += ' ';
    body_ += svg_coord(points[i].first) + "," + svg_coord(points[i].second);
  }
  body_ += "\"/>\n";
}

void SvgDocument::circle(double cx, double cy, double r, std::string_view fill,
                         double opacity) {
  body_ += "<circle cx=\"" + svg_coord(cx) + "\" cy=\"" + svg_coord(cy) + "\" r=\"" +
           svg_coord(r) + "\" fill=\"" + std::string(fill) + "\"";
  if (opacity < 1.0) body_ += " fill-opacity=\"" + svg_coord(opacity) + "\"";
  body_ += "/>\n";
}

void SvgDocument::text(double x, double y, std::string_view content,
                       std::string_view anchor, double size, double rotate) {
  body_ += "<text x=\"" + svg_coord(x) + "\" y=\"" + svg_coord(y) +
           "\" font-family=\"sans-serif\" font-size=\"" + svg_coord(size) +
           "\" text-anchor=\"" + std::string(anchor) + "\"";
  if (rotate != 0.0) {
    body_ += " transform=\"rotate(" + svg_coord(rotate) + " " + svg_coord(x) + " " +
             svg_coord(y) + ")\"";
  }
  body_ += ">" + svg_escape(content) + "</text>\n";
}

std::string SvgDocument::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_coord(width_) +
         "\" height=\"" + svg_coord(height_) + "\" viewBox=\"0 0 " + svg_coord(width_) +
         " " + svg_coord(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         body_ + "</svg>\n";
}

std::vector<double> nice_ticks(double lo, double hi, int count) {
  std::tie(lo, hi) = padded(lo, hi);
  const double raw = (hi - lo) / std::max(count, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  const double first = std::ceil(lo / step - 1e-9) * step;
  for (int i = 0;; ++i) {
    const double t = first + i * step;
    if (t > hi + step * 1e-9) break;
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

std::string render_bar_chart(const BarChart& chart) {
  const std::size_t n = chart.labels.size();
  const double row = 24.0;
  const double plot_h = std::max(1.0, static_cast<double>(n)) * row;
  SvgDocument doc(kLeft + kPlotWidth + kRight, kTop + plot_h + kBottom);
  title(doc, chart.title);

  auto [lo, hi] = extent(chart.values, true);
  const auto ticks = fit_ticks(lo, hi);
  const Scale x{lo, hi, kLeft, kLeft + kPlotWidth};
  x_axis(doc, x, ticks, kTop, kTop + plot_h, chart.value_label);

  for (std::size_t i = 0; i < n; ++i) {
    const double v = i < chart.values.size() ? chart.values[i] : 0.0;
    const double y = kTop + i * row;
    doc.rect(x(0.0), y + 4, x(v) - x(0.0), row - 8, kBar);
    doc.text(kLeft - 6, y + row / 2 + 4, chart.labels[i], "end", 11);
    doc.text(std::max(x(v), x(0.0)) + 4, y + row / 2 + 4, tick_label(v), "start", 10);
  }
  doc.line(x(0.0), kTop, x(0.0), kTop + plot_h, kAxis);
  return doc.str();
}

std::string render_heatmap(const Heatmap& map) {
  const std::size_t rows = map.row_labels.size();
  const std::size_t cols = map.col_labels.size();
  const double cw = std::max(48.0, kPlotWidth / std::max<std::size_t>(cols, 1));
  const double ch = 32.0;
  SvgDocument doc(kLeft + cw * cols + kRight, kTop + 24 + ch * rows + kBottom);
  title(doc, map.title);

  double peak = 0.0;
  for (const auto& r : map.values) {
    for (double v : r) peak = std::max(peak, std::abs(v));
  }
  const double top = kTop + 24;
  for (std::size_t j = 0; j < cols; ++j) {
    doc.text(kLeft + (j + 0.5) * cw, top - 6, map.col_labels[j], "middle", 11);
  }
  for (std::size_t i = 0; i < rows; ++i) {
    doc.text(kLeft - 6, top + (i + 0.5) * ch + 4, map.row_labels[i], "end", 11);
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = i < map.values.size() && j < map.values[i].size() ? map.values[i][j] : 0.0;
      const double t = peak > 0 ? std::abs(v) / peak : 0.0;
      doc.rect(kLeft + j * cw, top + i * ch, cw, ch, blend(t, v < 0), "#ffffff");
      doc.text(kLeft + (j + 0.5) * cw, top + (i + 0.5) * ch + 4, tick_label(v), "middle", 10);
    }
  }
  doc.text(kLeft + cw * cols / 2, top + ch * rows + 30, map.x_label, "middle", 12);
  doc.text(22, top + ch * rows / 2, map.y_label, "middle", 12, -90);
  return doc.str();
}

std::string render_scatter(const ScatterPlot& plot) {
  SvgDocument doc(kLeft + kPlotWidth + kRight + 90, kTop + kPlotHeight + kBottom);
  title(doc, plot.title);

  std::vector<double> xs, ys;
  for (const auto& s : plot.series) {
    for (const auto& [px, py] : s.points) {
      xs.push_back(px);
      ys.push_back(py);
    }
  }
  auto [x_lo, x_hi] = extent(xs, false);
  auto [y_lo, y_hi] = extent(ys, false);
  const auto x_ticks = fit_ticks(x_lo, x_hi);
  const auto y_ticks = fit_ticks(y_lo, y_hi);
  const Scale x{x_lo, x_hi, kLeft, kLeft + kPlotWidth};
  const Scale y{y_lo, y_hi, kTop + kPlotHeight, kTop};
  x_axis(doc, x, x_ticks, kTop, kTop + kPlotHeight, plot.x_label);
  y_axis(doc, y, y_ticks, kLeft, kLeft + kPlotWidth, plot.y_label);

  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    std::vector<std::pair<double, double>> px;
    px.reserve(s.points.size());
    for (const auto& [a, b] : s.points) px.emplace_back(x(a), y(b));
    if (s.connect) {
      doc.polyline(px, s.color);
      for (const auto& [a, b] : px) doc.circle(a, b, 2.0, s.color);
    } else {
      for (const auto& [a, b] : px) doc.circle(a, b, 2.5, s.color, 0.6);
    }
    const double ly = kTop + 10 + si * 18;
    const double lx = kLeft + kPlotWidth + 14;
    doc.circle(lx, ly - 4, 4, s.color);
    doc.text(lx + 9, ly, s.name, "start", 11);
  }
  return doc.str();
}

std::string render_swarm(const SwarmPlot& plot) {
  const double row = 44.0;
  const std::size_t n = plot.rows.size();
  const double plot_h = std::max<std::size_t>(n, 1) * row;
  SvgDocument doc(kLeft + kPlotWidth + kRight, kTop + plot_h + kBottom);
  title(doc, plot.title);

  std::vector<double> all;
  for (const auto& r : plot.rows) all.insert(all.end(), r.values.begin(), r.values.end());
  auto [lo, hi] = extent(all, true);
  const auto ticks = fit_ticks(lo, hi);
  const Scale x{lo, hi, kLeft, kLeft + kPlotWidth};
  x_axis(doc, x, ticks, kTop, kTop + plot_h, plot.value_label);
  doc.line(x(0.0), kTop, x(0.0), kTop + plot_h, kAxis);

  constexpr double kDot = 2.0;
  const double half = row / 2 - 3;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = plot.rows[i];
    const double cy = kTop + (i + 0.5) * row;
    doc.text(kLeft - 6, cy + 4, r.label, "end", 11);
    std::vector<double> sorted = r.values;
    std::sort(sorted.begin(), sorted.end());
    std::map<long, int> occupancy;
    for (double v : sorted) {
      const double px = x(v);
      const int k = occupancy[std::lround(px / (2 * kDot))]++;
      const double offset = ((k + 1) / 2) * kDot * (k % 2 ? -1.0 : 1.0);
      const double py = cy + std::clamp(offset, -half, half);
      doc.circle(px, py, kDot, v < 0 ? kNegative : kPositive, 0.7);
    }
  }
  return doc.str();
}

std::string render_force(const ForceChart& chart) {
  const double row = 24.0;
  const std::size_t n = chart.bars.size();
  const double plot_h = (n + 2) * row;
  SvgDocument doc(kLeft + kPlotWidth + kRight, kTop + plot_h + kBottom);
  title(doc, chart.title);

  std::vector<double> stops{chart.base, chart.output};
  double run = chart.base;
  for (const auto& b : chart.bars) {
    run += b.value;
    stops.push_back(run);
  }
  auto [lo, hi] = extent(stops, false);
  const auto ticks = fit_ticks(lo, hi);
  const Scale x{lo, hi, kLeft, kLeft + kPlotWidth};
  x_axis(doc, x, ticks, kTop, kTop + plot_h, "margin (log-odds)");

  doc.text(kLeft - 6, kTop + row / 2 + 4, "base value", "end", 11);
  doc.line(x(chart.base), kTop + 3, x(chart.base), kTop + plot_h, kAxis, 1.5);
  doc.text(x(chart.base) + 4, kTop + row / 2 + 4, tick_label(chart.base), "start", 10);
  run = chart.base;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = chart.bars[i];
    const double y = kTop + (i + 1) * row;
    doc.rect(x(run), y + 4, x(run + b.value) - x(run), row - 8,
             b.value < 0 ? kNegative : kPositive);
    doc.text(kLeft - 6, y + row / 2 + 4, b.label, "end", 11);
    const double end = std::max(x(run), x(run + b.value));
    doc.text(end + 4, y + row / 2 + 4, (b.value > 0 ? "+" : "") + tick_label(b.value),
             "start", 10);
    run += b.value;
  }
  const double y = kTop + (n + 1) * row;
  doc.text(kLeft - 6, y + row / 2 + 4, "output", "end", 11);
  doc.line(x(chart.output), y + 3, x(chart.output), y + row - 3, kAxis, 3.0);
  doc.text(x(chart.output) + 5, y + row / 2 + 4, tick_label(chart.output), "start", 10);
  return doc.str();
}

}  // namespace evperf::cli
