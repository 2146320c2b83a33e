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

#include "evperf/cli/figures.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "evperf/cli/svg.h"
#include "evperf/errors.h"
#include "evperf/format.h"

namespace evperf::cli {
namespace {

constexpr const char* kClassColors[] = {"#d62728", "#2ca02c", "#1f77b4", "#9467bd",
                                        "#ff7f0e", "#8c564b"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* class_color(std::size_t k) {
  return kClassColors[k % std::size(kClassColors)];
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::invalid_argument("table has no column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::size_t col) const {
  const std::string& s = rows.at(row).at(col);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("table cell is not a number: '" + s + "'");
  }
  return v;
}

void write_csv(std::ostream& out, const Table& table) {
  auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_field(row[i]);
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
}

Table confusion_table(const ConfusionMatrix& cm,
                      std::span<const std::string> class_names) {
  auto name = [&](int k) {
    return static_cast<std::size_t>(k) < class_names.size()
               ? class_names[static_cast<std::size_t>(k)]
               : std::to_string(k);
  };
  Table t;
  t.header.push_back("true\\predicted");
  for (int j = 0; j < cm.num_class(); ++j) t.header.push_back(name(j));
  for (int i = 0; i < cm.num_class(); ++i) {
    std::vector<std::string> row{name(i)};
    for (int j = 0; j < cm.num_class(); ++j) row.push_back(std::to_string(cm.at(i, j)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string confusion_svg(const Table& table) {
  Heatmap map;
  map.title = "Confusion matrix (cross-validated)";
  map.x_label = "predicted class";
  map.y_label = "true class";
  map.col_labels.assign(table.header.begin() + 1, table.header.end());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    map.row_labels.push_back(table.rows[r][0]);
    std::vector<double> values;
    for (std::size_t c = 1; c < table.header.size(); ++c) values.push_back(table.number(r, c));
    map.values.push_back(std::move(values));
  }
  return render_heatmap(map);
}

Table gain_importance_table(const Ensemble& model) {
  const auto gain = gain_importance(model);
  std::vector<std::size_t> order(gain.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });
  Table t;
  t.header = {"feature", "gain"};
  for (std::size_t f : order) {
    const std::string name =
        f < model.feature_names.size() ? model.feature_names[f] : "f" + std::to_string(f);
    t.rows.push_back({name, format_number(gain[f])});
  }
  return t;
}

std::string gain_importance_svg(const Table& table) {
  BarChart chart;
  chart.title = "Gain importance";
  chart.value_label = "total split gain";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    chart.labels.push_back(table.rows[r][0]);
    chart.values.push_back(table.number(r, 1));
  }
  return render_bar_chart(chart);
}

Table shap_importance_table(std::span<const FeatureImportance> ranking,
                            std::span<const std::string> class_names) {
  Table t;
  t.header.push_back("feature");
  for (const auto& c : class_names) t.header.push_back(c);
  t.header.push_back("overall");
  for (const auto& fi : ranking) {
    std::vector<std::string> row{fi.name};
    for (std::size_t k = 0; k < class_names.size(); ++k) {
      row.push_back(format_number(k < fi.per_class.size() ? fi.per_class[k] : 0.0));
    }
    row.push_back(format_number(fi.overall));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string shap_importance_svg(const Table& table) {
  BarChart chart;
  chart.title = "SHAP feature importance";
  chart.value_label = "mean |SHAP value| (margin, all classes)";
  const std::size_t col = table.column("overall");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    chart.labels.push_back(table.rows[r][0]);
    chart.values.push_back(table.number(r, col));
  }
  return render_bar_chart(chart);
}

Table shap_swarm_table(std::span<const InteractionExplanation> interactions,
                       std::span<const std::string> feature_names,
                       std::span<const std::string> class_names) {
  Table t;
  t.header = {"sample", "feature_i", "feature_j", "class", "value"};
  for (std::size_t s = 0; s < interactions.size(); ++s) {
    const auto& ie = interactions[s];
    for (std::size_t i = 0; i < ie.num_features; ++i) {
      for (std::size_t j = i; j < ie.num_features; ++j) {
        for (std::size_t k = 0; k < ie.num_class; ++k) {
          t.rows.push_back({std::to_string(s), feature_names[i], feature_names[j],
                            k < class_names.size() ? class_names[k] : std::to_string(k),
                            format_number(ie.at(i, j, k))});
        }
      }
    }
  }
  return t;
}

std::string shap_swarm_svg(const Table& table, std::size_t max_rows) {
  const std::size_t ci = table.column("feature_i");
  const std::size_t cj = table.column("feature_j");
  const std::size_t ck = table.column("class");
  const std::size_t cv = table.column("value");
  const std::string cls = table.rows.empty() ? std::string() : table.rows.front()[ck];

  std::vector<std::string> order;
  std::map<std::string, SwarmRow> rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[ck] != cls) continue;
    const std::string label = row[ci] == row[cj] ? row[ci] : row[ci] + " x " + row[cj];
    auto [it, fresh] = rows.try_emplace(label);
    if (fresh) {
      it->second.label = label;
      order.push_back(label);
    }
    it->second.values.push_back(table.number(r, cv));
  }
  auto mean_abs = [&](const std::string& label) {
    const auto& v = rows.at(label).values;
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  std::vector<double> score;
  for (const auto& label : order) score.push_back(mean_abs(label));
  std::vector<std::size_t> idx(order.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

  SwarmPlot plot;
  plot.title = "SHAP interaction values, class " + cls;
  plot.value_label = "SHAP interaction value (margin)";
  for (std::size_t n = 0; n < idx.size() && n < max_rows; ++n) {
    plot.rows.push_back(rows.at(order[idx[n]]));
  }
  return render_swarm(plot);
}

Table dependence_table(std::span<const Explanation> explanations, std::size_t feature,
                       std::span<const std::string> class_names) {
  if (explanations.empty()) throw InputError("no samples to explain");
  if (feature >= explanations.front().num_features()) {
    throw InputError("dependence feature index out of range");
  }
  Table t;
  t.header = {"sample", explanations.front().feature_names.at(feature)};
  for (const auto& c : class_names) t.header.push_back("phi_" + c);
  std::vector<std::vector<DependencePoint>> per_class;
  for (std::size_t k = 0; k < class_names.size(); ++k) {
    per_class.push_back(dependence_data(explanations, feature, k));
  }
  for (std::size_t s = 0; s < explanations.size(); ++s) {
    std::vector<std::string> row{std::to_string(s), format_number(per_class.front()[s].value)};
    for (const auto& pts : per_class) row.push_back(format_number(pts[s].phi));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string dependence_svg(const Table& table) {
  ScatterPlot plot;
  plot.title = "SHAP dependence: " + table.header.at(1);
  plot.x_label = table.header.at(1);
  plot.y_label = "SHAP value (margin)";
  for (std::size_t c = 2; c < table.header.size(); ++c) {
    Series s;
    s.name = table.header[c].substr(table.header[c].rfind('_') + 1);
    s.color = class_color(c - 2);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      s.points.emplace_back(table.number(r, 1), table.number(r, c));
    }
    plot.series.push_back(std::move(s));
  }
  return render_scatter(plot);
}

Table force_table(const ForcePlot& plot, std::size_t sample, const std::string& class_name) {
  Table t;
  t.header = {"sample", "class", "kind", "feature", "value", "phi"};
  const std::string id = std::to_string(sample);
  t.rows.push_back({id, class_name, "base", "", "", format_number(plot.base_value)});
  for (const auto& e : plot.entries) {
    t.rows.push_back({id, class_name, "contribution", e.name, format_number(e.value),
                      format_number(e.phi)});
  }
  t.rows.push_back({id, class_name, "output", "", "", format_number(plot.margin)});
  return t;
}

std::string force_svg(const Table& table) {
  ForceChart chart;
  const std::size_t kind = table.column("kind");
  const std::size_t feature = table.column("feature");
  const std::size_t value = table.column("value");
  const std::size_t phi = table.column("phi");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[kind] == "base") {
      chart.base = table.number(r, phi);
      chart.title = "Force plot: sample " + row[0] + ", class " + row[1];
    } else if (row[kind] == "output") {
      chart.output = table.number(r, phi);
    } else {
      chart.bars.push_back(
          {row[feature] + " = " + tick_label(table.number(r, value)), table.number(r, phi)});
    }
  }
  return render_force(chart);
}

Table sweep_table(std::span<const SweepPoint> sweep) {
  Table t;
  t.header = {"n_parallel", "cell_count", "total_mass_kg", "pack_resistance_ohm",
              "max_power_w", "accel_time_0_100_s"};
  for (const auto& p : sweep) {
    t.rows.push_back({std::to_string(p.n_parallel), std::to_string(p.cell_count),
                      format_number(p.total_mass), format_number(p.pack_resistance),
                      format_number(p.max_power), format_number(p.accel_time)});
  }
  return t;
}

std::string sweep_svg(const Table& table) {
  ScatterPlot plot;
  plot.title = "0-100 km/h time vs cell count";
  plot.x_label = "number of cells";
  plot.y_label = "0-100 km/h time (s)";
  Series s;
  s.name = "time";
  s.color = class_color(2);
  s.connect = true;
  const std::size_t cx = table.column("cell_count");
  const std::size_t cy = table.column("accel_time_0_100_s");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    s.points.emplace_back(table.number(r, cx), table.number(r, cy));
  }
  plot.series.push_back(std::move(s));
  return render_scatter(plot);
}

}  // namespace evperf::cli
