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

// Figure data. Each figure is a Table that is written verbatim as CSV; the
// SVG renderers read only the Table, so a figure's SVG is a function of its
// CSV.

#ifndef EVPERF_CLI_FIGURES_H_
#define EVPERF_CLI_FIGURES_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "evperf/gbdt.h"
#include "evperf/metrics.h"
#include "evperf/physics.h"
#include "evperf/treeshap.h"

namespace evperf::cli {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws if absent
  double number(std::size_t row, std::size_t col) const;
};

void write_csv(std::ostream& out, const Table& table);

// Rows are true classes, columns predicted classes.
Table confusion_table(const ConfusionMatrix& cm,
                      std::span<const std::string> class_names);
std::string confusion_svg(const Table& table);

// Total split gain per feature, highest first.
Table gain_importance_table(const Ensemble& model);
std::string gain_importance_svg(const Table& table);

// Mean |phi| per class plus the overall mean, highest overall first.
Table shap_importance_table(std::span<const FeatureImportance> ranking,
                            std::span<const std::string> class_names);
std::string shap_importance_svg(const Table& table);

// Long format, one row per sample, feature pair (i <= j) and class.
Table shap_swarm_table(std::span<const InteractionExplanation> interactions,
                       std::span<const std::string> feature_names,
                       std::span<const std::string> class_names);
// Draws the first class in the table, at most `max_rows` pairs ranked by
// mean |value|.
std::string shap_swarm_svg(const Table& table, std::size_t max_rows = 10);

// One row per sample: raw feature value and phi for every class.
Table dependence_table(std::span<const Explanation> explanations,
                       std::size_t feature,
                       std::span<const std::string> class_names);
std::string dependence_svg(const Table& table);

// Base value, contributions by |phi| and the output margin of one sample.
Table force_table(const ForcePlot& plot, std::size_t sample,
                  const std::string& class_name);
std::string force_svg(const Table& table);

Table sweep_table(std::span<const SweepPoint> sweep);
std::string sweep_svg(const Table& table);

}  // namespace evperf::cli

#endif  // EVPERF_CLI_FIGURES_H_
