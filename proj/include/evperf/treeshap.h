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

// Exact path-dependent Shapley attributions for boosted tree ensembles, plus
// the summaries built on them: global importance, dependence points,
// pairwise interaction values and force-plot decompositions.
//
// All quantities live in margin space (pre-softmax), where the additive
// identity base_value + sum(phi) == margin holds exactly.

#ifndef EVPERF_TREESHAP_H_
#define EVPERF_TREESHAP_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "evperf/gbdt.h"
#include "evperf/matrix.h"

namespace evperf {

struct Explanation {
  std::vector<double> base_value;  // per class
  Matrix phi;                      // num_features x num_class
  std::vector<double> margin;      // model margin at x, per class
  std::vector<double> x;           // model input
  std::vector<double> raw_x;       // unscaled feature values; defaults to x
  std::vector<std::string> feature_names;

  std::size_t num_features() const { return phi.rows(); }
  std::size_t num_class() const { return phi.cols(); }
};

struct InteractionExplanation {
  std::vector<double> base_value;
  std::size_t num_features = 0;
  std::size_t num_class = 0;
  std::vector<double> values;  // [i][j][k], row-major

  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return values[(i * num_features + j) * num_class + k];
  }
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return values[(i * num_features + j) * num_class + k];
  }
};

// Cover-weighted mean leaf value of one tree.
double expected_value(const Tree& tree);

// Tree output with features flagged in `fixed` taken from x and the others
// integrated out by node covers.
double conditional_expectation(const Tree& tree, std::span<const double> x,
                               const std::vector<bool>& fixed);

// Polynomial-time recursive attribution, O(leaves * depth^2) per tree.
Explanation shap_values(const Ensemble& model, std::span<const double> x);

inline constexpr std::size_t kMaxBruteForceFeatures = 12;

// Reference attribution enumerating every coalition, num_features x
// num_class. Cost grows as 2^d; throws InputError above
// kMaxBruteForceFeatures.
Matrix brute_force_shapley(const Ensemble& model, std::span<const double> x);

// Off-diagonal entries are half the change in phi_i between feature j forced
// present and forced absent, symmetrized; the diagonal takes the remainder so
// each row sums to phi_i.
InteractionExplanation interaction_values(const Ensemble& model,
                                          std::span<const double> x);

struct FeatureImportance {
  std::size_t feature = 0;
  std::string name;
  std::vector<double> per_class;  // mean |phi| per class
  double overall = 0.0;           // mean |phi| over samples and classes
};

// Sorted by `overall` descending; ties keep feature order.
std::vector<FeatureImportance> global_importance(
    std::span<const Explanation> explanations);

struct DependencePoint {
  double value = 0.0;  // raw feature value
  double phi = 0.0;
};

std::vector<DependencePoint> dependence_data(
    std::span<const Explanation> explanations, std::size_t feature,
    std::size_t class_index);

struct ForceEntry {
  std::string name;
  double value = 0.0;
  double phi = 0.0;
  int sign = 0;
};

struct ForcePlot {
  double base_value = 0.0;
  double margin = 0.0;
  // base_value + sum(phi) - margin; zero up to rounding.
  double residual = 0.0;
  std::vector<ForceEntry> entries;  // non-zero phi only, by |phi| descending
};

ForcePlot force_plot_data(const Explanation& explanation,
                          std::size_t class_index);

// One row per sample x feature x class: sample,feature,class,value,phi.
void write_explanations_csv(std::ostream& out,
                            std::span<const Explanation> explanations,
                            std::span<const std::string> class_names);

}  // namespace evperf

#endif  // EVPERF_TREESHAP_H_
