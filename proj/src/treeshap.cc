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

#include "evperf/treeshap.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "evperf/errors.h"
#include "evperf/format.h"

namespace evperf {
namespace {

struct PathElement {
  int feature = -1;
  double zero_fraction = 0.0;
  double one_fraction = 0.0;
  double weight = 0.0;
};

using Path = std::vector<PathElement>;

// Grows the permutation-weight polynomial by one split feature.
void extend(Path& path, double zero_fraction, double one_fraction, int feature) {
  const std::size_t n = path.size();
  path.push_back({feature, zero_fraction, one_fraction, n == 0 ? 1.0 : 0.0});
  for (std::size_t i = n; i-- > 0;) {
    path[i + 1].weight += one_fraction * path[i].weight *
                          static_cast<double>(i + 1) / static_cast<double>(n + 1);
    path[i].weight = zero_fraction * path[i].weight *
                     static_cast<double>(n - i) / static_cast<double>(n + 1);
  }
}

// Inverse of extend for the element at `index`.
void unwind(Path& path, std::size_t index) {
  const std::size_t n = path.size() - 1;
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next = path[n].weight;
  for (std::size_t j = n; j-- > 0;) {
    if (one != 0.0) {
      const double tmp = path[j].weight;
      path[j].weight = next * static_cast<double>(n + 1) /
                       (static_cast<double>(j + 1) * one);
      next = tmp - path[j].weight * zero * static_cast<double>(n - j) /
                       static_cast<double>(n + 1);
    } else {
      path[j].weight = path[j].weight * static_cast<double>(n + 1) /
                       (zero * static_cast<double>(n - j));
    }
  }
  for (std::size_t j = index; j < n; ++j) {
    path[j].feature = path[j + 1].feature;
    path[j].zero_fraction = path[j + 1].zero_fraction;
    path[j].one_fraction = path[j + 1].one_fraction;
  }
  path.pop_back();
}

// Total permutation weight with the element at `index` removed.
double unwound_sum(const Path& path, std::size_t index) {
  const std::size_t n = path.size() - 1;
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next = path[n].weight;
  double total = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    if (one != 0.0) {
      const double tmp = next * static_cast<double>(n + 1) /
                         (static_cast<double>(j + 1) * one);
      total += tmp;
      next = path[j].weight - tmp * zero * static_cast<double>(n - j) /
                                  static_cast<double>(n + 1);
    } else {
      total += path[j].weight * static_cast<double>(n + 1) /
               (zero * static_cast<double>(n - j));
    }
  }
  return total;
}

// Feature conditioning for interaction values: 0 = none, +1 = the feature
// always follows x, -1 = the feature is always integrated out.
struct Condition {
  int mode = 0;
  int feature = -1;
};

class TreeShapRecursion {
 public:
  TreeShapRecursion(const Tree& tree, std::span<const double> x,
                    Condition condition, double scale, std::span<double> phi)
      : tree_(tree), x_(x), condition_(condition), scale_(scale), phi_(phi) {}

  void run() { recurse(0, Path{}, 1.0, 1.0, -1, 1.0); }

 private:
  void recurse(int index, Path path, double zero_fraction, double one_fraction,
               int feature, double condition_fraction) {
    if (condition_fraction == 0.0) return;
    if (condition_.mode == 0 || feature != condition_.feature) {
      extend(path, zero_fraction, one_fraction, feature);
    }
    const auto& node = tree_.node(static_cast<std::size_t>(index));
    if (node.is_leaf()) {
      for (std::size_t i = 1; i < path.size(); ++i) {
        const double w = unwound_sum(path, i);
        phi_[static_cast<std::size_t>(path[i].feature)] +=
            w * (path[i].one_fraction - path[i].zero_fraction) * node.weight *
            condition_fraction * scale_;
      }
      return;
    }

    const auto split = node.feature;
    const bool go_left = x_[static_cast<std::size_t>(split)] < node.threshold;
    const int hot = go_left ? node.left : node.right;
    const int cold = go_left ? node.right : node.left;
    const double hot_zero =
        tree_.node(static_cast<std::size_t>(hot)).cover / node.cover;
    const double cold_zero =
        tree_.node(static_cast<std::size_t>(cold)).cover / node.cover;

    double incoming_zero = 1.0;
    double incoming_one = 1.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (path[i].feature == split) {
        incoming_zero = path[i].zero_fraction;
        incoming_one = path[i].one_fraction;
        unwind(path, i);
        break;
      }
    }

    double hot_condition = condition_fraction;
    double cold_condition = condition_fraction;
    if (split == condition_.feature) {
      if (condition_.mode > 0) {
        cold_condition = 0.0;
      } else if (condition_.mode < 0) {
        hot_condition *= hot_zero;
        cold_condition *= cold_zero;
      }
    }
    recurse(hot, path, hot_zero * incoming_zero, incoming_one, split,
            hot_condition);
    recurse(cold, std::move(path), cold_zero * incoming_zero, 0.0, split,
            cold_condition);
  }

  const Tree& tree_;
  std::span<const double> x_;
  Condition condition_;
  double scale_;
  std::span<double> phi_;
};

void check_input(const Ensemble& model, std::span<const double> x) {
  if (x.size() != model.num_features()) {
    throw InputError("model expects " + std::to_string(model.num_features()) +
                     " features, got " + std::to_string(x.size()));
  }
}

// phi for every feature and class under one conditioning choice.
Matrix attribute(const Ensemble& model, std::span<const double> x,
                 Condition condition) {
  const auto d = model.num_features();
  const auto k = static_cast<std::size_t>(model.num_class);
  std::vector<std::vector<double>> by_class(k, std::vector<double>(d, 0.0));
  for (const auto& bt : model.trees) {
    if (bt.tree.root().is_leaf()) continue;
    TreeShapRecursion(bt.tree, x, condition, model.learning_rate(),
                      by_class[static_cast<std::size_t>(bt.class_index)])
        .run();
  }
  Matrix phi(d, k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < d; ++i) phi(i, c) = by_class[c][i];
  }
  return phi;
}

std::vector<bool> features_used(const Ensemble& model) {
  std::vector<bool> used(model.num_features(), false);
  for (const auto& bt : model.trees) {
    for (const auto& n : bt.tree.nodes()) {
      if (!n.is_leaf()) used[static_cast<std::size_t>(n.feature)] = true;
    }
  }
  return used;
}

}  // namespace

double expected_value(const Tree& tree) {
  return conditional_expectation(tree, {}, {});
}

double conditional_expectation(const Tree& tree, std::span<const double> x,
                               const std::vector<bool>& fixed) {
  auto walk = [&](auto&& self, int index) -> double {
    const auto& n = tree.node(static_cast<std::size_t>(index));
    if (n.is_leaf()) return n.weight;
    const auto f = static_cast<std::size_t>(n.feature);
    if (f < fixed.size() && fixed[f]) {
      return self(self, x[f] < n.threshold ? n.left : n.right);
    }
    const auto& l = tree.node(static_cast<std::size_t>(n.left));
    const auto& r = tree.node(static_cast<std::size_t>(n.right));
    return (l.cover * self(self, n.left) + r.cover * self(self, n.right)) /
           (l.cover + r.cover);
  };
  return walk(walk, 0);
}

Explanation shap_values(const Ensemble& model, std::span<const double> x) {
  check_input(model, x);
  Explanation e;
  e.phi = attribute(model, x, Condition{});
  e.base_value = model.base_score;
  for (const auto& bt : model.trees) {
    e.base_value[static_cast<std::size_t>(bt.class_index)] +=
        model.learning_rate() * expected_value(bt.tree);
  }
  e.margin = predict_margin(model, x);
  e.x.assign(x.begin(), x.end());
  e.raw_x = e.x;
  e.feature_names = model.feature_names;
  return e;
}

Matrix brute_force_shapley(const Ensemble& model, std::span<const double> x) {
  check_input(model, x);
  const std::size_t d = model.num_features();
  if (d > kMaxBruteForceFeatures) {
    throw InputError("brute-force Shapley supports at most " +
                     std::to_string(kMaxBruteForceFeatures) + " features");
  }
  const auto k = static_cast<std::size_t>(model.num_class);
  const std::size_t subsets = std::size_t{1} << d;

  // value[S][class]
  std::vector<double> value(subsets * k, 0.0);
  std::vector<bool> fixed(d);
  for (std::size_t s = 0; s < subsets; ++s) {
    for (std::size_t i = 0; i < d; ++i) fixed[i] = (s >> i) & 1U;
    for (const auto& bt : model.trees) {
      value[s * k + static_cast<std::size_t>(bt.class_index)] +=
          model.learning_rate() * conditional_expectation(bt.tree, x, fixed);
    }
  }

  std::vector<double> factorial(d + 1, 1.0);
  for (std::size_t i = 1; i <= d; ++i) {
    factorial[i] = factorial[i - 1] * static_cast<double>(i);
  }

  Matrix phi(d, k);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < subsets; ++s) {
      if (s & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(s));
      const double w = factorial[size] * factorial[d - size - 1] / factorial[d];
      for (std::size_t c = 0; c < k; ++c) {
        phi(i, c) += w * (value[(s | bit) * k + c] - value[s * k + c]);
      }
    }
  }
  return phi;
}

InteractionExplanation interaction_values(const Ensemble& model,
                                          std::span<const double> x) {
  const Explanation base = shap_values(model, x);
  const std::size_t d = model.num_features();
  const auto k = static_cast<std::size_t>(model.num_class);

  InteractionExplanation out;
  out.base_value = base.base_value;
  out.num_features = d;
  out.num_class = k;
  out.values.assign(d * d * k, 0.0);

  // half_diff[j](i, c): change in phi_i when j is forced on versus off.
  const auto used = features_used(model);
  std::vector<Matrix> half_diff(d, Matrix(d, k));
  for (std::size_t j = 0; j < d; ++j) {
    if (!used[j]) continue;
    const int fj = static_cast<int>(j);
    const Matrix on = attribute(model, x, Condition{+1, fj});
    const Matrix off = attribute(model, x, Condition{-1, fj});
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t c = 0; c < k; ++c) {
        half_diff[j](i, c) = (on(i, c) - off(i, c)) / 2.0;
      }
    }
  }

  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      for (std::size_t c = 0; c < k; ++c) {
        const double v = (half_diff[j](i, c) + half_diff[i](j, c)) / 2.0;
        out.at(i, j, c) = v;
        out.at(j, i, c) = v;
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      double off_diagonal = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) off_diagonal += out.at(i, j, c);
      }
      out.at(i, i, c) = base.phi(i, c) - off_diagonal;
    }
  }
  return out;
}

std::vector<FeatureImportance> global_importance(
    std::span<const Explanation> explanations) {
  if (explanations.empty()) {
    throw InputError("global importance needs at least one explanation");
  }
  const std::size_t d = explanations.front().num_features();
  const std::size_t k = explanations.front().num_class();
  std::vector<FeatureImportance> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    out[i].feature = i;
    if (i < explanations.front().feature_names.size()) {
      out[i].name = explanations.front().feature_names[i];
    }
    out[i].per_class.assign(k, 0.0);
  }
  for (const auto& e : explanations) {
    if (e.num_features() != d || e.num_class() != k) {
      throw InputError("explanations have inconsistent shapes");
    }
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t c = 0; c < k; ++c) {
        out[i].per_class[c] += std::abs(e.phi(i, c));
      }
    }
  }
  const auto n = static_cast<double>(explanations.size());
  for (auto& fi : out) {
    double total = 0.0;
    for (auto& v : fi.per_class) {
      total += v;
      v /= n;
    }
    fi.overall = total / (n * static_cast<double>(k));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.overall > b.overall;
                   });
  return out;
}

std::vector<DependencePoint> dependence_data(
    std::span<const Explanation> explanations, std::size_t feature,
    std::size_t class_index) {
  std::vector<DependencePoint> out;
  out.reserve(explanations.size());
  for (const auto& e : explanations) {
    if (feature >= e.num_features() || feature >= e.raw_x.size()) {
      throw InputError("dependence feature index out of range");
    }
    if (class_index >= e.num_class()) {
      throw InputError("dependence class index out of range");
    }
    out.push_back({e.raw_x[feature], e.phi(feature, class_index)});
  }
  return out;
}

ForcePlot force_plot_data(const Explanation& explanation,
                          std::size_t class_index) {
  if (class_index >= explanation.num_class()) {
    throw InputError("force plot class index out of range");
  }
  ForcePlot plot;
  plot.base_value = explanation.base_value.at(class_index);
  plot.margin = explanation.margin.at(class_index);
  double total = plot.base_value;
  for (std::size_t i = 0; i < explanation.num_features(); ++i) {
    const double phi = explanation.phi(i, class_index);
    total += phi;
    if (phi == 0.0) continue;
    ForceEntry entry;
    entry.name = i < explanation.feature_names.size()
                     ? explanation.feature_names[i]
                     : "f" + std::to_string(i);
    entry.value = i < explanation.raw_x.size() ? explanation.raw_x[i] : 0.0;
    entry.phi = phi;
    entry.sign = phi > 0.0 ? 1 : -1;
    plot.entries.push_back(std::move(entry));
  }
  plot.residual = total - plot.margin;
  std::stable_sort(plot.entries.begin(), plot.entries.end(),
                   [](const ForceEntry& a, const ForceEntry& b) {
                     return std::abs(a.phi) > std::abs(b.phi);
                   });
  return plot;
}

void write_explanations_csv(std::ostream& out,
                            std::span<const Explanation> explanations,
                            std::span<const std::string> class_names) {
  out << "sample,feature,class,value,phi\n";
  for (std::size_t s = 0; s < explanations.size(); ++s) {
    const auto& e = explanations[s];
    for (std::size_t i = 0; i < e.num_features(); ++i) {
      for (std::size_t c = 0; c < e.num_class(); ++c) {
        out << s << ',' << e.feature_names.at(i) << ','
            << (c < class_names.size() ? class_names[c] : std::to_string(c))
            << ',' << format_number(e.raw_x.at(i)) << ','
            << format_number(e.phi(i, c)) << '\n';
      }
    }
  }
}

}  // namespace evperf
