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

#include "support.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace evperf::testing {
namespace {

int grow(Rng& rng, std::vector<TreeNode>& nodes, std::size_t num_features,
         int depth_left, bool force_split) {
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  const bool split = depth_left > 0 && (force_split || rng.uniform() < 0.75);
  if (!split) {
    nodes[index].weight = rng.uniform(-1.0, 1.0);
    nodes[index].cover = rng.uniform(0.5, 10.0);
    return index;
  }
  const int feature =
      static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(num_features) - 1));
  const double threshold = 0.25 * static_cast<double>(rng.uniform_int(1, 3));
  const int left = grow(rng, nodes, num_features, depth_left - 1, false);
  const int right = grow(rng, nodes, num_features, depth_left - 1, false);
  TreeNode& n = nodes[index];
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  n.cover = nodes[left].cover + nodes[right].cover;
  n.gain = 1.0;
  return index;
}

double factorial(std::size_t n) {
  double out = 1.0;
  for (std::size_t i = 2; i <= n; ++i) out *= static_cast<double>(i);
  return out;
}

// v(S) per class: base score plus the learning-rate scaled tree expectations.
std::vector<double> coalition_value(const Ensemble& model, std::span<const double> x,
                                    const std::vector<bool>& fixed) {
  std::vector<double> v = model.base_score;
  for (const auto& bt : model.trees) {
    v[static_cast<std::size_t>(bt.class_index)] +=
        model.learning_rate() * conditional_expectation(bt.tree, x, fixed);
  }
  return v;
}

double ls_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

Tree random_tree(Rng& rng, std::size_t num_features, int max_depth) {
  std::vector<TreeNode> nodes;
  const bool force = rng.uniform() < 0.9;
  grow(rng, nodes, num_features, max_depth, force);
  return Tree(std::move(nodes));
}

Ensemble random_ensemble(Rng& rng, std::size_t num_features, int max_rounds,
                         int max_depth, int num_class) {
  Ensemble e;
  e.num_class = num_class;
  for (int k = 0; k < num_class; ++k) e.base_score.push_back(rng.uniform(-1.0, 1.0));
  for (std::size_t f = 0; f < num_features; ++f) e.feature_names.push_back("f" + std::to_string(f));
  e.config.num_class = num_class;
  e.config.learning_rate = rng.uniform(0.05, 1.0);
  const int rounds = static_cast<int>(rng.uniform_int(1, max_rounds));
  e.config.n_rounds = rounds;
  e.config.max_depth = max_depth;
  for (int r = 0; r < rounds; ++r) {
    for (int k = 0; k < num_class; ++k) {
      const int depth = static_cast<int>(rng.uniform_int(1, max_depth));
      e.trees.push_back({r, k, random_tree(rng, num_features, depth)});
    }
  }
  return e;
}

std::vector<double> random_input(Rng& rng, std::size_t num_features) {
  std::vector<double> x(num_features);
  for (auto& v : x) {
    v = rng.uniform() < 0.3 ? 0.25 * static_cast<double>(rng.uniform_int(0, 4)) : rng.uniform();
  }
  return x;
}

InteractionExplanation brute_force_interactions(const Ensemble& model,
                                                std::span<const double> x) {
  const std::size_t d = model.num_features();
  const std::size_t K = static_cast<std::size_t>(model.num_class);
  InteractionExplanation out;
  out.num_features = d;
  out.num_class = K;
  out.values.assign(d * d * K, 0.0);
  out.base_value = coalition_value(model, x, std::vector<bool>(d, false));

  std::vector<std::vector<double>> v(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < v.size(); ++mask) {
    std::vector<bool> fixed(d);
    for (std::size_t f = 0; f < d; ++f) fixed[f] = (mask >> f) & 1U;
    v[mask] = coalition_value(model, x, fixed);
  }
  const Matrix phi = brute_force_shapley(model, x);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const std::size_t bi = std::size_t{1} << i, bj = std::size_t{1} << j;
      for (std::size_t mask = 0; mask < v.size(); ++mask) {
        if (mask & (bi | bj)) continue;
        const auto s = static_cast<std::size_t>(std::popcount(mask));
        const double w = factorial(s) * factorial(d - s - 2) / (2.0 * factorial(d - 1));
        for (std::size_t k = 0; k < K; ++k) {
          const double delta =
              v[mask | bi | bj][k] - v[mask | bi][k] - v[mask | bj][k] + v[mask][k];
          out.at(i, j, k) += w * delta;
        }
      }
      for (std::size_t k = 0; k < K; ++k) out.at(j, i, k) = out.at(i, j, k);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      double rest = phi(i, k);
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) rest -= out.at(i, j, k);
      }
      out.at(i, i, k) = rest;
    }
  }
  return out;
}

Matrix nearest_centroid_proba(const Matrix& train, std::span<const int> labels,
                              const Matrix& test, int num_class) {
  const std::size_t d = train.cols();
  const auto K = static_cast<std::size_t>(num_class);
  Matrix centroid(K, d);
  std::vector<double> count(K, 0.0);
  for (std::size_t r = 0; r < train.rows(); ++r) {
    const auto k = static_cast<std::size_t>(labels[r]);
    count[k] += 1.0;
    for (std::size_t c = 0; c < d; ++c) centroid(k, c) += train(r, c);
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t c = 0; c < d; ++c) centroid(k, c) /= std::max(count[k], 1.0);
  }
  Matrix out(test.rows(), K);
  for (std::size_t r = 0; r < test.rows(); ++r) {
    std::vector<double> score(K);
    for (std::size_t k = 0; k < K; ++k) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = test(r, c) - centroid(k, c);
        d2 += diff * diff;
      }
      score[k] = -d2;
    }
    const auto p = softmax(score);
    for (std::size_t k = 0; k < K; ++k) out(r, k) = p[k];
  }
  return out;
}

Matrix nearest_centroid_cv(const Dataset& dataset, int k, std::uint64_t seed) {
  const auto folds = stratified_kfold(dataset.labels, k, seed);
  const auto labels = dataset.label_indices();
  Matrix pooled(dataset.size(), kNumPerfClasses);
  for (int f = 0; f < k; ++f) {
    const auto train_idx = folds.training_indices(f);
    const auto valid_idx = folds.validation_indices(f);
    const Matrix train_x = dataset.features.select_rows(train_idx);
    const auto scaler = fit_scaler(train_x);
    std::vector<int> train_y;
    for (auto i : train_idx) train_y.push_back(labels[i]);
    const Matrix p = nearest_centroid_proba(
        apply_scaler(train_x, scaler), train_y,
        apply_scaler(dataset.features.select_rows(valid_idx), scaler), kNumPerfClasses);
    for (std::size_t r = 0; r < valid_idx.size(); ++r) {
      for (std::size_t c = 0; c < p.cols(); ++c) pooled(valid_idx[r], c) = p(r, c);
    }
  }
  return pooled;
}

DecileSlopes decile_slopes(std::span<const DependencePoint> points) {
  std::vector<DependencePoint> sorted(points.begin(), points.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.value < b.value; });
  const std::size_t n = sorted.size();
  std::vector<double> mean_x(10, 0.0), mean_y(10, 0.0);
  for (std::size_t b = 0; b < 10; ++b) {
    const std::size_t lo = b * n / 10, hi = (b + 1) * n / 10;
    for (std::size_t i = lo; i < hi; ++i) {
      mean_x[b] += sorted[i].value;
      mean_y[b] += sorted[i].phi;
    }
    const double m = static_cast<double>(std::max<std::size_t>(hi - lo, 1));
    mean_x[b] /= m;
    mean_y[b] /= m;
  }
  DecileSlopes out;
  out.bottom = ls_slope(std::span(mean_x).first(3), std::span(mean_y).first(3));
  out.top = ls_slope(std::span(mean_x).last(3), std::span(mean_y).last(3));
  return out;
}

SynthConfig torque_only_synth() {
  SynthConfig sc;
  sc.n_series = {120, 120};
  sc.n_parallel = {40, 40};
  sc.r_cell = {0.025, 0.025};
  sc.cell_mass = {0.07, 0.07};
  sc.cell_capacity = {5.0, 5.0};
  sc.base_mass = {1600, 1600};
  sc.gear_ratio = {9.0, 9.0};
  sc.c_d = {0.28, 0.28};
  sc.frontal_area = {2.3, 2.3};
  return sc;
}

}  // namespace evperf::testing
