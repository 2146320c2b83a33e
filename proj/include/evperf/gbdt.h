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

// Multi-class gradient-boosted decision trees with second-order exact greedy
// split search and L1/L2 leaf regularization, trained under softmax log loss.

#ifndef EVPERF_GBDT_H_
#define EVPERF_GBDT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evperf/data_pipeline.h"
#include "evperf/matrix.h"

namespace evperf {

struct TrainConfig {
  int n_rounds = 200;
  double learning_rate = 0.1;
  int max_depth = 4;
  double lambda = 1.0;  // L2 on leaf weights
  double alpha = 0.0;   // L1 on leaf weights
  double gamma = 0.0;   // minimum split gain
  double min_child_hessian = 1e-3;
  int num_class = kNumPerfClasses;
  std::uint64_t seed = 0;

  // Throws InputError naming the first out-of-range field.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Lower clamp on per-sample Hessians.
inline constexpr double kMinHessian = 1e-16;

// A node is a leaf when `feature` is negative. Rows with x[feature] <
// threshold go left. `cover` is the Hessian sum routed through the node and
// `gain` the regularized gain realized by its split.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;
  double cover = 0.0;
  double gain = 0.0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Binary tree stored as a node array; node 0 is the root.
class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes);

  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  int leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const {
    return nodes_[static_cast<std::size_t>(leaf_index(x))].weight;
  }
  // Number of edges on the longest root-to-leaf path.
  int depth() const;
  // Largest feature index used by a split, or -1 for a lone leaf.
  int max_feature() const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

struct BoostedTree {
  int round = 0;
  int class_index = 0;
  Tree tree;

  friend bool operator==(const BoostedTree&, const BoostedTree&) = default;
};

// Trees are stored round-major with `num_class` consecutive trees per round.
// Leaf weights are unscaled; prediction multiplies them by the learning rate.
struct Ensemble {
  std::vector<BoostedTree> trees;
  std::vector<double> base_score;
  int num_class = 0;
  std::vector<std::string> feature_names;
  TrainConfig config;

  std::size_t num_features() const { return feature_names.size(); }
  double learning_rate() const { return config.learning_rate; }

  // Throws InputError when the structural invariants do not hold.
  void validate() const;

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

std::vector<double> softmax(std::span<const double> scores);

struct GradHess {
  std::vector<double> grad;
  std::vector<double> hess;
};

// Per-class gradient p_k - [k == label] and diagonal Hessian p_k (1 - p_k),
// clamped below at kMinHessian.
GradHess mlogloss_grad_hess(std::span<const double> probs, int label);

// sign(g) * max(|g| - alpha, 0).
double soft_threshold(double g, double alpha);

double split_gain(double grad_left, double hess_left, double grad_right,
                  double hess_right, const TrainConfig& cfg);

double leaf_weight(double grad, double hess, const TrainConfig& cfg);

// Exact greedy growth over every midpoint between consecutive distinct
// feature values. Equal gains resolve to the lowest feature index, then the
// lowest threshold.
Tree build_tree(const Matrix& features, std::span<const double> grad,
                std::span<const double> hess, const TrainConfig& cfg);

// Generic entry point; labels must lie in [0, cfg.num_class) and every class
// must occur. Throws InputError otherwise.
Ensemble train(const Matrix& features, std::span<const int> labels,
               std::vector<std::string> feature_names, const TrainConfig& cfg);
Ensemble train(const Dataset& dataset, const TrainConfig& cfg);

std::vector<double> predict_margin(const Ensemble& model,
                                   std::span<const double> x);
std::vector<double> predict_proba(const Ensemble& model,
                                  std::span<const double> x);
// Rows of `features` are predicted independently; result is n x num_class.
Matrix predict_proba(const Ensemble& model, const Matrix& features);

// Total realized split gain per feature over all trees.
std::vector<double> gain_importance(const Ensemble& model);

}  // namespace evperf

#endif  // EVPERF_GBDT_H_
