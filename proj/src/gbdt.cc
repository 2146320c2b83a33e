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

#include "evperf/gbdt.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "evperf/errors.h"

namespace evperf {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = -std::numeric_limits<double>::infinity();
};

// Midpoint strictly above `lo` and at most `hi`, so `lo` routes left and
// `hi` routes right under the `x < threshold` rule.
double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid > lo ? mid : hi;
}

class TreeGrower {
 public:
  TreeGrower(const Matrix& features, std::span<const double> grad,
             std::span<const double> hess, const TrainConfig& cfg)
      : x_(features), grad_(grad), hess_(hess), cfg_(cfg),
        in_node_(features.rows(), 0) {
    const std::size_t n = features.rows();
    sorted_.resize(features.cols());
    for (std::size_t f = 0; f < features.cols(); ++f) {
      auto& order = sorted_[f];
      order.resize(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return x_(a, f) < x_(b, f);
                       });
    }
  }

  Tree grow() {
    std::vector<std::size_t> rows(x_.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    nodes_.clear();
    grow_node(rows, 0);
    return Tree(std::move(nodes_));
  }

 private:
  int grow_node(const std::vector<std::size_t>& rows, int depth) {
    double g_sum = 0.0;
    double h_sum = 0.0;
    for (auto r : rows) {
      g_sum += grad_[r];
      h_sum += hess_[r];
    }

    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    SplitCandidate best;
    if (depth < cfg_.max_depth && rows.size() > 1) {
      best = find_split(rows, g_sum, h_sum);
    }
    if (best.feature < 0 || !(best.gain > 0.0)) {
      nodes_[index].weight = leaf_weight(g_sum, h_sum, cfg_);
      nodes_[index].cover = h_sum;
      return index;
    }

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (auto r : rows) {
      const auto f = static_cast<std::size_t>(best.feature);
      (x_(r, f) < best.threshold ? left_rows : right_rows).push_back(r);
    }
    const int left = grow_node(left_rows, depth + 1);
    const int right = grow_node(right_rows, depth + 1);

    TreeNode& node = nodes_[index];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.gain = best.gain;
    node.left = left;
    node.right = right;
    node.cover = nodes_[left].cover + nodes_[right].cover;
    return index;
  }

  SplitCandidate find_split(const std::vector<std::size_t>& rows,
                            double g_sum, double h_sum) {
    for (auto r : rows) in_node_[r] = 1;
    SplitCandidate best;
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      double g_left = 0.0;
      double h_left = 0.0;
      std::size_t seen = 0;
      std::size_t prev = 0;
      for (auto r : sorted_[f]) {
        if (!in_node_[r]) continue;
        if (seen > 0 && x_(r, f) != x_(prev, f)) {
          const double g_right = g_sum - g_left;
          const double h_right = h_sum - h_left;
          if (h_left >= cfg_.min_child_hessian &&
              h_right >= cfg_.min_child_hessian) {
            const double gain = split_gain(g_left, h_left, g_right, h_right, cfg_);
            if (gain > best.gain) {
              best.feature = static_cast<int>(f);
              best.threshold = midpoint(x_(prev, f), x_(r, f));
              best.gain = gain;
            }
          }
        }
        g_left += grad_[r];
        h_left += hess_[r];
        prev = r;
        ++seen;
      }
    }
    for (auto r : rows) in_node_[r] = 0;
    return best;
  }

  const Matrix& x_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  const TrainConfig& cfg_;
  std::vector<std::vector<std::size_t>> sorted_;
  std::vector<char> in_node_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

void TrainConfig::validate() const {
  require(n_rounds >= 1, "n_rounds must be >= 1");
  require(learning_rate > 0.0 && learning_rate <= 1.0,
          "learning_rate must lie in (0, 1]");
  require(max_depth >= 1, "max_depth must be >= 1");
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be >= 0");
  require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be >= 0");
  require(gamma >= 0.0 && std::isfinite(gamma), "gamma must be >= 0");
  require(min_child_hessian >= 0.0 && std::isfinite(min_child_hessian),
          "min_child_hessian must be >= 0");
  require(num_class >= 2, "num_class must be >= 2");
}

Tree::Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) nodes_.emplace_back();
}

int Tree::leaf_index(std::span<const double> x) const {
  int i = 0;
  while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
  }
  return i;
}

int Tree::depth() const {
  std::function<int(int)> walk = [&](int i) -> int {
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    if (n.is_leaf()) return 0;
    return 1 + std::max(walk(n.left), walk(n.right));
  };
  return walk(0);
}

int Tree::max_feature() const {
  int out = -1;
  for (const auto& n : nodes_) out = std::max(out, n.feature);
  return out;
}

void Ensemble::validate() const {
  require(num_class >= 2, "model num_class must be >= 2");
  require(base_score.size() == static_cast<std::size_t>(num_class),
          "model base_score size must equal num_class");
  require(trees.size() % static_cast<std::size_t>(num_class) == 0,
          "model tree count must be a multiple of num_class");
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const auto& bt = trees[t];
    require(bt.round == static_cast<int>(t / static_cast<std::size_t>(num_class)) &&
                bt.class_index == static_cast<int>(t % static_cast<std::size_t>(num_class)),
            "model trees must be ordered round-major, one per class");
    const auto& nodes = bt.tree.nodes();
    require(!nodes.empty(), "model contains an empty tree");
    for (const auto& n : nodes) {
      require(n.cover > 0.0 && std::isfinite(n.cover),
              "tree node cover must be positive");
      require(std::isfinite(n.weight), "tree leaf weight must be finite");
      if (n.is_leaf()) continue;
      require(static_cast<std::size_t>(n.feature) < num_features(),
              "tree split references an unknown feature");
      require(std::isfinite(n.threshold), "tree threshold must be finite");
      const auto size = static_cast<int>(nodes.size());
      require(n.left > 0 && n.left < size && n.right > 0 && n.right < size,
              "tree child index out of range");
    }
  }
}

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  if (scores.empty()) return out;
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    out[k] = std::exp(scores[k] - top);
    total += out[k];
  }
  for (auto& p : out) p /= total;
  return out;
}

GradHess mlogloss_grad_hess(std::span<const double> probs, int label) {
  GradHess gh;
  gh.grad.resize(probs.size());
  gh.hess.resize(probs.size());
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double p = probs[k];
    gh.grad[k] = p - (static_cast<int>(k) == label ? 1.0 : 0.0);
    gh.hess[k] = std::max(p * (1.0 - p), kMinHessian);
  }
  return gh;
}

double soft_threshold(double g, double alpha) {
  const double shrunk = std::max(std::abs(g) - alpha, 0.0);
  return g < 0.0 ? -shrunk : shrunk;
}

double split_gain(double grad_left, double hess_left, double grad_right,
                  double hess_right, const TrainConfig& cfg) {
  auto score = [&](double g, double h) {
    const double s = soft_threshold(g, cfg.alpha);
    const double denom = h + cfg.lambda;
    return denom > 0.0 ? s * s / denom : 0.0;
  };
  return 0.5 * (score(grad_left, hess_left) + score(grad_right, hess_right) -
                score(grad_left + grad_right, hess_left + hess_right)) -
         cfg.gamma;
}

double leaf_weight(double grad, double hess, const TrainConfig& cfg) {
  const double denom = hess + cfg.lambda;
  if (!(denom > 0.0)) return 0.0;
  return -soft_threshold(grad, cfg.alpha) / denom;
}

Tree build_tree(const Matrix& features, std::span<const double> grad,
                std::span<const double> hess, const TrainConfig& cfg) {
  require(features.rows() >= 1, "cannot build a tree on zero rows");
  require(grad.size() == features.rows() && hess.size() == features.rows(),
          "gradient/hessian length must match row count");
  return TreeGrower(features, grad, hess, cfg).grow();
}

Ensemble train(const Matrix& features, std::span<const int> labels,
               std::vector<std::string> feature_names, const TrainConfig& cfg) {
  cfg.validate();
  const std::size_t n = features.rows();
  const auto num_class = static_cast<std::size_t>(cfg.num_class);
  require(n >= 1, "training data is empty");
  require(labels.size() == n, "label count does not match row count");
  require(feature_names.size() == features.cols(),
          "feature name count does not match column count");

  std::vector<std::size_t> class_count(num_class, 0);
  for (int y : labels) {
    require(y >= 0 && static_cast<std::size_t>(y) < num_class,
            "label out of range: " + std::to_string(y));
    ++class_count[static_cast<std::size_t>(y)];
  }

  Ensemble model;
  model.num_class = cfg.num_class;
  model.feature_names = std::move(feature_names);
  model.config = cfg;
  for (std::size_t k = 0; k < num_class; ++k) {
    require(class_count[k] > 0,
            "class " + std::to_string(k) + " is absent from the training data");
    model.base_score.push_back(
        std::log(static_cast<double>(class_count[k]) / static_cast<double>(n)));
  }

  Matrix margin(n, num_class);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < num_class; ++k) margin(i, k) = model.base_score[k];
  }

  std::vector<std::vector<double>> grad(num_class, std::vector<double>(n));
  std::vector<std::vector<double>> hess(num_class, std::vector<double>(n));
  model.trees.reserve(static_cast<std::size_t>(cfg.n_rounds) * num_class);
  for (int round = 0; round < cfg.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto probs = softmax(margin.row(i));
      const auto gh = mlogloss_grad_hess(probs, labels[i]);
      for (std::size_t k = 0; k < num_class; ++k) {
        grad[k][i] = gh.grad[k];
        hess[k][i] = gh.hess[k];
      }
    }
    for (std::size_t k = 0; k < num_class; ++k) {
      model.trees.push_back({round, static_cast<int>(k),
                             build_tree(features, grad[k], hess[k], cfg)});
    }
    const auto first = model.trees.size() - num_class;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < num_class; ++k) {
        margin(i, k) += cfg.learning_rate *
                        model.trees[first + k].tree.predict(features.row(i));
      }
    }
  }
  return model;
}

Ensemble train(const Dataset& dataset, const TrainConfig& cfg) {
  dataset.validate();
  const auto labels = dataset.label_indices();
  return train(dataset.features, labels, dataset.feature_names, cfg);
}

std::vector<double> predict_margin(const Ensemble& model,
                                   std::span<const double> x) {
  if (x.size() != model.num_features()) {
    throw InputError("model expects " + std::to_string(model.num_features()) +
                     " features, got " + std::to_string(x.size()));
  }
  std::vector<double> margin = model.base_score;
  for (const auto& bt : model.trees) {
    margin[static_cast<std::size_t>(bt.class_index)] +=
        model.learning_rate() * bt.tree.predict(x);
  }
  return margin;
}

std::vector<double> predict_proba(const Ensemble& model,
                                  std::span<const double> x) {
  return softmax(predict_margin(model, x));
}

Matrix predict_proba(const Ensemble& model, const Matrix& features) {
  Matrix out(features.rows(), static_cast<std::size_t>(model.num_class));
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto p = predict_proba(model, features.row(i));
    std::copy(p.begin(), p.end(), out.row(i).begin());
  }
  return out;
}

std::vector<double> gain_importance(const Ensemble& model) {
  std::vector<double> total(model.num_features(), 0.0);
  for (const auto& bt : model.trees) {
    for (const auto& n : bt.tree.nodes()) {
      if (!n.is_leaf()) total[static_cast<std::size_t>(n.feature)] += n.gain;
    }
  }
  return total;
}

}  // namespace evperf
