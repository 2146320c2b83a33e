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

#include "evperf/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "evperf/errors.h"
#include "json.hpp"

namespace evperf {

std::int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (int k = 0; k < num_class_; ++k) t += at(k, k);
  return t;
}

std::int64_t ConfusionMatrix::row_sum(int truth) const {
  std::int64_t s = 0;
  for (int j = 0; j < num_class_; ++j) s += at(truth, j);
  return s;
}

std::int64_t ConfusionMatrix::col_sum(int predicted) const {
  std::int64_t s = 0;
  for (int i = 0; i < num_class_; ++i) s += at(i, predicted);
  return s;
}

ConfusionMatrix confusion(std::span<const int> truth,
                          std::span<const int> predicted, int num_class) {
  if (truth.size() != predicted.size()) {
    throw InputError("confusion: label lengths differ (" +
                     std::to_string(truth.size()) + " vs " +
                     std::to_string(predicted.size()) + ")");
  }
  if (truth.empty()) throw InputError("confusion: no labels");
  ConfusionMatrix cm(num_class);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_class || predicted[i] < 0 ||
        predicted[i] >= num_class) {
      throw InputError("confusion: label out of range");
    }
    cm.add(truth[i], predicted[i]);
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total <= 0) throw InputError("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double mcc(const ConfusionMatrix& cm) {
  const auto s = static_cast<double>(cm.total());
  const auto c = static_cast<double>(cm.trace());
  double pt = 0.0;
  double pp = 0.0;
  double tt = 0.0;
  for (int k = 0; k < cm.num_class(); ++k) {
    const auto p = static_cast<double>(cm.col_sum(k));
    const auto t = static_cast<double>(cm.row_sum(k));
    pt += p * t;
    pp += p * p;
    tt += t * t;
  }
  const double denom = std::sqrt((s * s - pp) * (s * s - tt));
  if (!(denom > 0.0)) return 0.0;
  return (c * s - pt) / denom;
}

double binary_auc(std::span<const double> scores, std::span<const int> positive) {
  if (scores.size() != positive.size()) {
    throw InputError("binary_auc: score and label lengths differ");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks are 1-based; a tie group shares its mean rank.
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (positive[order[t]] != 0) {
        positive_rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw InputError("binary_auc needs both positive and negative samples");
  }
  const auto np = static_cast<double>(n_pos);
  const auto nn = static_cast<double>(n_neg);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double roc_auc_ovr_macro(const Matrix& probs, std::span<const int> truth,
                         std::span<const std::string> class_names) {
  if (probs.rows() != truth.size()) {
    throw InputError("roc_auc: probability rows do not match label count");
  }
  const std::size_t k = probs.cols();
  double sum = 0.0;
  std::vector<int> positive_flags(truth.size());
  std::vector<double> scores;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      positive_flags[i] = truth[i] == static_cast<int>(c) ? 1 : 0;
      n_pos += static_cast<std::size_t>(positive_flags[i]);
    }
    if (n_pos == 0 || n_pos == truth.size()) {
      const std::string name =
          c < class_names.size() ? class_names[c] : std::to_string(c);
      throw InputError("roc_auc: class '" + name +
                       "' lacks positive or negative samples; AUC undefined");
    }
    scores = probs.column(c);
    sum += binary_auc(scores, positive_flags);
  }
  return sum / static_cast<double>(k);
}

double mlogloss(const Matrix& probs, std::span<const int> truth) {
  if (probs.rows() != truth.size() || truth.empty()) {
    throw InputError("mlogloss: probability rows do not match label count");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto y = static_cast<std::size_t>(truth[i]);
    if (y >= probs.cols()) throw InputError("mlogloss: label out of range");
    total -= std::log(std::clamp(probs(i, y), kLogLossClamp, 1.0));
  }
  return total / static_cast<double>(truth.size());
}

std::vector<int> argmax_rows(const Matrix& probs) {
  std::vector<int> out(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    const auto r = probs.row(i);
    out[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

MetricsReport evaluate(const Matrix& probs, std::span<const int> truth,
                       std::span<const std::string> class_names) {
  MetricsReport report;
  const auto predicted = argmax_rows(probs);
  report.confusion = confusion(truth, predicted, static_cast<int>(probs.cols()));
  report.accuracy = accuracy(report.confusion);
  report.mcc = mcc(report.confusion);
  report.roc_auc_macro_ovr = roc_auc_ovr_macro(probs, truth, class_names);
  report.mlogloss = mlogloss(probs, truth);
  report.class_names.assign(class_names.begin(), class_names.end());
  return report;
}

MetricsReport cross_validate(const Dataset& dataset, const TrainConfig& cfg,
                             int k, std::uint64_t seed) {
  dataset.validate();
  cfg.validate();
  const auto class_names = perf_class_names();
  std::vector<std::size_t> per_class(kNumPerfClasses, 0);
  for (auto c : dataset.labels) ++per_class[static_cast<std::size_t>(c)];
  for (int c = 0; c < kNumPerfClasses; ++c) {
    if (per_class[static_cast<std::size_t>(c)] < static_cast<std::size_t>(std::max(k, 0))) {
      throw InputError("class '" + class_names[static_cast<std::size_t>(c)] +
                       "' has " + std::to_string(per_class[static_cast<std::size_t>(c)]) +
                       " samples, fewer than the " + std::to_string(k) + " folds");
    }
  }
  const auto folds = stratified_kfold(dataset.labels, k, seed);
  const auto labels = dataset.label_indices();

  Matrix pooled(dataset.size(), static_cast<std::size_t>(cfg.num_class));
  std::vector<FoldMetrics> fold_metrics;
  for (int f = 0; f < k; ++f) {
    const auto train_rows = folds.training_indices(f);
    const auto valid_rows = folds.validation_indices(f);
    const Dataset train_split = dataset.subset(train_rows);
    const Dataset valid_split = dataset.subset(valid_rows);

    const ScalerParams scaler = fit_scaler(train_split.features);
    Dataset scaled_train = train_split;
    scaled_train.features = apply_scaler(train_split.features, scaler);
    scaled_train.scaler = scaler;
    const Matrix valid_x = apply_scaler(valid_split.features, scaler);

    const Ensemble model = train(scaled_train, cfg);
    const Matrix probs = predict_proba(model, valid_x);
    for (std::size_t i = 0; i < valid_rows.size(); ++i) {
      std::copy(probs.row(i).begin(), probs.row(i).end(),
                pooled.row(valid_rows[i]).begin());
    }

    const auto valid_labels = valid_split.label_indices();
    const auto fold_report = evaluate(probs, valid_labels, class_names);
    fold_metrics.push_back({f, valid_rows.size(), fold_report.accuracy,
                            fold_report.roc_auc_macro_ovr, fold_report.mcc,
                            fold_report.mlogloss});
  }

  MetricsReport report = evaluate(pooled, labels, class_names);
  report.folds = std::move(fold_metrics);
  return report;
}

std::string metrics_to_json(const MetricsReport& report) {
  using nlohmann::json;
  json cm = json::array();
  for (int i = 0; i < report.confusion.num_class(); ++i) {
    json row = json::array();
    for (int j = 0; j < report.confusion.num_class(); ++j) {
      row.push_back(report.confusion.at(i, j));
    }
    cm.push_back(std::move(row));
  }
  json folds = json::array();
  for (const auto& f : report.folds) {
    folds.push_back(json{{"fold", f.fold},
                         {"n", f.size},
                         {"accuracy", f.accuracy},
                         {"roc_auc_macro_ovr", f.roc_auc_macro_ovr},
                         {"mcc", f.mcc},
                         {"mlogloss", f.mlogloss}});
  }
  json doc{{"accuracy", report.accuracy},
           {"roc_auc_macro_ovr", report.roc_auc_macro_ovr},
           {"mcc", report.mcc},
           {"mlogloss", report.mlogloss},
           {"classes", report.class_names},
           {"confusion", std::move(cm)},
           {"folds", std::move(folds)}};
  return doc.dump(2) + "\n";
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm,
                         std::span<const std::string> class_names) {
  auto name = [&](int k) {
    return static_cast<std::size_t>(k) < class_names.size()
               ? class_names[static_cast<std::size_t>(k)]
               : std::to_string(k);
  };
  out << "true\\predicted";
  for (int j = 0; j < cm.num_class(); ++j) out << ',' << name(j);
  out << '\n';
  for (int i = 0; i < cm.num_class(); ++i) {
    out << name(i);
    for (int j = 0; j < cm.num_class(); ++j) out << ',' << cm.at(i, j);
    out << '\n';
  }
}

}  // namespace evperf
