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

// Classification metrics and the stratified cross-validation harness.

#ifndef EVPERF_METRICS_H_
#define EVPERF_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "evperf/data_pipeline.h"
#include "evperf/gbdt.h"
#include "evperf/matrix.h"

namespace evperf {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(int num_class)
      : num_class_(num_class),
        counts_(static_cast<std::size_t>(num_class * num_class), 0) {}

  int num_class() const { return num_class_; }
  std::int64_t at(int truth, int predicted) const {
    return counts_[index(truth, predicted)];
  }
  void add(int truth, int predicted) { ++counts_[index(truth, predicted)]; }

  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(int truth) const;
  std::int64_t col_sum(int predicted) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t index(int truth, int predicted) const {
    return static_cast<std::size_t>(truth * num_class_ + predicted);
  }

  int num_class_ = 0;
  std::vector<std::int64_t> counts_;
};

// Throws InputError on length mismatch, empty input or labels outside
// [0, num_class).
ConfusionMatrix confusion(std::span<const int> truth,
                          std::span<const int> predicted, int num_class);

double accuracy(const ConfusionMatrix& cm);

// Multiclass Matthews correlation (Gorodkin). A zero denominator yields 0.
double mcc(const ConfusionMatrix& cm);

// Mann-Whitney AUC with midranks for ties; nonzero `positive` entries mark
// the positive class.
double binary_auc(std::span<const double> scores, std::span<const int> positive);

// Macro average of one-vs-rest AUCs over the columns of `probs`. Throws
// InputError naming a class with no positive or no negative samples.
double roc_auc_ovr_macro(const Matrix& probs, std::span<const int> truth,
                         std::span<const std::string> class_names = {});

inline constexpr double kLogLossClamp = 1e-15;

double mlogloss(const Matrix& probs, std::span<const int> truth);

// Index of the largest entry of each row; the first wins ties.
std::vector<int> argmax_rows(const Matrix& probs);

struct FoldMetrics {
  int fold = 0;
  std::size_t size = 0;
  double accuracy = 0.0;
  double roc_auc_macro_ovr = 0.0;
  double mcc = 0.0;
  double mlogloss = 0.0;
};

struct MetricsReport {
  double accuracy = 0.0;
  double roc_auc_macro_ovr = 0.0;
  double mcc = 0.0;
  double mlogloss = 0.0;
  ConfusionMatrix confusion;
  std::vector<FoldMetrics> folds;
  std::vector<std::string> class_names;
};

// Metrics of one set of probability predictions.
MetricsReport evaluate(const Matrix& probs, std::span<const int> truth,
                       std::span<const std::string> class_names);

// Per fold: fit the scaler on the training split, standardize both splits,
// train, and predict the held-out split. Held-out predictions are pooled into
// the headline numbers; per-fold metrics are kept alongside.
MetricsReport cross_validate(const Dataset& dataset, const TrainConfig& cfg,
                             int k, std::uint64_t seed);

std::string metrics_to_json(const MetricsReport& report);
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm,
                         std::span<const std::string> class_names);

}  // namespace evperf

#endif  // EVPERF_METRICS_H_
