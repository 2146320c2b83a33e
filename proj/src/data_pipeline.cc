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

#include "evperf/data_pipeline.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>

#include "evperf/errors.h"
#include "evperf/random.h"

namespace evperf {

std::vector<std::string> default_feature_columns() {
  return {std::string(columns::kBatteryCapacity),
          std::string(columns::kNumberOfCells), std::string(columns::kWeight),
          std::string(columns::kTorque), std::string(columns::kRange)};
}

std::string_view perf_class_name(PerfClass c) {
  switch (c) {
    case PerfClass::kHigh:
      return "High";
    case PerfClass::kMid:
      return "Mid";
    case PerfClass::kLow:
      return "Low";
  }
  return "?";
}

PerfClass perf_class_from_index(int index) {
  if (index < 0 || index >= kNumPerfClasses) {
    throw InputError("performance class index out of range: " +
                     std::to_string(index));
  }
  return static_cast<PerfClass>(index);
}

std::vector<std::string> perf_class_names() {
  std::vector<std::string> names;
  for (int k = 0; k < kNumPerfClasses; ++k) {
    names.emplace_back(perf_class_name(static_cast<PerfClass>(k)));
  }
  return names;
}

std::optional<double> VehicleRecord::get(std::string_view column) const {
  if (column == columns::kBatteryCapacity) return battery_capacity;
  if (column == columns::kNumberOfCells) {
    if (!number_of_cells) return std::nullopt;
    return static_cast<double>(*number_of_cells);
  }
  if (column == columns::kWeight) return weight;
  if (column == columns::kTorque) return torque;
  if (column == columns::kRange) return range;
  if (column == columns::kAcceleration) return accel_0_100;
  if (auto it = extra.find(column); it != extra.end()) return it->second;
  return std::nullopt;
}

void VehicleRecord::set(std::string_view column, std::optional<double> value) {
  if (column == columns::kBatteryCapacity) {
    battery_capacity = value;
  } else if (column == columns::kNumberOfCells) {
    number_of_cells.reset();
    if (value) number_of_cells = static_cast<std::int64_t>(*value);
  } else if (column == columns::kWeight) {
    weight = value;
  } else if (column == columns::kTorque) {
    torque = value;
  } else if (column == columns::kRange) {
    range = value;
  } else if (column == columns::kAcceleration) {
    accel_0_100 = value;
  } else {
    extra.insert_or_assign(std::string(column), value);
  }
}

DropResult drop_missing(std::span<const VehicleRecord> records,
                        std::span<const std::string> required) {
  DropResult result;
  for (const auto& record : records) {
    const bool complete = std::all_of(
        required.begin(), required.end(),
        [&](const std::string& c) { return record.get(c).has_value(); });
    if (complete) {
      result.records.push_back(record);
    } else {
      ++result.dropped;
    }
  }
  return result;
}

PerfClass bin_acceleration(double seconds) {
  if (!std::isfinite(seconds) || seconds <= 0.0) {
    throw InputError("acceleration time must be positive and finite, got " +
                     std::to_string(seconds));
  }
  if (seconds <= 4.0) return PerfClass::kHigh;
  if (seconds <= 7.0) return PerfClass::kMid;
  return PerfClass::kLow;
}

ScalerParams fit_scaler(const Matrix& features) {
  if (features.rows() == 0) throw InputError("cannot fit scaler on no rows");
  const auto n = static_cast<double>(features.rows());
  ScalerParams params;
  params.mean.assign(features.cols(), 0.0);
  params.stddev.assign(features.cols(), 0.0);
  for (std::size_t c = 0; c < features.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < features.rows(); ++r) sum += features(r, c);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < features.rows(); ++r) {
      const double d = features(r, c) - mean;
      ss += d * d;
    }
    params.mean[c] = mean;
    params.stddev[c] = std::sqrt(ss / n);
  }
  return params;
}

std::vector<double> apply_scaler(std::span<const double> row,
                                 const ScalerParams& params) {
  if (row.size() != params.size()) {
    throw InputError("scaler expects " + std::to_string(params.size()) +
                     " features, got " + std::to_string(row.size()));
  }
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double sd = params.stddev[c];
    out[c] = sd > 0.0 ? (row[c] - params.mean[c]) / sd : 0.0;
  }
  return out;
}

Matrix apply_scaler(const Matrix& features, const ScalerParams& params) {
  if (features.cols() != params.size()) {
    throw InputError("scaler expects " + std::to_string(params.size()) +
                     " features, got " + std::to_string(features.cols()));
  }
  Matrix out(features.rows(), features.cols());
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto scaled = apply_scaler(features.row(r), params);
    std::copy(scaled.begin(), scaled.end(), out.row(r).begin());
  }
  return out;
}

std::vector<int> Dataset::label_indices() const {
  std::vector<int> out(labels.size());
  std::transform(labels.begin(), labels.end(), out.begin(),
                 [](PerfClass c) { return static_cast<int>(c); });
  return out;
}

std::size_t Dataset::feature_index(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) {
    throw InputError("unknown feature '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - feature_names.begin());
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features = features.select_rows(rows);
  out.labels.reserve(rows.size());
  for (auto r : rows) out.labels.push_back(labels.at(r));
  out.feature_names = feature_names;
  out.scaler = scaler;
  return out;
}

void Dataset::validate() const {
  if (features.rows() != labels.size()) {
    throw InputError("feature rows (" + std::to_string(features.rows()) +
                     ") do not match label count (" +
                     std::to_string(labels.size()) + ")");
  }
  if (features.rows() > 0 && features.cols() != feature_names.size()) {
    throw InputError("feature column count does not match feature names");
  }
  std::set<std::string_view> unique(feature_names.begin(),
                                    feature_names.end());
  if (unique.size() != feature_names.size()) {
    throw InputError("feature names must be unique");
  }
  for (double v : features.data()) {
    if (!std::isfinite(v)) throw InputError("dataset contains non-finite values");
  }
  if (scaler && scaler->size() != feature_names.size()) {
    throw InputError("scaler dimension does not match feature count");
  }
}

DatasetBuild build_dataset(std::span<const VehicleRecord> records,
                           std::span<const std::string> feature_columns) {
  std::vector<std::string> required(feature_columns.begin(),
                                    feature_columns.end());
  required.emplace_back(columns::kAcceleration);
  const auto kept = drop_missing(records, required);

  DatasetBuild build;
  build.dropped_incomplete = kept.dropped;
  auto& ds = build.dataset;
  ds.feature_names.assign(feature_columns.begin(), feature_columns.end());
  ds.features = Matrix(kept.records.size(), feature_columns.size());
  ds.labels.reserve(kept.records.size());
  for (std::size_t r = 0; r < kept.records.size(); ++r) {
    const auto& record = kept.records[r];
    for (std::size_t c = 0; c < feature_columns.size(); ++c) {
      ds.features(r, c) = *record.get(feature_columns[c]);
    }
    ds.labels.push_back(bin_acceleration(*record.accel_0_100));
  }
  ds.validate();
  return build;
}

std::vector<std::size_t> FoldAssignment::validation_indices(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == f) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::training_indices(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != f) out.push_back(i);
  }
  return out;
}

FoldAssignment stratified_kfold(std::span<const PerfClass> labels, int k,
                                std::uint64_t seed) {
  if (k < 2) throw InputError("number of folds must be at least 2");
  if (static_cast<std::size_t>(k) > labels.size()) {
    throw InputError("number of folds (" + std::to_string(k) +
                     ") exceeds sample count (" +
                     std::to_string(labels.size()) + ")");
  }
  std::array<std::vector<std::size_t>, kNumPerfClasses> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class.at(static_cast<std::size_t>(labels[i])).push_back(i);
  }

  FoldAssignment assignment;
  assignment.num_folds = k;
  assignment.fold.assign(labels.size(), 0);
  Rng rng(seed);
  int next_fold = 0;
  for (auto& members : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (auto index : members) {
      assignment.fold[index] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  return assignment;
}

}  // namespace evperf
