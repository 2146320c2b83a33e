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

// Vehicle record ingestion, cleaning, target construction, feature scaling
// and stratified fold assignment.

#ifndef EVPERF_DATA_PIPELINE_H_
#define EVPERF_DATA_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evperf/matrix.h"

namespace evperf {

// Canonical column names. Source headers are mapped onto these through a
// HeaderAliases table.
namespace columns {
inline constexpr std::string_view kBatteryCapacity = "battery_capacity_kwh";
inline constexpr std::string_view kNumberOfCells = "number_of_cells";
inline constexpr std::string_view kWeight = "weight_kg";
inline constexpr std::string_view kTorque = "torque_nm";
inline constexpr std::string_view kRange = "range_km";
inline constexpr std::string_view kAcceleration = "acceleration_0_100_s";
}  // namespace columns

// The five named predictors, in canonical feature order.
std::vector<std::string> default_feature_columns();

// Performance class ordered from fastest to slowest. The underlying value is
// the class index used by the classifier.
enum class PerfClass : int { kHigh = 0, kMid = 1, kLow = 2 };
inline constexpr int kNumPerfClasses = 3;

std::string_view perf_class_name(PerfClass c);
PerfClass perf_class_from_index(int index);
std::vector<std::string> perf_class_names();

// One vehicle's raw attributes. Absent values are std::nullopt.
struct VehicleRecord {
  std::optional<double> battery_capacity;  // kWh
  std::optional<std::int64_t> number_of_cells;
  std::optional<double> weight;       // kg
  std::optional<double> torque;       // N*m
  std::optional<double> range;        // km
  std::optional<double> accel_0_100;  // s
  std::map<std::string, std::optional<double>, std::less<>> extra;

  // Lookup by canonical column name; falls through to `extra`.
  std::optional<double> get(std::string_view column) const;
  // Stores without validation; callers go through the CSV reader or the
  // synthetic generator, which enforce the value invariants.
  void set(std::string_view column, std::optional<double> value);

  friend bool operator==(const VehicleRecord&, const VehicleRecord&) = default;
};

// Source header -> canonical column name.
using HeaderAliases = std::map<std::string, std::string, std::less<>>;

// Parses `source header = canonical_name` lines. Blank lines and lines
// starting with '#' are skipped.
HeaderAliases parse_header_aliases(std::string_view text);
HeaderAliases load_header_aliases(const std::filesystem::path& path);

struct CsvLoadResult {
  std::vector<VehicleRecord> records;
  std::vector<std::string> columns;  // canonical, in file order
  // Non-empty cells that failed to parse or violated a value invariant.
  std::size_t parse_warnings = 0;
};

// Reads a header-first, comma separated file. Unparseable and empty numeric
// cells become missing values. Throws InputError on a missing file, a missing
// required column or duplicate headers (after alias mapping).
CsvLoadResult load_csv(const std::filesystem::path& path,
                       std::span<const std::string> required_columns,
                       const HeaderAliases& aliases = {});
CsvLoadResult read_csv(std::istream& in,
                       std::span<const std::string> required_columns,
                       const HeaderAliases& aliases = {});

// Writes records under the given canonical columns; missing values are
// written as empty cells.
void write_records_csv(std::ostream& out,
                       std::span<const VehicleRecord> records,
                       std::span<const std::string> columns);

struct DropResult {
  std::vector<VehicleRecord> records;
  std::size_t dropped = 0;
};

// Listwise deletion on the given columns. Order is preserved.
DropResult drop_missing(std::span<const VehicleRecord> records,
                        std::span<const std::string> required);

// High for t <= 4.0 s, Mid for 4.0 < t <= 7.0 s, Low above. Throws
// InputError for non-positive or non-finite t.
PerfClass bin_acceleration(double seconds);

// Per-column z-score parameters; `stddev` is the population deviation.
struct ScalerParams {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t size() const { return mean.size(); }
  friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

ScalerParams fit_scaler(const Matrix& features);
// Columns with zero deviation map to 0.
Matrix apply_scaler(const Matrix& features, const ScalerParams& params);
std::vector<double> apply_scaler(std::span<const double> row,
                                 const ScalerParams& params);

struct Dataset {
  Matrix features;
  std::vector<PerfClass> labels;
  std::vector<std::string> feature_names;
  std::optional<ScalerParams> scaler;

  std::size_t size() const { return labels.size(); }
  std::size_t num_features() const { return feature_names.size(); }
  std::vector<int> label_indices() const;
  std::size_t feature_index(std::string_view name) const;  // throws if absent

  Dataset subset(std::span<const std::size_t> rows) const;

  // Throws InputError when the dataset invariants do not hold.
  void validate() const;
};

struct DatasetBuild {
  Dataset dataset;
  // Rows skipped because a feature or the target was missing.
  std::size_t dropped_incomplete = 0;
};

// Builds the training matrix from the named feature columns and labels each
// row from its 0-100 km/h time. Rows lacking any of them are dropped so the
// matrix is complete.
DatasetBuild build_dataset(std::span<const VehicleRecord> records,
                           std::span<const std::string> feature_columns);

struct FoldAssignment {
  int num_folds = 0;
  std::vector<int> fold;  // per sample, in [0, num_folds)

  std::vector<std::size_t> validation_indices(int f) const;
  std::vector<std::size_t> training_indices(int f) const;
};

// Shuffles each class by `seed`, then deals the classes round robin into
// folds. Dealing continues across class boundaries so no fold stays empty.
FoldAssignment stratified_kfold(std::span<const PerfClass> labels, int k,
                                std::uint64_t seed);

}  // namespace evperf

#endif  // EVPERF_DATA_PIPELINE_H_
