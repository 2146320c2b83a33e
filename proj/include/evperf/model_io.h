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

// Versioned JSON persistence for trained ensembles.

#ifndef EVPERF_MODEL_IO_H_
#define EVPERF_MODEL_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "evperf/data_pipeline.h"
#include "evperf/gbdt.h"

namespace evperf {

inline constexpr std::string_view kModelFormat = "evperf-gbdt";
inline constexpr int kModelFormatVersion = 1;

// An ensemble plus the feature scaler its inputs were standardized with.
struct PersistedModel {
  Ensemble ensemble;
  std::optional<ScalerParams> scaler;
};

// Numbers are written in shortest round-trip form, so a reloaded model
// predicts bit-identical margins. Output is a deterministic function of the
// model.
std::string serialize_model(const Ensemble& model,
                            const std::optional<ScalerParams>& scaler = {});
// Throws InputError on malformed documents or unsupported versions.
PersistedModel parse_model(std::string_view json_text);

void save_model(const std::filesystem::path& path, const Ensemble& model,
                const std::optional<ScalerParams>& scaler = {});
PersistedModel load_model(const std::filesystem::path& path);

}  // namespace evperf

#endif  // EVPERF_MODEL_IO_H_
