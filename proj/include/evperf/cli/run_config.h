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

// Run configuration for the command-line front end. Settings come from, in
// increasing precedence: built-in defaults, a key=value config file, the
// EVPERF_SEED environment variable (seed only), and command-line flags. Every
// config key has a flag of the same name with '_' written as '-'.

#ifndef EVPERF_CLI_RUN_CONFIG_H_
#define EVPERF_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evperf/gbdt.h"
#include "evperf/physics.h"

namespace evperf::cli {

struct RunConfig {
  std::optional<std::filesystem::path> input;
  bool synth = false;
  std::optional<std::filesystem::path> aliases;
  std::vector<std::string> features = default_feature_columns();
  std::optional<std::filesystem::path> model;

  std::filesystem::path out_dir = "evperf_out";
  std::uint64_t seed = 42;
  int folds = 5;
  bool svg = true;
  std::string feature = "number_of_cells";  // dependence target
  std::size_t force_sample = 0;

  TrainConfig train;
  SynthConfig synth_config;
  VehicleParams vehicle;
  PackConfig pack;
  std::int64_t sweep_n_parallel_min = 4;
  std::int64_t sweep_n_parallel_max = 80;
};

struct ConfigKey {
  std::string name;
  std::string help;
  bool is_switch = false;  // boolean flag without a value on the command line
};

// Every recognised key, in documentation order.
const std::vector<ConfigKey>& config_keys();

// Flag spelling of a key: "out_dir" -> "out-dir".
std::string flag_name(std::string_view key);

// Parses `key = value` lines grouped under optional `[section]` headers.
// Sections only group keys; the key namespace is flat, so a key may appear
// once per file. '#' and ';' start comments. Throws InputError.
std::map<std::string, std::string> parse_config_text(std::string_view text);
std::map<std::string, std::string> load_config_file(
    const std::filesystem::path& path);

// Throws InputError for unknown keys or unparseable values.
void apply_setting(RunConfig& config, std::string_view key,
                   std::string_view value);

// A train/explain run needs exactly one data source.
void require_single_data_source(const RunConfig& config);

}  // namespace evperf::cli

#endif  // EVPERF_CLI_RUN_CONFIG_H_
