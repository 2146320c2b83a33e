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

#include "evperf/cli/run_config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>

#include "evperf/errors.h"

namespace evperf::cli {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto begin = s.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  return s.substr(begin, s.find_last_not_of(kSpace) - begin + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
  throw InputError("invalid value '" + std::string(value) + "' for '" +
                   std::string(key) + "': expected " + std::string(expected));
}

double to_double(std::string_view key, std::string_view value) {
  value = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(key, value, "a finite number");
  }
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view value) {
  value = trim(value);
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    bad_value(key, value, "an integer");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "true or false");
}

std::vector<std::string> to_list(std::string_view value) {
  std::vector<std::string> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

struct KeyEntry {
  ConfigKey key;
  Setter set;
};

template <typename Fn>
Setter with_double(Fn fn) {
  return [fn](RunConfig& c, std::string_view k, std::string_view v) {
    fn(c, to_double(k, v));
  };
}

template <typename Fn>
Setter with_int(Fn fn) {
  return [fn](RunConfig& c, std::string_view k, std::string_view v) {
    fn(c, to_int<std::int64_t>(k, v));
  };
}

void add_range(std::vector<KeyEntry>& keys, const std::string& name,
               Range SynthConfig::*field, const std::string& what) {
  keys.push_back({{name + "_min", "synthetic " + what + " lower bound"},
                  with_double([field](RunConfig& c, double x) {
                    (c.synth_config.*field).lo = x;
                  })});
  keys.push_back({{name + "_max", "synthetic " + what + " upper bound"},
                  with_double([field](RunConfig& c, double x) {
                    (c.synth_config.*field).hi = x;
                  })});
}

std::vector<KeyEntry> build_keys() {
  std::vector<KeyEntry> k;
  // [data]
  k.push_back({{"input", "CSV file of vehicle records"},
               [](RunConfig& c, std::string_view, std::string_view v) {
                 c.input = std::filesystem::path(std::string(trim(v)));
               }});
  k.push_back({{"synth", "use the physics-based synthetic generator as data source", true},
               [](RunConfig& c, std::string_view key, std::string_view v) {
                 c.synth = to_bool(key, v);
               }});
  k.push_back({{"aliases", "header alias table (source header = canonical name)"},
               [](RunConfig& c, std::string_view, std::string_view v) {
                 c.aliases = std::filesystem::path(std::string(trim(v)));
               }});
  k.push_back({{"features", "comma separated feature columns"},
               [](RunConfig& c, std::string_view key, std::string_view v) {
                 auto list = to_list(v);
                 if (list.empty()) bad_value(key, v, "at least one column");
                 c.features = std::move(list);
               }});
  k.push_back({{"model", "model JSON to explain"},
               [](RunConfig& c, std::string_view, std::string_view v) {
                 c.model = std::filesystem::path(std::string(trim(v)));
               }});
  // [run]
  k.push_back({{"out_dir", "output directory"},
               [](RunConfig& c, std::string_view, std::string_view v) {
                 c.out_dir = std::filesystem::path(std::string(trim(v)));
               }});
  k.push_back({{"seed", "seed for folds, training and synthesis"},
               [](RunConfig& c, std::string_view key, std::string_view v) {
                 c.seed = to_int<std::uint64_t>(key, v);
               }});
  k.push_back({{"folds", "stratified cross-validation folds"},
               with_int([](RunConfig& c, std::int64_t x) { c.folds = static_cast<int>(x); })});
  k.push_back({{"svg", "render SVG figures next to the CSV data", true},
               [](RunConfig& c, std::string_view key, std::string_view v) {
                 c.svg = to_bool(key, v);
               }});
  k.push_back({{"feature", "feature for the dependence figure"},
               [](RunConfig& c, std::string_view, std::string_view v) {
                 c.feature = std::string(trim(v));
               }});
  k.push_back({{"force_sample", "sample index drawn in force.svg"},
               with_int([](RunConfig& c, std::int64_t x) {
                 if (x < 0) throw InputError("force_sample must be >= 0");
                 c.force_sample = static_cast<std::size_t>(x);
               })});
  // [train]
  k.push_back({{"rounds", "boosting rounds"},
               with_int([](RunConfig& c, std::int64_t x) { c.train.n_rounds = static_cast<int>(x); })});
  k.push_back({{"eta", "learning rate"},
               with_double([](RunConfig& c, double x) { c.train.learning_rate = x; })});
  k.push_back({{"depth", "maximum tree depth"},
               with_int([](RunConfig& c, std::int64_t x) { c.train.max_depth = static_cast<int>(x); })});
  k.push_back({{"lambda", "L2 regularization on leaf weights"},
               with_double([](RunConfig& c, double x) { c.train.lambda = x; })});
  k.push_back({{"alpha", "L1 regularization on leaf weights"},
               with_double([](RunConfig& c, double x) { c.train.alpha = x; })});
  k.push_back({{"gamma", "minimum split gain"},
               with_double([](RunConfig& c, double x) { c.train.gamma = x; })});
  k.push_back({{"min_child_hessian", "minimum Hessian sum per child"},
               with_double([](RunConfig& c, double x) { c.train.min_child_hessian = x; })});
  // [synth]
  k.push_back({{"n_samples", "synthetic sample count"},
               with_int([](RunConfig& c, std::int64_t x) {
                 if (x < 1) throw InputError("n_samples must be >= 1");
                 c.synth_config.n_samples = static_cast<std::size_t>(x);
               })});
  k.push_back({{"noise_sd", "sd of log-normal noise on 0-100 times"},
               with_double([](RunConfig& c, double x) { c.synth_config.noise_sd = x; })});
  add_range(k, "n_series", &SynthConfig::n_series, "cells in series");
  add_range(k, "n_parallel", &SynthConfig::n_parallel, "parallel strings");
  add_range(k, "r_cell", &SynthConfig::r_cell, "cell resistance (ohm)");
  add_range(k, "cell_mass", &SynthConfig::cell_mass, "cell mass (kg)");
  add_range(k, "cell_capacity", &SynthConfig::cell_capacity, "cell capacity (Ah)");
  add_range(k, "base_mass", &SynthConfig::base_mass, "glider mass (kg)");
  add_range(k, "motor_torque", &SynthConfig::motor_torque, "motor torque (N*m)");
  add_range(k, "gear_ratio", &SynthConfig::gear_ratio, "gear ratio");
  add_range(k, "c_d", &SynthConfig::c_d, "drag coefficient");
  add_range(k, "frontal_area", &SynthConfig::frontal_area, "frontal area (m^2)");
  // [vehicle] template values; also the fixed parameters of the sweep.
  k.push_back({{"base_mass", "glider mass (kg)"},
               with_double([](RunConfig& c, double x) { c.vehicle.base_mass = x; })});
  k.push_back({{"c_d", "drag coefficient"},
               with_double([](RunConfig& c, double x) { c.vehicle.c_d = x; })});
  k.push_back({{"frontal_area", "frontal area (m^2)"},
               with_double([](RunConfig& c, double x) { c.vehicle.frontal_area = x; })});
  k.push_back({{"air_density", "air density (kg/m^3)"},
               with_double([](RunConfig& c, double x) { c.vehicle.air_density = x; })});
  k.push_back({{"c_rr", "rolling resistance coefficient"},
               with_double([](RunConfig& c, double x) { c.vehicle.c_rr = x; })});
  k.push_back({{"wheel_radius", "wheel radius (m)"},
               with_double([](RunConfig& c, double x) { c.vehicle.wheel_radius = x; })});
  k.push_back({{"gear_ratio", "gear ratio"},
               with_double([](RunConfig& c, double x) { c.vehicle.gear_ratio = x; })});
  k.push_back({{"driveline_efficiency", "driveline efficiency in (0, 1]"},
               with_double([](RunConfig& c, double x) { c.vehicle.driveline_efficiency = x; })});
  k.push_back({{"motor_torque", "motor torque limit (N*m)"},
               with_double([](RunConfig& c, double x) { c.vehicle.motor_torque_max = x; })});
  k.push_back({{"traction_limit_accel", "tyre traction limit (m/s^2)"},
               with_double([](RunConfig& c, double x) { c.vehicle.traction_limit_accel = x; })});
  // [pack]
  k.push_back({{"n_series", "cells in series"},
               with_int([](RunConfig& c, std::int64_t x) { c.pack.n_series = x; })});
  k.push_back({{"r_cell", "cell resistance (ohm)"},
               with_double([](RunConfig& c, double x) { c.pack.r_cell = x; })});
  k.push_back({{"r_interconnects", "interconnect resistance (ohm)"},
               with_double([](RunConfig& c, double x) { c.pack.r_interconnects = x; })});
  k.push_back({{"v_cell_nominal", "nominal cell voltage (V)"},
               with_double([](RunConfig& c, double x) { c.pack.v_cell_nominal = x; })});
  k.push_back({{"v_cell_min", "cell cutoff voltage (V)"},
               with_double([](RunConfig& c, double x) { c.pack.v_cell_min = x; })});
  k.push_back({{"cell_mass", "cell mass (kg)"},
               with_double([](RunConfig& c, double x) { c.pack.cell_mass = x; })});
  k.push_back({{"pack_overhead_mass_fraction", "pack structure mass per cell mass"},
               with_double([](RunConfig& c, double x) { c.pack.pack_overhead_mass_fraction = x; })});
  k.push_back({{"cell_capacity", "cell capacity (Ah)"},
               with_double([](RunConfig& c, double x) { c.pack.cell_capacity = x; })});
  k.push_back({{"power_limit", "pack power estimate: open_circuit or cutoff_point"},
               [](RunConfig& c, std::string_view key, std::string_view v) {
                 v = trim(v);
                 if (v == "open_circuit") {
                   c.pack.power_limit = PowerLimitModel::kOpenCircuit;
                 } else if (v == "cutoff_point") {
                   c.pack.power_limit = PowerLimitModel::kCutoffPoint;
                 } else {
                   bad_value(key, v, "open_circuit or cutoff_point");
                 }
               }});
  k.push_back({{"sweep_n_parallel_min", "first parallel count of the sweep"},
               with_int([](RunConfig& c, std::int64_t x) { c.sweep_n_parallel_min = x; })});
  k.push_back({{"sweep_n_parallel_max", "last parallel count of the sweep"},
               with_int([](RunConfig& c, std::int64_t x) { c.sweep_n_parallel_max = x; })});
  return k;
}

const std::vector<KeyEntry>& registry() {
  static const std::vector<KeyEntry> keys = build_keys();
  return keys;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : registry()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

std::string flag_name(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const auto where = "config line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']' || trim(line.substr(1, line.size() - 2)).empty()) {
        throw InputError(where + ": malformed section header");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError(where + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::replace(key.begin(), key.end(), '-', '_');
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw InputError(where + ": empty key");
    if (!out.emplace(key, std::string(value)).second) {
      throw InputError(where + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

std::map<std::string, std::string> load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  for (const auto& e : registry()) {
    if (e.key.name == key) {
      e.set(config, key, value);
      return;
    }
  }
  throw InputError("unknown config key '" + std::string(key) + "'");
}

void require_single_data_source(const RunConfig& config) {
  if (config.input.has_value() == config.synth) {
    throw InputError("choose exactly one data source: --input <csv> or --synth");
  }
}

}  // namespace evperf::cli
