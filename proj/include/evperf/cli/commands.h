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

// The train, explain and synth subcommands and the argument front end.

#ifndef EVPERF_CLI_COMMANDS_H_
#define EVPERF_CLI_COMMANDS_H_

#include <iosfwd>

#include "evperf/cli/run_config.h"
#include "evperf/metrics.h"
#include "evperf/model_io.h"

namespace evperf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

struct TrainOutcome {
  MetricsReport report;
  PersistedModel model;
  std::size_t dropped_rows = 0;
};

// Cross-validates, fits the final model on all rows and writes model.json,
// metrics.json and the confusion figure into config.out_dir.
TrainOutcome cmd_train(const RunConfig& config, std::ostream& log);
// Writes the importance, interaction, dependence and force figures plus
// shap_values.csv for the model in config.model.
void cmd_explain(const RunConfig& config, std::ostream& log);
// Writes synth.csv and the parallel-count sweep.
void cmd_synth(const RunConfig& config, std::ostream& log);

// Parses arguments, runs one subcommand and maps failures to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace evperf::cli

#endif  // EVPERF_CLI_COMMANDS_H_
