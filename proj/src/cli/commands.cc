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

#include "evperf/cli/commands.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "evperf/cli/figures.h"
#include "evperf/data_pipeline.h"
#include "evperf/errors.h"
#include "evperf/format.h"
#include "evperf/gbdt.h"
#include "evperf/physics.h"
#include "evperf/treeshap.h"

namespace evperf::cli {
namespace fs = std::filesystem;
namespace {

// Re-raises user errors with the pipeline stage that produced them.
template <typename Fn>
auto stage(std::string_view name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InputError& e) {
    throw InputError(std::string(name) + ": " + e.what());
  } catch (const UnreachableSpeedError& e) {
    throw InputError(std::string(name) + ": " + e.what());
  }
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InputError("cannot create output directory " + dir.string() +
                     (ec ? ": " + ec.message() : std::string()));
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw InputError("failed writing " + path.string());
}

std::string csv_text(const Table& table) {
  std::ostringstream s;
  write_csv(s, table);
  return s.str();
}

// CSV always; SVG rendered from the same table when enabled.
void emit_figure(const RunConfig& config, std::string_view stem, const Table& table,
                 const std::function<std::string(const Table&)>& render,
                 std::ostream& log) {
  const fs::path csv = config.out_dir / (std::string(stem) + ".csv");
  write_file(csv, csv_text(table));
  log << "wrote " << csv.string() << '\n';
  if (config.svg) {
    const fs::path svg = config.out_dir / (std::string(stem) + ".svg");
    write_file(svg, render(table));
    log << "wrote " << svg.string() << '\n';
  }
}

SynthConfig seeded_synth(const RunConfig& config) {
  SynthConfig sc = config.synth_config;
  sc.seed = config.seed;
  return sc;
}

std::vector<std::string> with_target(std::vector<std::string> columns) {
  columns.emplace_back(columns::kAcceleration);
  return columns;
}

std::vector<VehicleRecord> load_records(const RunConfig& config,
                                        std::span<const std::string> required,
                                        std::ostream& log) {
  require_single_data_source(config);
  if (config.synth) {
    return synth_records(seeded_synth(config), config.vehicle, config.pack);
  }
  HeaderAliases aliases;
  if (config.aliases) aliases = load_header_aliases(*config.aliases);
  auto loaded = load_csv(*config.input, required, aliases);
  if (loaded.parse_warnings > 0) {
    log << "note: " << loaded.parse_warnings
        << " cell(s) were unparseable or out of range and treated as missing\n";
  }
  return std::move(loaded.records);
}

TrainConfig train_config(const RunConfig& config) {
  TrainConfig cfg = config.train;
  cfg.seed = config.seed;
  return cfg;
}

}  // namespace

TrainOutcome cmd_train(const RunConfig& config, std::ostream& log) {
  const TrainConfig cfg = train_config(config);
  stage("config", [&] { cfg.validate(); });
  if (config.folds < 2) throw InputError("config: folds must be >= 2");

  const auto required = with_target(config.features);
  auto built = stage("data", [&] {
    const auto records = load_records(config, required, log);
    auto b = build_dataset(records, config.features);
    b.dataset.validate();
    return b;
  });
  if (built.dropped_incomplete > 0) {
    log << "note: dropped " << built.dropped_incomplete << " incomplete row(s)\n";
  }
  Dataset& ds = built.dataset;
  log << "samples: " << ds.size() << ", features: " << ds.num_features() << '\n';

  TrainOutcome outcome;
  outcome.dropped_rows = built.dropped_incomplete;
  outcome.report = stage("cross-validation",
                         [&] { return cross_validate(ds, cfg, config.folds, config.seed); });

  outcome.model = stage("training", [&] {
    PersistedModel m;
    m.scaler = fit_scaler(ds.features);
    Dataset scaled = ds;
    scaled.features = apply_scaler(ds.features, *m.scaler);
    scaled.scaler = m.scaler;
    m.ensemble = train(scaled, cfg);
    return m;
  });

  prepare_out_dir(config.out_dir);
  write_file(config.out_dir / "model.json",
             serialize_model(outcome.model.ensemble, outcome.model.scaler));
  write_file(config.out_dir / "metrics.json", metrics_to_json(outcome.report));
  log << "wrote " << (config.out_dir / "model.json").string() << '\n'
      << "wrote " << (config.out_dir / "metrics.json").string() << '\n';
  emit_figure(config, "confusion",
              confusion_table(outcome.report.confusion, outcome.report.class_names),
              confusion_svg, log);

  const auto& r = outcome.report;
  log << "cv accuracy " << format_number(r.accuracy) << ", roc_auc_macro_ovr "
      << format_number(r.roc_auc_macro_ovr) << ", mcc " << format_number(r.mcc)
      << ", mlogloss " << format_number(r.mlogloss) << '\n';
  return outcome;
}

void cmd_explain(const RunConfig& config, std::ostream& log) {
  if (!config.model) throw InputError("explain needs --model <model.json>");
  const PersistedModel model = stage("model", [&] { return load_model(*config.model); });
  const Ensemble& ens = model.ensemble;
  if (ens.feature_names != config.features) {
    std::string have, want;
    for (const auto& f : ens.feature_names) have += (have.empty() ? "" : ",") + f;
    for (const auto& f : config.features) want += (want.empty() ? "" : ",") + f;
    throw InputError("feature mismatch: model was trained on [" + have +
                     "] but the data features are [" + want + "]");
  }
  std::size_t dep_feature = ens.feature_names.size();
  for (std::size_t i = 0; i < ens.feature_names.size(); ++i) {
    if (ens.feature_names[i] == config.feature) dep_feature = i;
  }
  if (dep_feature == ens.feature_names.size()) {
    throw InputError("dependence feature '" + config.feature + "' is not a model feature");
  }

  const auto rows = stage("data", [&] {
    const auto records = load_records(config, ens.feature_names, log);
    auto kept = drop_missing(records, ens.feature_names);
    if (kept.dropped > 0) {
      log << "note: dropped " << kept.dropped << " incomplete row(s)\n";
    }
    if (kept.records.empty()) throw InputError("no complete rows to explain");
    return kept.records;
  });

  const auto class_names = perf_class_names();
  std::vector<std::string> names(class_names.begin(),
                                 class_names.begin() + std::min<std::size_t>(
                                     class_names.size(), ens.num_class));
  for (std::size_t k = names.size(); k < static_cast<std::size_t>(ens.num_class); ++k) {
    names.push_back(std::to_string(k));
  }

  std::vector<Explanation> explanations;
  std::vector<InteractionExplanation> interactions;
  explanations.reserve(rows.size());
  interactions.reserve(rows.size());
  for (const auto& rec : rows) {
    std::vector<double> raw;
    for (const auto& f : ens.feature_names) raw.push_back(*rec.get(f));
    const auto x = model.scaler ? apply_scaler(raw, *model.scaler) : raw;
    auto e = shap_values(ens, x);
    e.raw_x = raw;
    explanations.push_back(std::move(e));
    interactions.push_back(interaction_values(ens, x));
  }
  if (config.force_sample >= explanations.size()) {
    throw InputError("force_sample " + std::to_string(config.force_sample) +
                     " is out of range for " + std::to_string(explanations.size()) +
                     " sample(s)");
  }

  prepare_out_dir(config.out_dir);
  {
    std::ostringstream s;
    write_explanations_csv(s, explanations, names);
    write_file(config.out_dir / "shap_values.csv", s.str());
    log << "wrote " << (config.out_dir / "shap_values.csv").string() << '\n';
  }
  emit_figure(config, "gain_importance", gain_importance_table(ens), gain_importance_svg, log);
  const auto ranking = global_importance(explanations);
  emit_figure(config, "shap_importance", shap_importance_table(ranking, names),
              shap_importance_svg, log);
  emit_figure(config, "shap_swarm", shap_swarm_table(interactions, ens.feature_names, names),
              [](const Table& t) { return shap_swarm_svg(t); }, log);
  emit_figure(config, "dependence", dependence_table(explanations, dep_feature, names),
              dependence_svg, log);

  const Explanation& chosen = explanations[config.force_sample];
  std::size_t cls = 0;
  for (std::size_t k = 1; k < chosen.margin.size(); ++k) {
    if (chosen.margin[k] > chosen.margin[cls]) cls = k;
  }
  emit_figure(config, "force",
              force_table(force_plot_data(chosen, cls), config.force_sample, names[cls]),
              force_svg, log);
  log << "explained " << explanations.size() << " sample(s); SHAP values are in margin "
      << "(log-odds) space\n";
}

void cmd_synth(const RunConfig& config, std::ostream& log) {
  const SynthConfig sc = seeded_synth(config);
  const auto records = stage("synth", [&] {
    sc.validate();
    config.vehicle.validate();
    config.pack.validate();
    return synth_records(sc, config.vehicle, config.pack);
  });
  const auto sweep = stage("sweep", [&] {
    return diminishing_returns_sweep(config.vehicle, config.pack, config.sweep_n_parallel_min,
                                     config.sweep_n_parallel_max);
  });

  prepare_out_dir(config.out_dir);
  std::ostringstream s;
  write_records_csv(s, records, with_target(default_feature_columns()));
  write_file(config.out_dir / "synth.csv", s.str());
  log << "wrote " << (config.out_dir / "synth.csv").string() << " (" << records.size()
      << " rows)\n";
  emit_figure(config, "sweep", sweep_table(sweep), sweep_svg, log);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"evperf: EV acceleration class modelling with gradient boosting and SHAP"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  struct Bound {
    CLI::App* sub;
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> switches;
    std::map<std::string, CLI::Option*> options;
  };
  std::map<std::string, Bound> bound;

  const std::pair<const char*, const char*> subs[] = {
      {"train", "cross-validate and fit the classifier"},
      {"explain", "SHAP analyses of a trained model"},
      {"synth", "write a synthetic dataset and the parallel-count sweep"},
  };
  for (const auto& [name, help] : subs) {
    Bound& b = bound[name];
    b.sub = app.add_subcommand(name, help);
    b.sub->add_option("--config", b.config_path, "key = value config file");
    for (const auto& key : config_keys()) {
      const std::string flag = "--" + flag_name(key.name);
      if (key.name == "svg") {
        b.switches[key.name] = true;
        b.options[key.name] =
            b.sub->add_flag("--svg,!--no-svg", b.switches[key.name], key.help);
      } else if (key.is_switch) {
        b.switches[key.name] = false;
        b.options[key.name] = b.sub->add_flag(flag, b.switches[key.name], key.help);
      } else {
        b.options[key.name] = b.sub->add_option(flag, b.values[key.name], key.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (auto& [name, b] : bound) {
    if (!b.sub->parsed()) continue;
    try {
      RunConfig config;
      if (!b.config_path.empty()) {
        for (const auto& [key, value] : load_config_file(b.config_path)) {
          apply_setting(config, key, value);
        }
      }
      if (const char* env = std::getenv("EVPERF_SEED"); env != nullptr && *env != '\0') {
        try {
          apply_setting(config, "seed", env);
        } catch (const InputError& e) {
          throw InputError(std::string("EVPERF_SEED: ") + e.what());
        }
      }
      for (const auto& key : config_keys()) {
        const CLI::Option* opt = b.options.at(key.name);
        if (opt->count() == 0) continue;
        if (key.is_switch) {
          apply_setting(config, key.name, b.switches.at(key.name) ? "true" : "false");
        } else {
          apply_setting(config, key.name, b.values.at(key.name));
        }
      }

      if (name == "train") {
        cmd_train(config, out);
      } else if (name == "explain") {
        cmd_explain(config, out);
      } else {
        cmd_synth(config, out);
      }
      return kExitOk;
    } catch (const InputError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const UnreachableSpeedError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "internal error: " << e.what() << '\n';
      return kExitInternal;
    }
  }
  return kExitInternal;
}

}  // namespace evperf::cli
