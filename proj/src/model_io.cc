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

#include "evperf/model_io.h"

#include <fstream>
#include <iterator>

#include "evperf/errors.h"
#include "json.hpp"

namespace evperf {
namespace {

using nlohmann::json;

json node_to_json(const Tree& tree, int index) {
  const auto& n = tree.node(static_cast<std::size_t>(index));
  if (n.is_leaf()) return json{{"leaf", n.weight}, {"cover", n.cover}};
  return json{{"feature", n.feature},       {"threshold", n.threshold},
              {"gain", n.gain},             {"cover", n.cover},
              {"left", node_to_json(tree, n.left)},
              {"right", node_to_json(tree, n.right)}};
}

// Appends in preorder so the node layout matches what training produces.
int node_from_json(const json& j, std::vector<TreeNode>& nodes, int depth) {
  if (depth > 256) throw InputError("model tree is too deep");
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (j.contains("leaf")) {
    nodes[index].weight = j.at("leaf").get<double>();
    nodes[index].cover = j.at("cover").get<double>();
    return index;
  }
  const int left = node_from_json(j.at("left"), nodes, depth + 1);
  const int right = node_from_json(j.at("right"), nodes, depth + 1);
  auto& n = nodes[index];
  n.feature = j.at("feature").get<int>();
  n.threshold = j.at("threshold").get<double>();
  n.gain = j.at("gain").get<double>();
  n.cover = j.at("cover").get<double>();
  n.left = left;
  n.right = right;
  if (n.feature < 0) throw InputError("model split has a negative feature index");
  return index;
}

json config_to_json(const TrainConfig& c) {
  return json{{"n_rounds", c.n_rounds},
              {"learning_rate", c.learning_rate},
              {"max_depth", c.max_depth},
              {"lambda", c.lambda},
              {"alpha", c.alpha},
              {"gamma", c.gamma},
              {"min_child_hessian", c.min_child_hessian},
              {"num_class", c.num_class},
              {"seed", c.seed}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.n_rounds = j.at("n_rounds").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.max_depth = j.at("max_depth").get<int>();
  c.lambda = j.at("lambda").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.min_child_hessian = j.at("min_child_hessian").get<double>();
  c.num_class = j.at("num_class").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

std::string serialize_model(const Ensemble& model,
                            const std::optional<ScalerParams>& scaler) {
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelFormatVersion;
  doc["config"] = config_to_json(model.config);
  doc["num_class"] = model.num_class;
  doc["feature_names"] = model.feature_names;
  doc["base_score"] = model.base_score;
  if (scaler) {
    doc["scaler"] = json{{"mean", scaler->mean}, {"stddev", scaler->stddev}};
  }
  json trees = json::array();
  for (const auto& bt : model.trees) {
    trees.push_back(json{{"round", bt.round},
                         {"class", bt.class_index},
                         {"root", node_to_json(bt.tree, 0)}});
  }
  doc["trees"] = std::move(trees);
  return doc.dump(1) + "\n";
}

PersistedModel parse_model(std::string_view json_text) {
  PersistedModel out;
  try {
    const json doc = json::parse(json_text);
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw InputError("not an evperf model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw InputError("unsupported model version " + std::to_string(version));
    }
    auto& m = out.ensemble;
    m.config = config_from_json(doc.at("config"));
    m.num_class = doc.at("num_class").get<int>();
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    m.base_score = doc.at("base_score").get<std::vector<double>>();
    for (const auto& t : doc.at("trees")) {
      std::vector<TreeNode> nodes;
      node_from_json(t.at("root"), nodes, 0);
      m.trees.push_back(
          {t.at("round").get<int>(), t.at("class").get<int>(), Tree(std::move(nodes))});
    }
    if (doc.contains("scaler")) {
      ScalerParams s;
      s.mean = doc["scaler"].at("mean").get<std::vector<double>>();
      s.stddev = doc["scaler"].at("stddev").get<std::vector<double>>();
      if (s.mean.size() != s.stddev.size() ||
          s.mean.size() != m.feature_names.size()) {
        throw InputError("model scaler dimension does not match feature count");
      }
      out.scaler = std::move(s);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model document: ") + e.what());
  }
  out.ensemble.validate();
  return out;
}

void save_model(const std::filesystem::path& path, const Ensemble& model,
                const std::optional<ScalerParams>& scaler) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model file: " + path.string());
  out << serialize_model(model, scaler);
}

PersistedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_model(text);
}

}  // namespace evperf
