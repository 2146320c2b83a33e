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

#include "evperf/treeshap.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "evperf/errors.h"
#include "evperf/physics.h"
#include "support.h"

namespace evperf {
namespace {

TreeNode leaf(double weight, double cover) {
  TreeNode n;
  n.weight = weight;
  n.cover = cover;
  return n;
}

TreeNode split(int feature, double threshold, int left, int right, double cover) {
  TreeNode n;
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  n.cover = cover;
  n.gain = 1.0;
  return n;
}

Ensemble one_tree_model(Tree tree, std::size_t num_features, double eta, double base = 0.25) {
  Ensemble e;
  e.num_class = 2;
  e.base_score = {base, -base};
  for (std::size_t i = 0; i < num_features; ++i) e.feature_names.push_back("f" + std::to_string(i));
  e.config.learning_rate = eta;
  e.config.num_class = 2;
  e.trees.push_back({0, 0, std::move(tree)});
  e.trees.push_back({0, 1, Tree({leaf(0.0, 1.0)})});
  return e;
}

// Random models within the oracle limits: at most 5 trees, depth <= 3, d <= 6.
Ensemble small_random_model(Rng& rng, std::size_t d) {
  const int num_class = static_cast<int>(rng.uniform_int(2, 3));
  const int max_rounds = num_class == 2 ? 2 : 1;
  return testing::random_ensemble(rng, d, max_rounds, 3, num_class);
}

TEST(ShapValuesTest, SingleLeafTree) {
  const Ensemble e = one_tree_model(Tree({leaf(1.5, 4.0)}), 3, 0.3);
  const auto ex = shap_values(e, std::vector<double>{1, 2, 3});
  for (double v : ex.phi.data()) EXPECT_EQ(v, 0.0);
  EXPECT_DOUBLE_EQ(ex.base_value[0], 0.25 + 0.3 * 1.5);
}

TEST(ShapValuesTest, DepthOneTree) {
  const double a = -0.8, b = 1.3, nl = 3.0, nr = 5.0, eta = 0.4;
  const Ensemble e = one_tree_model(
      Tree({split(0, 0.5, 1, 2, nl + nr), leaf(a, nl), leaf(b, nr)}), 2, eta);
  const std::vector<double> x{0.9, 0.1};
  const auto ex = shap_values(e, x);
  EXPECT_NEAR(ex.phi(0, 0), eta * (b - (nl * a + nr * b) / (nl + nr)), 1e-15);
  EXPECT_EQ(ex.phi(1, 0), 0.0);
  const Matrix brute = brute_force_shapley(e, x);
  EXPECT_NEAR(brute(0, 0), ex.phi(0, 0), 1e-15);
}

TEST(ShapValuesTest, LocalAccuracyOnRandomModels) {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    const auto d = static_cast<std::size_t>(rng.uniform_int(1, 8));
    const Ensemble e = testing::random_ensemble(rng, d, 6, 5, 3);
    const auto x = testing::random_input(rng, d);
    const auto ex = shap_values(e, x);
    const auto margin = predict_margin(e, x);
    for (std::size_t k = 0; k < 3; ++k) {
      double total = ex.base_value[k];
      for (std::size_t i = 0; i < d; ++i) total += ex.phi(i, k);
      EXPECT_NEAR(total, margin[k], 1e-9);
      EXPECT_DOUBLE_EQ(ex.margin[k], margin[k]);
    }
  }
}

TEST(ShapValuesTest, MatchesBruteForceOracle) {
  Rng rng(32);
  for (int t = 0; t < 150; ++t) {
    const auto d = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const Ensemble e = small_random_model(rng, d);
    ASSERT_LE(e.trees.size(), 5u);
    const auto x = testing::random_input(rng, d);
    const auto fast = shap_values(e, x);
    const Matrix brute = brute_force_shapley(e, x);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < brute.cols(); ++k) {
        EXPECT_NEAR(fast.phi(i, k), brute(i, k), 1e-9) << "trial " << t;
      }
    }
  }
}

TEST(ShapValuesTest, DummyFeatureIsExactlyZero) {
  Rng rng(33);
  for (int t = 0; t < 50; ++t) {
    Ensemble e = testing::random_ensemble(rng, 3, 3, 3, 3);
    e.feature_names.push_back("unused");
    auto x = testing::random_input(rng, 4);
    const auto ex = shap_values(e, x);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(ex.phi(3, k), 0.0);
  }
}

TEST(ShapValuesTest, DimensionMismatch) {
  const Ensemble e = one_tree_model(Tree({leaf(1, 1)}), 3, 0.1);
  EXPECT_THROW(shap_values(e, std::vector<double>{1}), InputError);
}

TEST(BruteForceTest, SingleLeafIsZero) {
  const Ensemble e = one_tree_model(Tree({leaf(2, 1)}), 4, 0.5);
  const Matrix phi = brute_force_shapley(e, std::vector<double>{0, 0, 0, 0});
  for (double v : phi.data()) EXPECT_EQ(v, 0.0);
}

TEST(BruteForceTest, SymmetricFeaturesShareCredit) {
  // f0 and f1 play interchangeable roles and x0 == x1.
  // Covers make f0 and f1 independent with equal marginals.
  const Tree t({split(0, 0.5, 1, 2, 10), split(1, 0.5, 3, 4, 5), split(1, 0.5, 5, 6, 5),
                leaf(-1.0, 2.5), leaf(0.5, 2.5), leaf(0.5, 2.5), leaf(2.0, 2.5)});
  const Ensemble e = one_tree_model(t, 2, 1.0);
  const std::vector<double> x{0.7, 0.7};
  const Matrix brute = brute_force_shapley(e, x);
  EXPECT_NEAR(brute(0, 0), brute(1, 0), 1e-15);
  const auto fast = shap_values(e, x);
  EXPECT_NEAR(fast.phi(0, 0), fast.phi(1, 0), 1e-15);
}

TEST(BruteForceTest, RejectsTooManyFeatures) {
  const Ensemble e = one_tree_model(Tree({leaf(2, 1)}), kMaxBruteForceFeatures + 1, 0.5);
  EXPECT_THROW(brute_force_shapley(e, std::vector<double>(kMaxBruteForceFeatures + 1, 0.0)),
               InputError);
}

Explanation manual(std::vector<std::vector<double>> phi) {
  Explanation e;
  e.phi = Matrix::from_rows(phi);
  e.base_value.assign(e.phi.cols(), 0.0);
  e.margin.assign(e.phi.cols(), 0.0);
  for (std::size_t i = 0; i < e.phi.rows(); ++i) {
    e.feature_names.push_back("f" + std::to_string(i));
    e.x.push_back(static_cast<double>(i));
    for (std::size_t k = 0; k < e.phi.cols(); ++k) e.margin[k] += e.phi(i, k);
  }
  e.raw_x = e.x;
  return e;
}

TEST(GlobalImportanceTest, MeanAbsolute) {
  const std::vector<Explanation> ex{manual({{1}, {0}}), manual({{-1}, {0}})};
  const auto rank = global_importance(ex);
  ASSERT_EQ(rank.size(), 2u);
  EXPECT_EQ(rank[0].feature, 0u);
  EXPECT_EQ(rank[0].overall, 1.0);
  EXPECT_EQ(rank[1].overall, 0.0);
  EXPECT_EQ(rank[0].name, "f0");
}

TEST(GlobalImportanceTest, ZerosKeepIndexOrder) {
  const std::vector<Explanation> ex{manual({{0, 0}, {0, 0}, {0, 0}})};
  const auto rank = global_importance(ex);
  for (std::size_t i = 0; i < rank.size(); ++i) {
    EXPECT_EQ(rank[i].feature, i);
    EXPECT_EQ(rank[i].overall, 0.0);
  }
  EXPECT_THROW(global_importance(std::span<const Explanation>{}), InputError);
}

TEST(GlobalImportanceTest, Homogeneous) {
  Rng rng(34);
  std::vector<Explanation> ex, doubled;
  for (int s = 0; s < 10; ++s) {
    std::vector<std::vector<double>> phi(4, std::vector<double>(3));
    for (auto& row : phi) {
      for (auto& v : row) v = rng.uniform(-1, 1);
    }
    ex.push_back(manual(phi));
    for (auto& row : phi) {
      for (auto& v : row) v *= 2;
    }
    doubled.push_back(manual(phi));
  }
  const auto a = global_importance(ex), b = global_importance(doubled);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].feature, b[i].feature);
    EXPECT_NEAR(b[i].overall, 2 * a[i].overall, 1e-15);
    EXPECT_NEAR(b[i].per_class[1], 2 * a[i].per_class[1], 1e-15);
  }
}

TEST(DependenceTest, OnePointPerSample) {
  Rng rng(35);
  const Ensemble e = testing::random_ensemble(rng, 3, 3, 3, 3);
  std::vector<Explanation> ex;
  for (int s = 0; s < 3; ++s) {
    auto x = testing::random_input(rng, 3);
    auto one = shap_values(e, x);
    one.raw_x = {x[0] * 100, x[1] * 100, x[2] * 100};
    ex.push_back(one);
  }
  const auto pts = dependence_data(ex, 1, 2);
  ASSERT_EQ(pts.size(), 3u);
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_EQ(pts[s].value, ex[s].raw_x[1]);
    EXPECT_EQ(pts[s].phi, ex[s].phi(1, 2));
  }
  EXPECT_THROW(dependence_data(ex, 3, 0), InputError);
  EXPECT_THROW(dependence_data(ex, 0, 3), InputError);
}

TEST(DependenceTest, UnusedConstantFeatureIsFlat) {
  Rng rng(36);
  Ensemble e = testing::random_ensemble(rng, 2, 3, 3, 3);
  e.feature_names.push_back("constant");
  std::vector<Explanation> ex;
  for (int s = 0; s < 20; ++s) {
    auto x = testing::random_input(rng, 2);
    x.push_back(4.0);
    ex.push_back(shap_values(e, x));
  }
  for (const auto& p : dependence_data(ex, 2, 0)) {
    EXPECT_EQ(p.value, 4.0);
    EXPECT_EQ(p.phi, 0.0);
  }
}

TEST(DependenceTest, CellCountShowsDiminishingReturns) {
  const Dataset ds = synth_dataset(SynthConfig{}, VehicleParams{}, PackConfig{});
  const ScalerParams scaler = fit_scaler(ds.features);
  const Matrix x = apply_scaler(ds.features, scaler);
  const Ensemble m = train(x, ds.label_indices(), ds.feature_names, TrainConfig{});
  std::vector<Explanation> ex;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto e = shap_values(m, x.row(r));
    e.raw_x.assign(ds.features.row(r).begin(), ds.features.row(r).end());
    ex.push_back(std::move(e));
  }
  const std::size_t cells = ds.feature_index("number_of_cells");
  const auto slopes = testing::decile_slopes(
      dependence_data(ex, cells, static_cast<std::size_t>(PerfClass::kHigh)));
  EXPECT_GT(slopes.bottom, 0.0);
  EXPECT_LT(slopes.top, slopes.bottom);
}

TEST(InteractionTest, SingleFeatureTree) {
  const Ensemble e = one_tree_model(
      Tree({split(2, 0.5, 1, 2, 5), leaf(-1, 2), leaf(1, 3)}), 3, 0.7);
  const std::vector<double> x{0.1, 0.9, 0.2};
  const auto iv = interaction_values(e, x);
  const auto ex = shap_values(e, x);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) {
        EXPECT_EQ(iv.at(i, j, 0), 0.0);
      }
    }
  }
  EXPECT_NEAR(iv.at(2, 2, 0), ex.phi(2, 0), 1e-15);
  EXPECT_EQ(iv.at(0, 0, 0), 0.0);
}

TEST(InteractionTest, SymmetricAndConsistentOnRandomModels) {
  Rng rng(37);
  for (int t = 0; t < 200; ++t) {
    const auto d = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const Ensemble e = testing::random_ensemble(rng, d, 4, 4, 3);
    const auto x = testing::random_input(rng, d);
    const auto iv = interaction_values(e, x);
    const auto ex = shap_values(e, x);
    const auto margin = predict_margin(e, x);
    for (std::size_t k = 0; k < 3; ++k) {
      double total = iv.base_value[k];
      for (std::size_t i = 0; i < d; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          EXPECT_EQ(iv.at(i, j, k), iv.at(j, i, k));
          row += iv.at(i, j, k);
        }
        EXPECT_NEAR(row, ex.phi(i, k), 1e-6);
        total += row;
      }
      EXPECT_NEAR(total, margin[k], 1e-6);
    }
  }
}

TEST(InteractionTest, MatchesBruteForceInteractionIndex) {
  Rng rng(38);
  for (int t = 0; t < 120; ++t) {
    const auto d = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const Ensemble e = small_random_model(rng, d);
    const auto x = testing::random_input(rng, d);
    const auto fast = interaction_values(e, x);
    const auto brute = testing::brute_force_interactions(e, x);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < fast.num_class; ++k) {
          EXPECT_NEAR(fast.at(i, j, k), brute.at(i, j, k), 1e-9) << "trial " << t;
        }
      }
    }
  }
}

TEST(ForcePlotTest, AllZero) {
  Explanation e = manual({{0}, {0}});
  e.base_value = {0.4};
  e.margin = {0.4};
  const auto fp = force_plot_data(e, 0);
  EXPECT_TRUE(fp.entries.empty());
  EXPECT_EQ(fp.margin, fp.base_value);
  EXPECT_EQ(fp.residual, 0.0);
}

TEST(ForcePlotTest, OrderedByMagnitude) {
  Explanation e = manual({{2}, {-1}, {-3.5}});
  const auto fp = force_plot_data(e, 0);
  ASSERT_EQ(fp.entries.size(), 3u);
  EXPECT_EQ(fp.entries[0].name, "f2");
  EXPECT_EQ(fp.entries[0].sign, -1);
  EXPECT_EQ(fp.entries[1].name, "f0");
  EXPECT_EQ(fp.entries[1].sign, 1);
  EXPECT_EQ(fp.entries[2].name, "f1");
  EXPECT_THROW(force_plot_data(e, 1), InputError);
}

TEST(ForcePlotTest, SumMatchesMargin) {
  Rng rng(39);
  for (int t = 0; t < 50; ++t) {
    const Ensemble e = testing::random_ensemble(rng, 5, 4, 4, 3);
    const auto ex = shap_values(e, testing::random_input(rng, 5));
    for (std::size_t k = 0; k < 3; ++k) {
      const auto fp = force_plot_data(ex, k);
      double total = fp.base_value;
      for (const auto& entry : fp.entries) total += entry.phi;
      EXPECT_NEAR(total, fp.margin, 1e-6);
      EXPECT_LT(std::abs(fp.residual), 1e-6);
    }
  }
}

TEST(ExplanationCsvTest, OneRowPerSampleFeatureClass) {
  const std::vector<Explanation> ex{manual({{1, 2}, {3, 4}, {5, 6}}), manual({{0, 0}, {0, 0}, {0, 0}})};
  std::ostringstream out;
  const std::vector<std::string> classes{"A", "B"};
  write_explanations_csv(out, ex, classes);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "sample,feature,class,value,phi");
  std::getline(in, line);
  EXPECT_EQ(line, "0,f0,A,0,1");
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2u * 3 * 2);
}

}  // namespace
}  // namespace evperf
