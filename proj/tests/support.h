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

// Shared fixtures and reference implementations for the test binaries.

#ifndef EVPERF_TESTS_SUPPORT_H_
#define EVPERF_TESTS_SUPPORT_H_

#include <cstddef>
#include <span>
#include <vector>

#include "evperf/data_pipeline.h"
#include "evperf/gbdt.h"
#include "evperf/matrix.h"
#include "evperf/physics.h"
#include "evperf/random.h"
#include "evperf/treeshap.h"

namespace evperf::testing {

// Random tree with thresholds on a quarter grid in [0, 1] so that inputs can
// land exactly on a threshold. Covers are positive and additive.
Tree random_tree(Rng& rng, std::size_t num_features, int max_depth);

// Up to `max_rounds` rounds of `num_class` random trees.
Ensemble random_ensemble(Rng& rng, std::size_t num_features, int max_rounds,
                         int max_depth, int num_class);

// Inputs drawn from the same quarter grid plus off-grid values.
std::vector<double> random_input(Rng& rng, std::size_t num_features);

// Shapley interaction index of the cover-weighted game, by enumeration.
// Off-diagonals split the pair effect evenly; diagonals take the remainder
// of each feature's Shapley value.
InteractionExplanation brute_force_interactions(const Ensemble& model,
                                                std::span<const double> x);

// Softmax of negative squared distance to each class centroid.
Matrix nearest_centroid_proba(const Matrix& train, std::span<const int> labels,
                              const Matrix& test, int num_class);

// Pooled out-of-fold predictions of the centroid baseline under the same
// folds and per-fold scaling as cross_validate.
Matrix nearest_centroid_cv(const Dataset& dataset, int k, std::uint64_t seed);

struct DecileSlopes {
  double bottom = 0.0;  // least-squares slope over the lowest three deciles
  double top = 0.0;     // and over the highest three
};

// Points are sorted by value and cut into ten equal-count bins; the slope
// is fitted to the per-bin (mean value, mean phi) pairs.
DecileSlopes decile_slopes(std::span<const DependencePoint> points);

// Synthetic ranges with every driver pinned except motor torque.
SynthConfig torque_only_synth();

}  // namespace evperf::testing

#endif  // EVPERF_TESTS_SUPPORT_H_
