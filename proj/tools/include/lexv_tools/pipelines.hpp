/*
 * Copyright 2026 The lexv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "lexv/classifiers.hpp"
#include "lexv/data.hpp"
#include "lexv/mimic.hpp"
#include "lexv/types.hpp"

namespace lexv::tools {

struct IrisOptions {
  std::uint64_t seed = 0;
  std::size_t n_train = 100;
  std::vector<int> k_candidates;         // empty: 1..15
  std::vector<double> sigma_candidates;  // empty: default grid on the normalized training set
};

/// One run of the versicolor-vs-rest protocol: random split, training-set
/// normalization, k-NN with leave-one-out k, leave-one-out mimic width, and
/// estimated explanations for the test points.
struct IrisRun {
  Split split;  // normalized
  NormStats norm;
  int k = 0;
  std::vector<int> k_candidates;
  std::vector<std::size_t> k_loo_errors;
  double train_error = 0.0;
  double test_error = 0.0;
  WidthSelection width;
  double mimic_agreement = 0.0;  // on the training set, mimic vs k-NN
  std::vector<int> train_predictions;
  std::vector<int> test_predictions;
  std::vector<ExplanationVector> explanations;  // one per test point
  std::vector<int> test_species;
};

IrisRun run_iris(const IrisOptions& options);

}  // namespace lexv::tools
