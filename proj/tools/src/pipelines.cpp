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

#include "lexv_tools/pipelines.hpp"

#include <numeric>

#include "lexv/error.hpp"

namespace lexv::tools {

IrisRun run_iris(const IrisOptions& options) {
  const Dataset iris = relabel_versicolor(load_iris());
  if (options.n_train < 2 || options.n_train >= iris.size()) {
    fail(ErrorKind::invalid_argument, "Iris training size must lie in [2, 149]");
  }
  IrisRun run;
  const Split raw = split_stratified(iris, SplitOptions{options.n_train, options.seed, false, std::nullopt});
  const std::vector<Dataset> test{raw.test};
  NormalizedSets normalized = normalize_fit_apply(raw.train, test);
  run.norm = normalized.stats;
  run.split = Split{std::move(normalized.train), std::move(normalized.others.front()), raw.train_rows,
                    raw.test_rows};
  const Dataset& train = run.split.train;
  const Dataset& held_out = run.split.test;

  run.k_candidates = options.k_candidates;
  if (run.k_candidates.empty()) {
    run.k_candidates.resize(15);
    std::iota(run.k_candidates.begin(), run.k_candidates.end(), 1);
  }
  KnnSelection knn = knn_fit_loo(train.features, train.labels, run.k_candidates);
  run.k = knn.classifier.k();
  run.k_loo_errors = knn.loo_errors;

  std::size_t train_mistakes = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    run.train_predictions.push_back(knn.classifier.predict(train.features.row(static_cast<Eigen::Index>(i)).transpose()));
    if (run.train_predictions.back() != train.labels[i]) ++train_mistakes;
  }
  std::size_t test_mistakes = 0;
  for (std::size_t i = 0; i < held_out.size(); ++i) {
    run.test_predictions.push_back(
        knn.classifier.predict(held_out.features.row(static_cast<Eigen::Index>(i)).transpose()));
    if (run.test_predictions.back() != held_out.labels[i]) ++test_mistakes;
  }
  run.train_error = static_cast<double>(train_mistakes) / static_cast<double>(train.size());
  run.test_error = static_cast<double>(test_mistakes) / static_cast<double>(held_out.size());

  const std::vector<double> grid =
      options.sigma_candidates.empty() ? default_sigma_grid(train.features) : options.sigma_candidates;
  run.width = select_width_loo(train.features, run.train_predictions, grid);
  const ParzenMimic mimic(train.features, run.train_predictions, run.width.sigma);

  std::size_t agree = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (mimic_predict(mimic, train.features.row(static_cast<Eigen::Index>(i)).transpose()).label ==
        run.train_predictions[i]) {
      ++agree;
    }
  }
  run.mimic_agreement = static_cast<double>(agree) / static_cast<double>(train.size());

  const auto& species = held_out.aux.at("species");
  for (std::size_t i = 0; i < held_out.size(); ++i) {
    run.explanations.push_back(explain_estimated(
        mimic, held_out.features.row(static_cast<Eigen::Index>(i)).transpose(), run.test_predictions[i]));
    run.test_species.push_back(static_cast<int>(species[i]));
  }
  return run;
}

}  // namespace lexv::tools
