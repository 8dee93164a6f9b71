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

#include <filesystem>
#include <span>
#include <vector>

#include "lexv/data.hpp"
#include "lexv/types.hpp"

namespace lexv {

/// A classifier g to be explained. Implementations are immutable and
/// deterministic.
class LabelOracle {
 public:
  virtual ~LabelOracle() = default;
  [[nodiscard]] virtual int predict(PointRef x) const = 0;
};

/// Majority vote over the k Euclidean nearest training points. Distance ties
/// go to the lower training index; vote ties go to the tied class whose
/// member is nearest.
class KnnClassifier final : public LabelOracle {
 public:
  KnnClassifier(Matrix train_x, std::vector<int> train_y, int k);

  [[nodiscard]] int predict(PointRef x) const override;
  [[nodiscard]] int k() const noexcept { return k_; }
  [[nodiscard]] const Matrix& train_x() const noexcept { return train_x_; }
  [[nodiscard]] const std::vector<int>& train_y() const noexcept { return train_y_; }

  /// Training indices ordered by distance to x (ties by index), optionally skipping one.
  [[nodiscard]] std::vector<std::size_t> neighbors(PointRef x, std::ptrdiff_t skip = -1) const;

 private:
  Matrix train_x_;
  std::vector<int> train_y_;
  int k_;
};

/// Vote of the first k entries of an ordered neighbor list.
int knn_vote(std::span<const std::size_t> ordered_neighbors, std::span<const int> labels, int k);

/// Leave-one-out misclassification count for one k.
std::size_t knn_loo_errors(MatrixRef train_x, std::span<const int> train_y, int k);

struct KnnSelection {
  KnnClassifier classifier;
  std::vector<int> candidates;
  std::vector<std::size_t> loo_errors;  // parallel to candidates
};

/// Picks the k with fewest leave-one-out errors, ties toward the smaller k.
KnnSelection knn_fit_loo(MatrixRef train_x, std::span<const int> train_y,
                         std::span<const int> k_candidates);

/// Labels stored per dataset row. Lookup by point is exact coordinate
/// equality against the companion dataset.
class TableOracle final : public LabelOracle {
 public:
  TableOracle(Matrix companion, std::vector<int> labels);

  [[nodiscard]] int predict(PointRef x) const override;
  [[nodiscard]] int predict_row(std::size_t row_id) const;
  [[nodiscard]] const std::vector<int>& labels() const noexcept { return labels_; }

 private:
  Matrix companion_;
  std::vector<int> labels_;
};

/// Reads a prediction table with header `id,label`. Ids must be a bijection
/// onto the companion dataset's row ids; labels must lie in `declared_classes`
/// (the companion's classes when empty).
TableOracle table_oracle_load(const std::filesystem::path& path, const Dataset& companion,
                              std::span<const int> declared_classes = {});
TableOracle table_oracle_read(std::istream& in, const Dataset& companion,
                              std::span<const int> declared_classes = {},
                              const std::string& source = "<stream>");

/// Writes g's prediction for every row of `data` as an `id,label` table.
void write_prediction_table(std::ostream& out, const LabelOracle& g, const Dataset& data);
void save_prediction_table(const std::filesystem::path& path, const LabelOracle& g,
                           const Dataset& data);

}  // namespace lexv
