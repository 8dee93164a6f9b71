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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexv/types.hpp"

namespace lexv {

struct NormStats {
  std::vector<std::string> feature_names;
  std::vector<double> mean;
  std::vector<double> stddev;    // 1 for constant features
  std::vector<bool> constant;
};

/// Feature matrix plus integer class labels. Row ids are positions in the
/// file the set was loaded from; subsets keep the ids of their source rows.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::vector<std::size_t> row_ids;
  std::optional<NormStats> norm;
  /// Non-feature numeric columns carried along (group masks, species, ...).
  std::map<std::string, std::vector<double>> aux;

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  [[nodiscard]] Eigen::Index dim() const noexcept { return features.cols(); }
  [[nodiscard]] std::vector<int> classes() const;
  [[nodiscard]] Dataset subset(std::span<const std::size_t> rows) const;
  /// Index of a feature by name; throws not_found.
  [[nodiscard]] std::size_t feature_index(const std::string& name) const;
};

struct CsvSchema {
  std::string id_column = "id";            // optional in the file
  std::string label_column = "label";
  bool label_optional = false;             // absent column: every label is 0
  std::vector<int> allowed_labels;         // empty: any integer
  std::vector<std::string> aux_columns;    // kept out of the features
};

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
Dataset read_csv(std::istream& in, const CsvSchema& schema = {}, const std::string& source = "<stream>");

/// Header `id,<features...>,<aux...>,label`; values round-trip exactly.
void save_csv(const std::filesystem::path& path, const Dataset& data);
void write_csv(std::ostream& out, const Dataset& data);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

NormStats fit_normalization(const Dataset& train);
Dataset apply_normalization(const Dataset& data, const NormStats& stats);

struct NormalizedSets {
  Dataset train;
  std::vector<Dataset> others;
  NormStats stats;
};

/// Standardizes with the training set's mean and population standard deviation.
NormalizedSets normalize_fit_apply(const Dataset& train, std::span<const Dataset> others = {});

struct SplitOptions {
  std::size_t n_train = 0;
  std::uint64_t seed = 0;
  bool balance_classes = false;
  /// Group membership per row; when given, train and test keep the group's share.
  std::optional<std::vector<bool>> preserve_group;
};

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;  // positions in the source set
  std::vector<std::size_t> test_rows;
};

Split split_stratified(const Dataset& data, const SplitOptions& options);

// Toy generators. All are deterministic in their seed.

/// Right triangle with vertices (0.2,0.2), (0.8,0.2), (0.2,0.8) inside the unit square.
bool in_triangle(double x, double y);
/// Distance from (x,y) to the triangle; 0 inside.
double triangle_distance(double x, double y);

/// +1 points uniform in the triangle, -1 points uniform in the unit square
/// at distance >= 0.05 from it.
Dataset gen_triangle(std::size_t n_per_class, std::uint64_t seed);

/// Three isotropic Gaussian clusters centered at x1 = -1, 0, +1 on x2 = 0 with
/// stddev 0.25; the middle one is labeled +1, the outer ones -1. Samples are
/// drawn in mirror quadruples (+-dx1, +-dx2) around each center, so each
/// cluster and the configuration as a whole are exactly symmetric. The middle
/// cluster reuses the outer offsets, so x2 has the same marginal in both classes.
Dataset gen_three_clusters(std::size_t n, std::uint64_t seed);
inline constexpr double kClusterSpacing = 1.0;
inline constexpr double kClusterStddev = 0.25 * kClusterSpacing;

/// Negative disc (center (0.3,0.5), radius 0.18) surrounded by positives on
/// the left of x = 0.6; a negative region on the right crossed by a vertical
/// ridge of isolated positive points at x = 0.8.
Dataset gen_nonlinear(std::size_t n, std::uint64_t seed);
int nonlinear_region_label(double x, double y);
inline constexpr double kRidgeX = 0.8;

struct OutlierInjection {
  Dataset data;
  std::vector<std::size_t> indices;
};

/// Flips the labels of `count` points chosen from the interior of their class
/// (nearest opposite-class point farther than the class median), so each
/// flipped point sits inside the region of the class opposite to its new label.
OutlierInjection inject_outliers(const Dataset& data, std::size_t count, std::uint64_t seed);

/// Standard normal features f00..f19; the label is the sign of
/// (f00 + f01 + f02) - (f03 + f04) plus logistic noise of scale `noise`.
/// Features 0-2 raise the chance of +1, features 3-4 lower it, the rest are inert.
Dataset gen_planted_features(std::size_t n, std::uint64_t seed, double noise = 0.5);
inline constexpr std::size_t kPlantedDim = 20;
inline constexpr std::size_t kPlantedPositive = 3;
inline constexpr std::size_t kPlantedNegative = 2;

/// Features (signal, group, noise). Outside the group the label is the sign of
/// `signal` plus logistic noise; inside it (group == 1, a `group_share` of the
/// rows) the label is a fair coin. aux["group"] repeats the indicator.
Dataset gen_immune_subgroup(std::size_t n, std::uint64_t seed, double group_share = 0.3,
                            double noise = 0.3);

/// Fisher's Iris: 150 x 4, labels 0 setosa, 1 versicolor, 2 virginica.
Dataset load_iris();
/// versicolor -> 0, setosa and virginica -> 1. The species survive in aux["species"].
Dataset relabel_versicolor(const Dataset& iris);

}  // namespace lexv
