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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lexv/data.hpp"
#include "lexv/gpc.hpp"
#include "lexv/kernels.hpp"

namespace lexv::tools {

/// A trained GP classifier with the column names and optional standardization
/// of the data it was trained on. Explanations are reported in the raw input
/// coordinates; the chain rule through the standardization is applied.
struct GpcBundle {
  GpcModel model;
  std::vector<std::string> feature_names;
  std::optional<NormStats> norm;

  [[nodiscard]] Vector to_model_space(PointRef raw) const;
  [[nodiscard]] Vector gradient_to_raw(PointRef model_gradient) const;
  /// explain_gpc at a raw point; query and gradient are in raw coordinates.
  [[nodiscard]] ExplanationVector explain(PointRef raw) const;
  [[nodiscard]] double probability(PointRef raw) const;
  /// Training inputs mapped back to raw coordinates.
  [[nodiscard]] Matrix raw_training_inputs() const;
};

std::string bundle_to_json(const GpcBundle& bundle);
GpcBundle bundle_from_json(const std::string& text);
GpcBundle load_bundle(const std::string& path);

struct FitGpcOptions {
  std::string data;
  std::string test;
  std::string kernel = "rbf";
  std::vector<double> w_grid;       // rbf; empty: scaled default
  std::vector<double> alpha_grid;   // rational quadratic
  std::vector<double> length_grid;  // rational quadratic; empty: scaled default
  double validation_fraction = 0.25;
  bool normalize = false;
  std::uint64_t seed = 0;
  std::string out;
  std::string metrics_out;
};

/// Grid search by validation accuracy, refit on the full training set.
/// Returns the metrics document.
std::string cmd_fit_gpc(const FitGpcOptions& options, std::ostream& out);

struct ExplainOptions {
  std::string data;
  std::string model;   // analytic path
  std::string oracle;  // estimated path: id,label table for the rows of `data`
  std::string mimic;   // optional stored mimic for the estimated path
  std::string mimic_out;
  std::optional<double> sigma;
  std::vector<double> sigma_grid;  // empty: default grid
  std::optional<double> smooth_window;
  bool hessian_fallback = false;
  double hessian_threshold = 1e-6;
  std::string out;
};

void cmd_explain(const ExplainOptions& options, std::ostream& out);

struct VectorFieldOptions {
  std::string model;
  std::string mimic;
  std::vector<double> grid;  // x_lo, x_hi, y_lo, y_hi; empty: bounding box of the training inputs
  int resolution = 21;
  std::string out;
};

void cmd_vector_field(const VectorFieldOptions& options, std::ostream& out);

struct MorphOptions {
  std::string model;
  std::string data;
  int steps = 50;
  std::optional<double> step_size;  // default 0.1 x median pairwise distance of the training inputs
  std::string out;
};

void cmd_morph(const MorphOptions& options, std::ostream& out);

struct RankOptions {
  std::string data;  // explanation CSV
  std::string out;
  std::string hist_out;
  std::size_t bins = 30;
  double epsilon = 1.0;
};

void cmd_rank(const RankOptions& options, std::ostream& out);

struct CompareOptions {
  std::string data;  // explanation CSV
  std::string feature;
  std::string groups;  // CSV with columns id and `group_column`
  std::string group_column = "group";
  std::size_t bins = 30;
  double epsilon = 1.0;
  std::string out;
};

/// Returns the comparison document.
std::string cmd_compare(const CompareOptions& options, std::ostream& out);

struct IrisCommandOptions {
  std::uint64_t seed = 0;
  int runs = 1;
  std::vector<int> k_grid;
  std::vector<double> sigma_grid;
  std::string out;  // directory; empty: summary only
};

std::string cmd_iris(const IrisCommandOptions& options, std::ostream& out);

}  // namespace lexv::tools
