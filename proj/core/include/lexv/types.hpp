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

#include <string_view>

#include <Eigen/Dense>

namespace lexv {

using Vector = Eigen::VectorXd;

/// Sample matrices hold one point per row. Row-major storage keeps each
/// point contiguous so rows bind to PointRef without a copy.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using PointRef = Eigen::Ref<const Eigen::VectorXd>;
using MatrixRef = Eigen::Ref<const Matrix>;

enum class ExplanationSource { analytic_gpc, parzen_mimic, hessian_fallback };

std::string_view to_string(ExplanationSource source);
ExplanationSource explanation_source_from_string(std::string_view text);

/// A local gradient attached to the query it explains.
///
/// For analytic GPC explanations the gradient is that of p(y=+1|x) and the
/// label is in {-1,+1}. For mimic explanations it is the gradient of the
/// probability of *not* being the wrapped classifier's label, and the label is
/// that classifier's class id. Hessian fallbacks store a unit direction.
struct ExplanationVector {
  Vector query;
  Vector gradient;
  double predicted_probability = 0.5;
  int predicted_label = 1;
  ExplanationSource source = ExplanationSource::analytic_gpc;
  bool far_field = false;
};

}  // namespace lexv
