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

#include "lexv/types.hpp"

namespace lexv {

enum class KernelKind { rbf, linear, rational_quadratic };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view text);

/// Positive-definite kernel with an analytic gradient in its first argument.
///
///   rbf                 k(x,y) = exp(-w |x-y|^2)
///   linear              k(x,y) = x . y
///   rational_quadratic  k(x,y) = (1 + |x-y|^2 / (2 alpha l^2))^(-alpha)
///
/// Parameters a kind does not use are carried along but never validated.
class KernelSpec {
 public:
  KernelSpec(KernelKind kind, double w, double alpha, double length);

  static KernelSpec rbf(double w) { return {KernelKind::rbf, w, 1.0, 1.0}; }
  static KernelSpec linear() { return {KernelKind::linear, 1.0, 1.0, 1.0}; }
  static KernelSpec rational_quadratic(double alpha, double length) {
    return {KernelKind::rational_quadratic, 1.0, alpha, length};
  }

  [[nodiscard]] KernelKind kind() const noexcept { return kind_; }
  [[nodiscard]] double width() const noexcept { return w_; }
  [[nodiscard]] double rq_alpha() const noexcept { return alpha_; }
  [[nodiscard]] double rq_length() const noexcept { return length_; }

  [[nodiscard]] bool translation_invariant() const noexcept { return kind_ != KernelKind::linear; }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelKind kind_;
  double w_;
  double alpha_;
  double length_;
};

double kernel_eval(const KernelSpec& spec, PointRef x, PointRef y);

/// d/dx k(x, y).
Vector kernel_grad_x(const KernelSpec& spec, PointRef x, PointRef y);

/// Total derivative d/dx k(x, x). Zero for translation-invariant kinds.
Vector kernel_diag_grad(const KernelSpec& spec, PointRef x);

/// n x n Gram matrix over the rows of `points`.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, MatrixRef points);

/// k_* = (k(x, x_1), ..., k(x, x_n)).
Vector cross_kernel(const KernelSpec& spec, MatrixRef points, PointRef x);

/// Row i holds d/dx k(x, x_i).
Eigen::MatrixXd cross_kernel_grad(const KernelSpec& spec, MatrixRef points, PointRef x);

}  // namespace lexv
