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

#include "lexv/kernels.hpp"

#include <cmath>
#include <string>

#include "lexv/error.hpp"

namespace lexv {
namespace {

void check_dims(PointRef x, PointRef y) {
  if (x.size() != y.size()) {
    fail(ErrorKind::dimension_mismatch, "kernel arguments have dimensions " +
                                            std::to_string(x.size()) + " and " +
                                            std::to_string(y.size()));
  }
  if (x.size() == 0) fail(ErrorKind::dimension_mismatch, "kernel arguments must have dimension >= 1");
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    fail(ErrorKind::invalid_argument,
         std::string("kernel parameter ") + name + " must be positive and finite, got " +
             std::to_string(value));
  }
}

// Base of the rational-quadratic power, 1 + r^2 / (2 alpha l^2).
double rq_base(const KernelSpec& spec, double r2) {
  return 1.0 + r2 / (2.0 * spec.rq_alpha() * spec.rq_length() * spec.rq_length());
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::rbf: return "rbf";
    case KernelKind::linear: return "linear";
    case KernelKind::rational_quadratic: return "rational-quadratic";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(std::string_view text) {
  if (text == "rbf") return KernelKind::rbf;
  if (text == "linear") return KernelKind::linear;
  if (text == "rational-quadratic" || text == "rq") return KernelKind::rational_quadratic;
  fail(ErrorKind::parse, "unknown kernel kind '" + std::string(text) + "'");
}

KernelSpec::KernelSpec(KernelKind kind, double w, double alpha, double length)
    : kind_(kind), w_(w), alpha_(alpha), length_(length) {
  switch (kind_) {
    case KernelKind::rbf:
      require_positive(w_, "w");
      break;
    case KernelKind::rational_quadratic:
      require_positive(alpha_, "alpha");
      require_positive(length_, "length");
      break;
    case KernelKind::linear:
      break;
  }
}

double kernel_eval(const KernelSpec& spec, PointRef x, PointRef y) {
  check_dims(x, y);
  switch (spec.kind()) {
    case KernelKind::rbf:
      return std::exp(-spec.width() * (x - y).squaredNorm());
    case KernelKind::linear:
      return x.dot(y);
    case KernelKind::rational_quadratic:
      return std::pow(rq_base(spec, (x - y).squaredNorm()), -spec.rq_alpha());
  }
  return 0.0;
}

Vector kernel_grad_x(const KernelSpec& spec, PointRef x, PointRef y) {
  check_dims(x, y);
  switch (spec.kind()) {
    case KernelKind::rbf: {
      const double k = std::exp(-spec.width() * (x - y).squaredNorm());
      return (-2.0 * spec.width() * k) * (x - y);
    }
    case KernelKind::linear:
      return y;
    case KernelKind::rational_quadratic: {
      const double base = rq_base(spec, (x - y).squaredNorm());
      const double l2 = spec.rq_length() * spec.rq_length();
      return (-std::pow(base, -spec.rq_alpha() - 1.0) / l2) * (x - y);
    }
  }
  return Vector::Zero(x.size());
}

Vector kernel_diag_grad(const KernelSpec& spec, PointRef x) {
  if (spec.kind() == KernelKind::linear) return 2.0 * x;
  return Vector::Zero(x.size());
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, MatrixRef points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    gram(j, j) = kernel_eval(spec, points.row(j).transpose(), points.row(j).transpose());
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double k = kernel_eval(spec, points.row(i).transpose(), points.row(j).transpose());
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  return gram;
}

Vector cross_kernel(const KernelSpec& spec, MatrixRef points, PointRef x) {
  if (points.cols() != x.size()) {
    fail(ErrorKind::dimension_mismatch, "query has dimension " + std::to_string(x.size()) +
                                            ", training points have " +
                                            std::to_string(points.cols()));
  }
  Vector out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out(i) = kernel_eval(spec, x, points.row(i).transpose());
  }
  return out;
}

Eigen::MatrixXd cross_kernel_grad(const KernelSpec& spec, MatrixRef points, PointRef x) {
  if (points.cols() != x.size()) {
    fail(ErrorKind::dimension_mismatch, "query has dimension " + std::to_string(x.size()) +
                                            ", training points have " +
                                            std::to_string(points.cols()));
  }
  Eigen::MatrixXd out(points.rows(), points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out.row(i) = kernel_grad_x(spec, x, points.row(i).transpose()).transpose();
  }
  return out;
}

}  // namespace lexv
