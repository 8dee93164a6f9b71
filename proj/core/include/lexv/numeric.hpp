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

#include <functional>
#include <vector>

#include "lexv/types.hpp"

namespace lexv {

double normal_pdf(double z);
double normal_cdf(double z);

/// phi(z) / Phi(z), accurate for strongly negative z where both underflow.
double inverse_mills_ratio(double z);

/// Central-difference Hessian of f at x with step h.
Eigen::MatrixXd fd_hessian(const std::function<double(const Vector&)>& f, const Vector& x,
                           double h);

struct PrincipalDirection {
  Vector direction;      // unit length, first nonzero component positive
  double eigenvalue = 0; // algebraically largest
  Vector eigenvalues;    // ascending
};

/// Eigenvector of the largest eigenvalue of a symmetric matrix.
PrincipalDirection top_eigen_direction(const Eigen::MatrixXd& symmetric);

double median_pairwise_distance(MatrixRef points);

std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace lexv
