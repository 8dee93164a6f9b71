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

#include <span>
#include <vector>

#include "lexv/kernels.hpp"
#include "lexv/types.hpp"

namespace lexv {

struct EpOptions {
  double tol = 1e-6;     // on site natural parameters, per sweep
  int max_sweeps = 100;
  double damping = 0.5;  // weight kept from the previous site value, in [0, 1)
};

/// Binary GP classifier with probit likelihood, approximated by EP.
///
/// The posterior latent function is f(x) = sum_i alpha_i k(x, x_i) with
/// variance k(x,x) - k_*^T (K + Sigma)^-1 k_*, where Sigma = diag(site_variance)
/// and K carries a jitter of 1e-8 * trace(K) / n on its diagonal.
///
/// Constructing a model from stored parameters refactorizes K + Sigma and
/// verifies the factor reconstructs it.
class GpcModel {
 public:
  GpcModel(KernelSpec kernel, Matrix train_x, std::vector<int> train_y, Vector site_variance,
           Vector alpha, int ep_sweeps = 0, bool converged = true);

  [[nodiscard]] const KernelSpec& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const Matrix& train_x() const noexcept { return train_x_; }
  [[nodiscard]] const std::vector<int>& train_y() const noexcept { return train_y_; }
  [[nodiscard]] const Vector& site_variance() const noexcept { return site_variance_; }
  [[nodiscard]] const Vector& alpha() const noexcept { return alpha_; }
  [[nodiscard]] const Eigen::LLT<Eigen::MatrixXd>& factor() const noexcept { return factor_; }
  [[nodiscard]] double jitter() const noexcept { return jitter_; }
  [[nodiscard]] int ep_sweeps() const noexcept { return ep_sweeps_; }
  [[nodiscard]] bool converged() const noexcept { return converged_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return train_x_.cols(); }
  [[nodiscard]] Eigen::Index size() const noexcept { return train_x_.rows(); }

  /// K + Sigma as used by the factorization (jitter included).
  [[nodiscard]] Eigen::MatrixXd system_matrix() const;

  /// |L L^T - (K + Sigma)|_F / |K + Sigma|_F.
  [[nodiscard]] double reconstruction_error() const;

 private:
  KernelSpec kernel_;
  Matrix train_x_;
  std::vector<int> train_y_;
  Vector site_variance_;
  Vector alpha_;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  int ep_sweeps_ = 0;
  bool converged_ = true;
};

/// Jitter added to the Gram diagonal: 1e-8 * trace(K) / n.
double gram_jitter(const Eigen::MatrixXd& gram);

/// Labels must be in {-1, +1} with both present.
GpcModel ep_fit(MatrixRef train_x, std::span<const int> train_y, const KernelSpec& kernel,
                const EpOptions& options = {});

struct LatentPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

struct LatentGradient {
  Vector mean;
  Vector variance;
};

LatentPrediction predict_latent(const GpcModel& model, PointRef x0);
LatentGradient grad_latent(const GpcModel& model, PointRef x0);

/// p(y=+1|x0) = erfc(-mean / (sqrt(2) sqrt(1 + var))) / 2.
double predict_proba(const GpcModel& model, PointRef x0);
double probit_probability(double mean, double variance);

/// Gradient of predict_proba at x0 in closed form. Label is +1 when p >= 1/2.
ExplanationVector explain_gpc(const GpcModel& model, PointRef x0);

/// Labels of the training points, mapped to {-1, +1}: 0 and -1 become -1,
/// 1 and +1 stay +1. Any other value is rejected.
std::vector<int> to_signed_labels(std::span<const int> labels);

}  // namespace lexv
