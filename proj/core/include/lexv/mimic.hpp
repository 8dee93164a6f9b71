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

#include <cstddef>
#include <span>
#include <vector>

#include "lexv/types.hpp"

namespace lexv {

/// Parzen-window stand-in for an arbitrary classifier g.
///
/// Reference points x_i carry the labels g assigned to them. With the
/// Gaussian window k(z) = exp(-z.z / (2 sigma^2)) / sqrt(2 pi sigma^2) the mimic
/// defines joint densities (1/m) sum_{i in I_c} k(x - x_i) and the posterior
/// sum_{i in I_c} k(x - x_i) / sum_i k(x - x_i).
///
/// The normalizing constant is the one-dimensional one regardless of d, so
/// the joint is not a normalized d-dimensional density. It cancels in every
/// posterior and gradient.
///
/// Sums are evaluated without rescaling. Queries whose kernel values all
/// underflow are "far-field": posteriors fall back to class priors and
/// gradients to zero, with a flag set.
class ParzenMimic {
 public:
  ParzenMimic(Matrix ref_x, std::vector<int> ref_labels, double sigma);

  [[nodiscard]] const Matrix& ref_x() const noexcept { return ref_x_; }
  [[nodiscard]] const std::vector<int>& ref_labels() const noexcept { return ref_labels_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return ref_x_.cols(); }
  [[nodiscard]] std::size_t size() const noexcept { return ref_labels_.size(); }

  /// Distinct labels in ascending order.
  [[nodiscard]] const std::vector<int>& classes() const noexcept { return classes_; }

  /// I_c; empty for a class that has no reference points.
  [[nodiscard]] std::span<const std::size_t> class_indices(int c) const;

  /// k(x - x_i) for every reference point.
  [[nodiscard]] Vector window_values(PointRef x) const;

 private:
  Matrix ref_x_;
  std::vector<int> ref_labels_;
  double sigma_;
  std::vector<int> classes_;
  std::vector<std::vector<std::size_t>> index_sets_;  // parallel to classes_
};

/// exp(-z.z / (2 sigma^2)) / sqrt(2 pi sigma^2).
double parzen_window(double squared_distance, double sigma);

struct ClassProbability {
  double value = 0.0;
  bool far_field = false;
};

struct Posterior {
  std::vector<int> classes;
  Vector probability;  // parallel to classes
  bool far_field = false;
};

struct MimicPrediction {
  int label = 0;
  bool far_field = false;
};

double parzen_joint(const ParzenMimic& mimic, PointRef x, int c);
ClassProbability parzen_posterior(const ParzenMimic& mimic, PointRef x, int c);
Posterior parzen_posterior_all(const ParzenMimic& mimic, PointRef x);

/// p(y != c | x).
ClassProbability parzen_complement(const ParzenMimic& mimic, PointRef x, int c);

/// Class of maximal posterior, ties toward the lower class id. Far-field
/// queries get the majority class.
MimicPrediction mimic_predict(const ParzenMimic& mimic, PointRef x);

/// Gradient of p(y != g_label | x) at x = z. `g_label` must come from the
/// wrapped classifier, not from the mimic.
ExplanationVector explain_estimated(const ParzenMimic& mimic, PointRef z, int g_label);

struct HessianDirection {
  Vector direction;  // unit, first nonzero component positive
  double eigenvalue = 0.0;
  Vector eigenvalues;
  Eigen::MatrixXd hessian;
};

/// Top eigenvector of the central-difference Hessian of p(y != g_label | x)
/// at z, step 1e-4 * sigma. Throws when the Hessian is numerically zero.
HessianDirection hessian_direction(const ParzenMimic& mimic, PointRef z, int g_label);

/// explain_estimated, replaced by the Hessian direction when the gradient
/// norm falls below `threshold`.
ExplanationVector explain_estimated_with_fallback(const ParzenMimic& mimic, PointRef z,
                                                  int g_label, double threshold = 1e-6);

/// Replaces each gradient by the mean of all gradients whose query lies in
/// the axis-aligned cube of half-width `halfwidth` around it.
Matrix smooth_gradients(MatrixRef queries, MatrixRef gradients, double halfwidth);

struct WidthSelection {
  double sigma = 0.0;
  std::vector<double> candidates;            // positive candidates that were scored
  std::vector<std::size_t> disagreements;    // parallel to candidates
  std::vector<double> log_loss;              // leave-one-out only, parallel to candidates
};

/// argmin over sigma of #{j : g(z_j) != mimic_sigma(z_j)}, ties toward the
/// smaller sigma. Non-positive candidates are skipped.
WidthSelection select_width(MatrixRef refs, std::span<const int> ref_labels, MatrixRef probes,
                            std::span<const int> probe_labels, std::span<const double> candidates);

/// Same criterion with the references doubling as probes; each probe is
/// predicted by the mimic built from all other references. Ties in the
/// disagreement count go to the lower leave-one-out negative log posterior of
/// the probe's own label, then to the smaller sigma.
WidthSelection select_width_loo(MatrixRef refs, std::span<const int> ref_labels,
                                std::span<const double> candidates);

/// 25 log-spaced widths over [1e-2, 1e2] times the median pairwise distance.
std::vector<double> default_sigma_grid(MatrixRef refs, int count = 25);

}  // namespace lexv
