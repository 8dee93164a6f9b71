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
#include <string>
#include <vector>

#include "lexv/types.hpp"

namespace lexv {

struct FeatureRanking {
  std::vector<std::string> names;
  std::vector<double> mean_gradient;
  std::vector<int> rank;  // 1 = largest mean; ties by feature index

  /// Feature indices in rank order.
  [[nodiscard]] std::vector<std::size_t> order() const;
};

FeatureRanking rank_features(std::span<const ExplanationVector> explanations,
                             std::span<const std::string> names);
/// Same, with one gradient per row.
FeatureRanking rank_features(MatrixRef gradients, std::span<const std::string> names);

struct HistogramSpec {
  std::size_t bin_count = 30;
  double lo = 0.0;
  double hi = 1.0;
  double epsilon = 1.0;  // pseudo-count added per bin before normalizing

  void validate() const;
  friend bool operator==(const HistogramSpec&, const HistogramSpec&) = default;
};

/// 30 bins over mean +- 4 population standard deviations of the pooled values.
HistogramSpec default_histogram_spec(std::span<const double> pooled, std::size_t bin_count = 30,
                                     double epsilon = 1.0);

struct Histogram {
  HistogramSpec spec;
  std::vector<std::size_t> counts;
  std::size_t clipped = 0;  // values outside [lo, hi], included in the boundary bins

  [[nodiscard]] std::size_t total() const;
  [[nodiscard]] std::vector<double> edges() const;
};

/// Bins are [lo + i*w, lo + (i+1)*w) except the last, which is closed.
Histogram histogram(std::span<const double> values, const HistogramSpec& spec);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// Two-sample Kolmogorov-Smirnov test. The p-value is the asymptotic
/// Kolmogorov tail at sqrt(n_a*n_b/(n_a+n_b)) * D.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Two-sample KS statistic alone.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// (KL(P,Q) + KL(Q,P)) / 2 after adding epsilon to every bin of both histograms.
double sym_kld(const Histogram& a, const Histogram& b, double epsilon);
double sym_kld(const Histogram& a, const Histogram& b);

struct GroupComparison {
  std::size_t feature = 0;
  Histogram in_group;
  Histogram out_group;
  KsResult ks;
  double kld = 0.0;
};

/// One feature's gradient components, split by `in_group`. With no spec the
/// default is fitted to the pooled values.
GroupComparison compare_groups(MatrixRef gradients, std::size_t feature, const std::vector<bool>& in_group,
                               const HistogramSpec* spec = nullptr);
GroupComparison compare_groups(std::span<const ExplanationVector> explanations, std::size_t feature,
                               const std::vector<bool>& in_group, const HistogramSpec* spec = nullptr);

/// Area under the ROC curve of `scores` for the positive class, with ties counted as one half.
double roc_auc(std::span<const double> scores, std::span<const int> labels, int positive = 1);

/// Gradients of a set of explanations stacked as rows.
Matrix gradient_matrix(std::span<const ExplanationVector> explanations);

}  // namespace lexv
