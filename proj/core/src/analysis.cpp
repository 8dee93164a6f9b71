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

#include "lexv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lexv/error.hpp"

namespace lexv {

std::vector<std::size_t> FeatureRanking::order() const {
  std::vector<std::size_t> out(rank.size());
  for (std::size_t j = 0; j < rank.size(); ++j) out[static_cast<std::size_t>(rank[j] - 1)] = j;
  return out;
}

Matrix gradient_matrix(std::span<const ExplanationVector> explanations) {
  if (explanations.empty()) return Matrix();
  const Eigen::Index d = explanations.front().gradient.size();
  Matrix out(static_cast<Eigen::Index>(explanations.size()), d);
  for (std::size_t i = 0; i < explanations.size(); ++i) {
    if (explanations[i].gradient.size() != d) {
      fail(ErrorKind::dimension_mismatch, "explanation " + std::to_string(i) + " has dimension " +
                                              std::to_string(explanations[i].gradient.size()));
    }
    out.row(static_cast<Eigen::Index>(i)) = explanations[i].gradient.transpose();
  }
  return out;
}

FeatureRanking rank_features(MatrixRef gradients, std::span<const std::string> names) {
  if (gradients.rows() == 0) fail(ErrorKind::invalid_argument, "cannot rank features of no explanations");
  const auto d = static_cast<std::size_t>(gradients.cols());
  if (!names.empty() && names.size() != d) {
    fail(ErrorKind::dimension_mismatch, "got " + std::to_string(names.size()) + " names for " +
                                            std::to_string(d) + " features");
  }
  FeatureRanking out;
  for (std::size_t j = 0; j < d; ++j) {
    out.names.push_back(names.empty() ? "f" + std::to_string(j) : names[j]);
    out.mean_gradient.push_back(gradients.col(static_cast<Eigen::Index>(j)).mean());
  }
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return out.mean_gradient[a] > out.mean_gradient[b];
  });
  out.rank.assign(d, 0);
  for (std::size_t r = 0; r < d; ++r) out.rank[idx[r]] = static_cast<int>(r + 1);
  return out;
}

FeatureRanking rank_features(std::span<const ExplanationVector> explanations,
                             std::span<const std::string> names) {
  if (explanations.empty()) fail(ErrorKind::invalid_argument, "cannot rank features of no explanations");
  return rank_features(gradient_matrix(explanations), names);
}

void HistogramSpec::validate() const {
  if (bin_count < 2) fail(ErrorKind::invalid_argument, "histogram needs at least 2 bins");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    fail(ErrorKind::invalid_argument, "degenerate histogram range");
  }
  if (!(epsilon > 0.0)) fail(ErrorKind::invalid_argument, "histogram epsilon must be positive");
}

HistogramSpec default_histogram_spec(std::span<const double> pooled, std::size_t bin_count, double epsilon) {
  if (pooled.empty()) fail(ErrorKind::invalid_argument, "default histogram range needs values");
  const double n = static_cast<double>(pooled.size());
  const double mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : pooled) ss += (v - mean) * (v - mean);
  double half = 4.0 * std::sqrt(ss / n);
  if (!(half > 0.0)) half = 1.0;
  HistogramSpec spec{bin_count, mean - half, mean + half, epsilon};
  spec.validate();
  return spec;
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::vector<double> Histogram::edges() const {
  std::vector<double> out(spec.bin_count + 1);
  const double w = (spec.hi - spec.lo) / static_cast<double>(spec.bin_count);
  for (std::size_t i = 0; i <= spec.bin_count; ++i) out[i] = spec.lo + w * static_cast<double>(i);
  out.back() = spec.hi;
  return out;
}

Histogram histogram(std::span<const double> values, const HistogramSpec& spec) {
  spec.validate();
  Histogram h{spec, std::vector<std::size_t>(spec.bin_count, 0), 0};
  const double w = (spec.hi - spec.lo) / static_cast<double>(spec.bin_count);
  for (double v : values) {
    if (std::isnan(v)) fail(ErrorKind::invalid_argument, "histogram value is NaN");
    std::size_t bin = 0;
    if (v < spec.lo) {
      ++h.clipped;
    } else if (v > spec.hi) {
      ++h.clipped;
      bin = spec.bin_count - 1;
    } else {
      bin = std::min(static_cast<std::size_t>((v - spec.lo) / w), spec.bin_count - 1);
    }
    ++h.counts[bin];
  }
  return h;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Theta-function form of the CDF.
    const double c = pi * pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * c);
      sum += term;
      if (term < 1e-10 * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-10) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail(ErrorKind::invalid_argument, "KS test needs two nonempty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  const double d = ks_statistic(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  return KsResult{d, kolmogorov_survival(std::sqrt(na * nb / (na + nb)) * d)};
}

double sym_kld(const Histogram& a, const Histogram& b, double epsilon) {
  if (!(a.spec.bin_count == b.spec.bin_count && a.spec.lo == b.spec.lo && a.spec.hi == b.spec.hi) ||
      a.counts.size() != b.counts.size()) {
    fail(ErrorKind::invalid_argument, "KL divergence needs histograms with the same binning");
  }
  if (!(epsilon > 0.0)) fail(ErrorKind::invalid_argument, "KL smoothing epsilon must be positive");
  const double bins = static_cast<double>(a.counts.size());
  const double za = static_cast<double>(a.total()) + epsilon * bins;
  const double zb = static_cast<double>(b.total()) + epsilon * bins;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.counts.size(); ++i) {
    const double p = (static_cast<double>(a.counts[i]) + epsilon) / za;
    const double q = (static_cast<double>(b.counts[i]) + epsilon) / zb;
    // p log(p/q) + q log(q/p) combined into one term.
    sum += (p - q) * (std::log(p) - std::log(q));
  }
  return std::max(0.0, 0.5 * sum);
}

double sym_kld(const Histogram& a, const Histogram& b) { return sym_kld(a, b, a.spec.epsilon); }

GroupComparison compare_groups(MatrixRef gradients, std::size_t feature, const std::vector<bool>& in_group,
                               const HistogramSpec* spec) {
  if (feature >= static_cast<std::size_t>(gradients.cols())) {
    fail(ErrorKind::invalid_argument, "feature index " + std::to_string(feature) + " out of range");
  }
  if (in_group.size() != static_cast<std::size_t>(gradients.rows())) {
    fail(ErrorKind::dimension_mismatch, "group mask has " + std::to_string(in_group.size()) +
                                            " entries for " + std::to_string(gradients.rows()) +
                                            " explanations");
  }
  std::vector<double> in;
  std::vector<double> out;
  std::vector<double> pooled;
  for (Eigen::Index i = 0; i < gradients.rows(); ++i) {
    const double v = gradients(i, static_cast<Eigen::Index>(feature));
    (in_group[static_cast<std::size_t>(i)] ? in : out).push_back(v);
    pooled.push_back(v);
  }
  if (in.empty() || out.empty()) fail(ErrorKind::invalid_argument, "group mask leaves one group empty");
  const HistogramSpec used = spec ? *spec : default_histogram_spec(pooled);
  GroupComparison result;
  result.feature = feature;
  result.in_group = histogram(in, used);
  result.out_group = histogram(out, used);
  result.ks = ks_two_sample(in, out);
  result.kld = sym_kld(result.in_group, result.out_group, used.epsilon);
  return result;
}

GroupComparison compare_groups(std::span<const ExplanationVector> explanations, std::size_t feature,
                               const std::vector<bool>& in_group, const HistogramSpec* spec) {
  if (explanations.empty()) fail(ErrorKind::invalid_argument, "cannot compare groups of no explanations");
  return compare_groups(gradient_matrix(explanations), feature, in_group, spec);
}

double roc_auc(std::span<const double> scores, std::span<const int> labels, int positive) {
  if (scores.size() != labels.size()) fail(ErrorKind::dimension_mismatch, "scores and labels differ in length");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Mann-Whitney: average ranks over ties.
  double rank_sum = 0.0;
  double n_pos = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[idx[k]] == positive) {
        rank_sum += avg_rank;
        n_pos += 1.0;
      }
    }
    i = j;
  }
  const double n_neg = static_cast<double>(scores.size()) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) fail(ErrorKind::invalid_argument, "ROC AUC needs both classes present");
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

}  // namespace lexv
