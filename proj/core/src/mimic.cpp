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

#include "lexv/mimic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "lexv/error.hpp"
#include "lexv/numeric.hpp"

namespace lexv {
namespace {

constexpr double kHessianZero = 1e-6;  // |H|_F * sigma^2 below this carries no direction

void check_query(const ParzenMimic& mimic, PointRef x) {
  if (x.size() != mimic.dim()) {
    fail(ErrorKind::dimension_mismatch, "query has dimension " + std::to_string(x.size()) +
                                            ", mimic references have " +
                                            std::to_string(mimic.dim()));
  }
}

struct ClassSums {
  double in_class = 0.0;
  double total = 0.0;
};

ClassSums class_sums(const ParzenMimic& mimic, const Vector& window, int c) {
  ClassSums sums;
  sums.total = window.sum();
  for (std::size_t i : mimic.class_indices(c)) sums.in_class += window(static_cast<Eigen::Index>(i));
  return sums;
}

double class_prior(const ParzenMimic& mimic, int c) {
  return static_cast<double>(mimic.class_indices(c).size()) / static_cast<double>(mimic.size());
}

int majority_label(std::span<const int> classes, std::span<const std::size_t> counts) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < classes.size(); ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  return classes[best];
}

void check_labels(MatrixRef points, std::span<const int> labels, const char* what) {
  if (static_cast<Eigen::Index>(labels.size()) != points.rows()) {
    fail(ErrorKind::dimension_mismatch, std::string(what) + ": points and labels disagree in length");
  }
}

std::vector<double> positive_candidates(std::span<const double> candidates) {
  std::vector<double> out;
  for (double s : candidates) {
    if (s > 0.0 && std::isfinite(s)) out.push_back(s);
  }
  if (out.empty()) fail(ErrorKind::invalid_argument, "no positive width candidate");
  return out;
}

WidthSelection pick_best(std::vector<double> candidates, std::vector<std::size_t> counts) {
  WidthSelection out;
  std::size_t best = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    if (counts[k] < counts[best] || (counts[k] == counts[best] && candidates[k] < candidates[best])) {
      best = k;
    }
  }
  out.sigma = candidates[best];
  out.candidates = std::move(candidates);
  out.disagreements = std::move(counts);
  return out;
}

}  // namespace

double parzen_window(double squared_distance, double sigma) {
  return std::exp(-0.5 * squared_distance / (sigma * sigma)) /
         std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
}

ParzenMimic::ParzenMimic(Matrix ref_x, std::vector<int> ref_labels, double sigma)
    : ref_x_(std::move(ref_x)), ref_labels_(std::move(ref_labels)), sigma_(sigma) {
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) {
    fail(ErrorKind::invalid_argument, "mimic width sigma must be positive, got " + std::to_string(sigma_));
  }
  if (ref_x_.rows() == 0 || ref_x_.cols() == 0) fail(ErrorKind::invalid_argument, "mimic needs reference points");
  check_labels(ref_x_, ref_labels_, "mimic");
  const std::set<int> distinct(ref_labels_.begin(), ref_labels_.end());
  classes_.assign(distinct.begin(), distinct.end());
  index_sets_.resize(classes_.size());
  for (std::size_t i = 0; i < ref_labels_.size(); ++i) {
    const auto pos = std::lower_bound(classes_.begin(), classes_.end(), ref_labels_[i]) - classes_.begin();
    index_sets_[static_cast<std::size_t>(pos)].push_back(i);
  }
}

std::span<const std::size_t> ParzenMimic::class_indices(int c) const {
  const auto it = std::lower_bound(classes_.begin(), classes_.end(), c);
  if (it == classes_.end() || *it != c) return {};
  return index_sets_[static_cast<std::size_t>(it - classes_.begin())];
}

Vector ParzenMimic::window_values(PointRef x) const {
  Vector out(ref_x_.rows());
  for (Eigen::Index i = 0; i < ref_x_.rows(); ++i) {
    out(i) = parzen_window((ref_x_.row(i).transpose() - x).squaredNorm(), sigma_);
  }
  return out;
}

double parzen_joint(const ParzenMimic& mimic, PointRef x, int c) {
  check_query(mimic, x);
  const Vector window = mimic.window_values(x);
  return class_sums(mimic, window, c).in_class / static_cast<double>(mimic.size());
}

ClassProbability parzen_posterior(const ParzenMimic& mimic, PointRef x, int c) {
  check_query(mimic, x);
  const ClassSums sums = class_sums(mimic, mimic.window_values(x), c);
  if (!(sums.total > 0.0)) return {class_prior(mimic, c), true};
  return {sums.in_class / sums.total, false};
}

ClassProbability parzen_complement(const ParzenMimic& mimic, PointRef x, int c) {
  check_query(mimic, x);
  const ClassSums sums = class_sums(mimic, mimic.window_values(x), c);
  if (!(sums.total > 0.0)) return {1.0 - class_prior(mimic, c), true};
  return {(sums.total - sums.in_class) / sums.total, false};
}

Posterior parzen_posterior_all(const ParzenMimic& mimic, PointRef x) {
  check_query(mimic, x);
  const Vector window = mimic.window_values(x);
  Posterior out;
  out.classes = mimic.classes();
  out.probability.resize(static_cast<Eigen::Index>(out.classes.size()));
  const double total = window.sum();
  out.far_field = !(total > 0.0);
  for (std::size_t k = 0; k < out.classes.size(); ++k) {
    const int c = out.classes[k];
    out.probability(static_cast<Eigen::Index>(k)) =
        out.far_field ? class_prior(mimic, c) : class_sums(mimic, window, c).in_class / total;
  }
  return out;
}

MimicPrediction mimic_predict(const ParzenMimic& mimic, PointRef x) {
  const Posterior post = parzen_posterior_all(mimic, x);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < post.probability.size(); ++k) {
    if (post.probability(k) > post.probability(best)) best = k;
  }
  return {post.classes[static_cast<std::size_t>(best)], post.far_field};
}

ExplanationVector explain_estimated(const ParzenMimic& mimic, PointRef z, int g_label) {
  check_query(mimic, z);
  const Eigen::Index d = mimic.dim();
  const Vector window = mimic.window_values(z);

  // in: i in I_g(z); out: the rest. Weighted sums of k and of k * (z - x_i).
  double in_sum = 0.0;
  double out_sum = 0.0;
  Vector in_moment = Vector::Zero(d);
  Vector out_moment = Vector::Zero(d);
  const auto& labels = mimic.ref_labels();
  for (Eigen::Index i = 0; i < window.size(); ++i) {
    const double k = window(i);
    if (k == 0.0) continue;
    if (labels[static_cast<std::size_t>(i)] == g_label) {
      in_sum += k;
      in_moment.noalias() += k * (z - mimic.ref_x().row(i).transpose());
    } else {
      out_sum += k;
      out_moment.noalias() += k * (z - mimic.ref_x().row(i).transpose());
    }
  }

  ExplanationVector out;
  out.query = z;
  out.predicted_label = g_label;
  out.source = ExplanationSource::parzen_mimic;
  const double total = in_sum + out_sum;
  if (!(total > 0.0)) {
    out.gradient = Vector::Zero(d);
    out.predicted_probability = class_prior(mimic, g_label);
    out.far_field = true;
    return out;
  }
  // (A b - a B) / (sigma^2 S^2), with the S^2 split to avoid underflow.
  const double sigma2 = mimic.sigma() * mimic.sigma();
  out.gradient = ((out_sum / total) * in_moment - (in_sum / total) * out_moment) / (sigma2 * total);
  out.predicted_probability = in_sum / total;
  return out;
}

HessianDirection hessian_direction(const ParzenMimic& mimic, PointRef z, int g_label) {
  check_query(mimic, z);
  const double h = 1e-4 * mimic.sigma();
  const auto complement = [&](const Vector& x) { return parzen_complement(mimic, x, g_label).value; };
  HessianDirection out;
  out.hessian = fd_hessian(complement, Vector(z), h);
  if (out.hessian.norm() * mimic.sigma() * mimic.sigma() < kHessianZero) {
    fail(ErrorKind::numerical, "no informative direction: Hessian is numerically zero");
  }
  const PrincipalDirection top = top_eigen_direction(out.hessian);
  out.direction = top.direction;
  out.eigenvalue = top.eigenvalue;
  out.eigenvalues = top.eigenvalues;
  return out;
}

ExplanationVector explain_estimated_with_fallback(const ParzenMimic& mimic, PointRef z,
                                                  int g_label, double threshold) {
  ExplanationVector out = explain_estimated(mimic, z, g_label);
  if (out.far_field || out.gradient.norm() >= threshold) return out;
  try {
    out.gradient = hessian_direction(mimic, z, g_label).direction;
    out.source = ExplanationSource::hessian_fallback;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::numerical) throw;
  }
  return out;
}

Matrix smooth_gradients(MatrixRef queries, MatrixRef gradients, double halfwidth) {
  if (queries.rows() != gradients.rows()) {
    fail(ErrorKind::dimension_mismatch, "queries and gradients disagree in count");
  }
  if (!(halfwidth > 0.0)) fail(ErrorKind::invalid_argument, "smoothing half-width must be positive");
  const Eigen::Index n = queries.rows();
  Matrix out(n, gradients.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(gradients.cols());
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if ((queries.row(j) - queries.row(i)).cwiseAbs().maxCoeff() <= halfwidth) {
        acc += gradients.row(j);
        ++count;
      }
    }
    out.row(i) = acc / static_cast<double>(count);
  }
  return out;
}

WidthSelection select_width(MatrixRef refs, std::span<const int> ref_labels, MatrixRef probes,
                            std::span<const int> probe_labels, std::span<const double> candidates) {
  check_labels(refs, ref_labels, "select_width references");
  check_labels(probes, probe_labels, "select_width probes");
  if (probes.rows() == 0) fail(ErrorKind::invalid_argument, "select_width needs probe points");
  std::vector<double> sigmas = positive_candidates(candidates);
  std::vector<std::size_t> counts(sigmas.size(), 0);
  const Matrix ref_copy = refs;
  const std::vector<int> labels(ref_labels.begin(), ref_labels.end());
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const ParzenMimic mimic(ref_copy, labels, sigmas[k]);
    for (Eigen::Index j = 0; j < probes.rows(); ++j) {
      if (mimic_predict(mimic, probes.row(j).transpose()).label != probe_labels[static_cast<std::size_t>(j)]) {
        ++counts[k];
      }
    }
  }
  return pick_best(std::move(sigmas), std::move(counts));
}

WidthSelection select_width_loo(MatrixRef refs, std::span<const int> ref_labels,
                                std::span<const double> candidates) {
  check_labels(refs, ref_labels, "select_width_loo");
  const Eigen::Index m = refs.rows();
  if (m < 2) fail(ErrorKind::invalid_argument, "leave-one-out width selection needs >= 2 references");
  std::vector<double> sigmas = positive_candidates(candidates);
  std::vector<std::size_t> counts(sigmas.size(), 0);

  const std::set<int> distinct(ref_labels.begin(), ref_labels.end());
  const std::vector<int> classes(distinct.begin(), distinct.end());
  std::vector<std::size_t> slot(static_cast<std::size_t>(m));
  std::vector<std::size_t> class_counts(classes.size(), 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(classes.begin(), classes.end(), ref_labels[static_cast<std::size_t>(i)]) -
        classes.begin());
    slot[static_cast<std::size_t>(i)] = pos;
    ++class_counts[pos];
  }

  Eigen::MatrixXd sq(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double v = (refs.row(i) - refs.row(j)).squaredNorm();
      sq(i, j) = v;
      sq(j, i) = v;
    }
  }

  std::vector<double> log_loss(sigmas.size(), 0.0);
  std::vector<double> sums(classes.size());
  std::vector<double> shifted(classes.size());
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    for (Eigen::Index j = 0; j < m; ++j) {
      std::fill(sums.begin(), sums.end(), 0.0);
      std::fill(shifted.begin(), shifted.end(), 0.0);
      double nearest = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (i != j) nearest = std::min(nearest, sq(i, j));
      }
      const double inv = 1.0 / (2.0 * sigmas[k] * sigmas[k]);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (i == j) continue;
        sums[slot[static_cast<std::size_t>(i)]] += parzen_window(sq(i, j), sigmas[k]);
        shifted[slot[static_cast<std::size_t>(i)]] += std::exp(-(sq(i, j) - nearest) * inv);
      }
      double total = 0.0;
      for (double s : sums) total += s;
      int predicted;
      if (total > 0.0) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < sums.size(); ++c) {
          if (sums[c] > sums[best]) best = c;
        }
        predicted = classes[best];
      } else {
        std::vector<std::size_t> remaining = class_counts;
        --remaining[slot[static_cast<std::size_t>(j)]];
        predicted = majority_label(classes, remaining);
      }
      if (predicted != ref_labels[static_cast<std::size_t>(j)]) ++counts[k];
      // The log loss uses the rescaled sums, so it stays finite where the raw sums underflow.
      double shifted_total = 0.0;
      for (double s : shifted) shifted_total += s;
      const double p_own = shifted[slot[static_cast<std::size_t>(j)]] / shifted_total;
      log_loss[k] -= std::log(std::max(p_own, std::numeric_limits<double>::min()));
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < sigmas.size(); ++k) {
    if (counts[k] < counts[best] || (counts[k] == counts[best] && log_loss[k] < log_loss[best])) best = k;
  }
  WidthSelection out{sigmas[best], std::move(sigmas), std::move(counts), std::move(log_loss)};
  return out;
}

std::vector<double> default_sigma_grid(MatrixRef refs, int count) {
  const double scale = median_pairwise_distance(refs);
  if (!(scale > 0.0)) fail(ErrorKind::invalid_argument, "reference points are all identical");
  return log_spaced(1e-2 * scale, 1e2 * scale, count);
}

}  // namespace lexv
