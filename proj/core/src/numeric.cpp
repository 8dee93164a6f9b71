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

#include "lexv/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lexv/error.hpp"

namespace lexv {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double inverse_mills_ratio(double z) {
  if (z > -25.0) return normal_pdf(z) / normal_cdf(z);
  // Asymptotic series of Phi(z) / phi(z) for z -> -inf; relative error ~ 105 / z^8.
  const double z2 = 1.0 / (z * z);
  return -z / (1.0 - z2 + 3.0 * z2 * z2 - 15.0 * z2 * z2 * z2);
}

Eigen::MatrixXd fd_hessian(const std::function<double(const Vector&)>& f, const Vector& x,
                           double h) {
  const Eigen::Index d = x.size();
  Eigen::MatrixXd hess(d, d);
  const double f0 = f(x);
  Vector probe = x;
  for (Eigen::Index j = 0; j < d; ++j) {
    probe = x;
    probe(j) = x(j) + h;
    const double fp = f(probe);
    probe(j) = x(j) - h;
    const double fm = f(probe);
    hess(j, j) = (fp - 2.0 * f0 + fm) / (h * h);
    for (Eigen::Index k = j + 1; k < d; ++k) {
      probe = x;
      probe(j) += h;
      probe(k) += h;
      const double fpp = f(probe);
      probe(k) = x(k) - h;
      const double fpm = f(probe);
      probe(j) = x(j) - h;
      const double fmm = f(probe);
      probe(k) = x(k) + h;
      const double fmp = f(probe);
      const double value = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      hess(j, k) = value;
      hess(k, j) = value;
    }
  }
  return hess;
}

PrincipalDirection top_eigen_direction(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    fail(ErrorKind::dimension_mismatch, "eigen-direction needs a non-empty square matrix");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) fail(ErrorKind::numerical, "symmetric eigensolver failed");
  const Eigen::Index top = symmetric.rows() - 1;
  PrincipalDirection out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvalue = out.eigenvalues(top);
  out.direction = solver.eigenvectors().col(top).normalized();
  for (Eigen::Index i = 0; i < out.direction.size(); ++i) {
    if (std::abs(out.direction(i)) > 1e-12) {
      if (out.direction(i) < 0.0) out.direction = -out.direction;
      break;
    }
  }
  return out;
}

double median_pairwise_distance(MatrixRef points) {
  const Eigen::Index n = points.rows();
  if (n < 2) fail(ErrorKind::invalid_argument, "median pairwise distance needs at least 2 points");
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) dist.push_back((points.row(i) - points.row(j)).norm());
  }
  const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  if (dist.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(dist.begin(), mid);
  return 0.5 * (lower + upper);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    fail(ErrorKind::invalid_argument, "log_spaced needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  return out;
}

}  // namespace lexv
