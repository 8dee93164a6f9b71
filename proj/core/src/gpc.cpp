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

#include "lexv/gpc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lexv/error.hpp"
#include "lexv/numeric.hpp"

namespace lexv {
namespace {

// Site precisions are kept strictly positive so site variances stay finite.
constexpr double kMinSitePrecision = 1e-10;
constexpr double kMaxReconstructionError = 1e-8;
constexpr double kVarianceRoundoff = 1e-10;

Eigen::MatrixXd jittered_gram(const KernelSpec& kernel, MatrixRef x, double* jitter_out) {
  Eigen::MatrixXd gram = gram_matrix(kernel, x);
  const double jitter = gram_jitter(gram);
  gram.diagonal().array() += jitter;
  if (jitter_out != nullptr) *jitter_out = jitter;
  return gram;
}

struct Posterior {
  Eigen::MatrixXd cov;
  Vector mean;
};

// Sigma = K - K S^1/2 B^-1 S^1/2 K with B = I + S^1/2 K S^1/2.
Posterior recompute_posterior(const Eigen::MatrixXd& gram, const Vector& tau, const Vector& nu) {
  const Vector sqrt_tau = tau.array().sqrt();
  Eigen::MatrixXd b = sqrt_tau.asDiagonal() * gram * sqrt_tau.asDiagonal();
  b.diagonal().array() += 1.0;
  const Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) fail(ErrorKind::numerical, "EP: B matrix is not positive definite");
  Eigen::MatrixXd v = sqrt_tau.asDiagonal() * gram;
  llt.matrixL().solveInPlace(v);
  Posterior post;
  post.cov = gram - v.transpose() * v;
  post.mean = post.cov * nu;
  return post;
}

}  // namespace

double gram_jitter(const Eigen::MatrixXd& gram) {
  if (gram.rows() == 0) return 0.0;
  return 1e-8 * gram.trace() / static_cast<double>(gram.rows());
}

GpcModel::GpcModel(KernelSpec kernel, Matrix train_x, std::vector<int> train_y,
                   Vector site_variance, Vector alpha, int ep_sweeps, bool converged)
    : kernel_(kernel),
      train_x_(std::move(train_x)),
      train_y_(std::move(train_y)),
      site_variance_(std::move(site_variance)),
      alpha_(std::move(alpha)),
      ep_sweeps_(ep_sweeps),
      converged_(converged) {
  const Eigen::Index n = train_x_.rows();
  if (n < 1 || train_x_.cols() < 1) fail(ErrorKind::invalid_argument, "GPC model needs training points");
  if (static_cast<Eigen::Index>(train_y_.size()) != n || site_variance_.size() != n ||
      alpha_.size() != n) {
    fail(ErrorKind::dimension_mismatch, "GPC model arrays disagree with the number of training points");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(site_variance_(i) >= 0.0) || !std::isfinite(site_variance_(i))) {
      fail(ErrorKind::invalid_argument, "site variance " + std::to_string(i) + " must be finite and >= 0");
    }
    if (!std::isfinite(alpha_(i))) fail(ErrorKind::invalid_argument, "alpha must be finite");
  }
  Eigen::MatrixXd system = jittered_gram(kernel_, train_x_, &jitter_);
  system.diagonal() += site_variance_;
  factor_.compute(system);
  if (factor_.info() != Eigen::Success) {
    fail(ErrorKind::numerical, "K + Sigma is not positive definite");
  }
  const double err = reconstruction_error();
  if (!(err < kMaxReconstructionError)) {
    fail(ErrorKind::numerical, "factorization of K + Sigma is unhealthy (relative error " +
                                   std::to_string(err) + ")");
  }
}

Eigen::MatrixXd GpcModel::system_matrix() const {
  Eigen::MatrixXd system = gram_matrix(kernel_, train_x_);
  system.diagonal().array() += jitter_;
  system.diagonal() += site_variance_;
  return system;
}

double GpcModel::reconstruction_error() const {
  const Eigen::MatrixXd system = system_matrix();
  const Eigen::MatrixXd l = factor_.matrixL();
  return (l * l.transpose() - system).norm() / system.norm();
}

std::vector<int> to_signed_labels(std::span<const int> labels) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (int y : labels) {
    if (y == 1) {
      out.push_back(1);
    } else if (y == 0 || y == -1) {
      out.push_back(-1);
    } else {
      fail(ErrorKind::invalid_argument,
           "binary labels must be in {-1,+1} or {0,1}, got " + std::to_string(y));
    }
  }
  return out;
}

GpcModel ep_fit(MatrixRef train_x, std::span<const int> train_y, const KernelSpec& kernel,
                const EpOptions& options) {
  const Eigen::Index n = train_x.rows();
  if (n < 2) fail(ErrorKind::invalid_argument, "EP needs at least 2 training points");
  if (static_cast<Eigen::Index>(train_y.size()) != n) {
    fail(ErrorKind::dimension_mismatch, "train_x and train_y disagree in length");
  }
  bool has_pos = false;
  bool has_neg = false;
  for (int y : train_y) {
    if (y == 1) {
      has_pos = true;
    } else if (y == -1) {
      has_neg = true;
    } else {
      fail(ErrorKind::invalid_argument, "GPC labels must be -1 or +1, got " + std::to_string(y));
    }
  }
  if (!has_pos || !has_neg) fail(ErrorKind::invalid_argument, "GPC needs both classes present");
  if (!(options.damping >= 0.0 && options.damping < 1.0)) {
    fail(ErrorKind::invalid_argument, "EP damping must lie in [0, 1)");
  }
  if (options.max_sweeps < 1 || !(options.tol > 0.0)) {
    fail(ErrorKind::invalid_argument, "EP needs max_sweeps >= 1 and tol > 0");
  }

  const Eigen::MatrixXd gram = jittered_gram(kernel, train_x, nullptr);
  if (Eigen::LLT<Eigen::MatrixXd>(gram).info() != Eigen::Success) {
    fail(ErrorKind::numerical, "Gram matrix is not positive definite after jitter");
  }

  Vector tau = Vector::Zero(n);
  Vector nu = Vector::Zero(n);
  Eigen::MatrixXd cov = gram;
  Vector mean = Vector::Zero(n);
  const double keep = options.damping;

  int sweeps = 0;
  bool converged = false;
  while (sweeps < options.max_sweeps) {
    ++sweeps;
    double max_delta = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double y = train_y[static_cast<std::size_t>(i)];
      const double tau_cav = 1.0 / cov(i, i) - tau(i);
      const double nu_cav = mean(i) / cov(i, i) - nu(i);
      if (!(tau_cav > 0.0)) fail(ErrorKind::numerical, "EP cavity precision became non-positive");
      const double var_cav = 1.0 / tau_cav;
      const double mean_cav = nu_cav * var_cav;

      // Moments of the tilted distribution Phi(y f) N(f | mean_cav, var_cav).
      const double denom = std::sqrt(1.0 + var_cav);
      const double z = y * mean_cav / denom;
      const double ratio = inverse_mills_ratio(z);
      const double mean_hat = mean_cav + y * var_cav * ratio / denom;
      const double var_hat = var_cav - var_cav * var_cav * ratio / (1.0 + var_cav) * (z + ratio);

      double tau_new = std::max(1.0 / var_hat - tau_cav, kMinSitePrecision);
      double nu_new = mean_hat / var_hat - nu_cav;
      tau_new = (1.0 - keep) * tau_new + keep * tau(i);
      nu_new = (1.0 - keep) * nu_new + keep * nu(i);

      const double dtau = tau_new - tau(i);
      const double dnu = nu_new - nu(i);
      max_delta = std::max({max_delta, std::abs(dtau), std::abs(dnu)});
      tau(i) = tau_new;
      nu(i) = nu_new;

      const Vector s = cov.col(i);
      cov.noalias() -= (dtau / (1.0 + dtau * s(i))) * s * s.transpose();
      mean = cov * nu;
    }
    Posterior post = recompute_posterior(gram, tau, nu);
    cov = std::move(post.cov);
    mean = std::move(post.mean);
    if (max_delta < options.tol) {
      converged = true;
      break;
    }
  }

  // alpha = (K + S^-1)^-1 S^-1 nu = nu - S^1/2 B^-1 S^1/2 K nu.
  const Vector sqrt_tau = tau.array().sqrt();
  Eigen::MatrixXd b = sqrt_tau.asDiagonal() * gram * sqrt_tau.asDiagonal();
  b.diagonal().array() += 1.0;
  const Eigen::LLT<Eigen::MatrixXd> llt(b);
  const Vector rhs = sqrt_tau.cwiseProduct(gram * nu);
  const Vector alpha = nu - sqrt_tau.cwiseProduct(llt.solve(rhs));
  Vector site_variance = tau.cwiseInverse();

  return GpcModel(kernel, Matrix(train_x),
                  std::vector<int>(train_y.begin(), train_y.end()), std::move(site_variance), alpha,
                  sweeps, converged);
}

LatentPrediction predict_latent(const GpcModel& model, PointRef x0) {
  const Vector ks = cross_kernel(model.kernel(), model.train_x(), x0);
  LatentPrediction out;
  out.mean = ks.dot(model.alpha());
  const Vector v = model.factor().matrixL().solve(ks);
  const double prior = kernel_eval(model.kernel(), x0, x0);
  out.variance = prior - v.squaredNorm();
  if (out.variance < 0.0) {
    if (out.variance < -kVarianceRoundoff * std::max(1.0, prior)) {
      fail(ErrorKind::numerical,
           "predicted latent variance is negative (" + std::to_string(out.variance) + ")");
    }
    out.variance = 0.0;
  }
  return out;
}

LatentGradient grad_latent(const GpcModel& model, PointRef x0) {
  const Vector ks = cross_kernel(model.kernel(), model.train_x(), x0);
  const Eigen::MatrixXd dks = cross_kernel_grad(model.kernel(), model.train_x(), x0);
  const Vector weights = model.factor().solve(ks);
  LatentGradient out;
  out.mean = dks.transpose() * model.alpha();
  out.variance = kernel_diag_grad(model.kernel(), x0) - 2.0 * (dks.transpose() * weights);
  return out;
}

double probit_probability(double mean, double variance) {
  return 0.5 * std::erfc(-mean / (std::numbers::sqrt2 * std::sqrt(1.0 + variance)));
}

double predict_proba(const GpcModel& model, PointRef x0) {
  const LatentPrediction latent = predict_latent(model, x0);
  return probit_probability(latent.mean, latent.variance);
}

ExplanationVector explain_gpc(const GpcModel& model, PointRef x0) {
  const LatentPrediction latent = predict_latent(model, x0);
  const LatentGradient grad = grad_latent(model, x0);
  const double s = 1.0 + latent.variance;
  const double prefactor =
      std::exp(-latent.mean * latent.mean / (2.0 * s)) / std::sqrt(2.0 * std::numbers::pi);

  ExplanationVector out;
  out.query = x0;
  out.gradient = prefactor * (grad.mean / std::sqrt(s) -
                              (0.5 * latent.mean * std::pow(s, -1.5)) * grad.variance);
  out.predicted_probability = probit_probability(latent.mean, latent.variance);
  out.predicted_label = out.predicted_probability >= 0.5 ? 1 : -1;
  out.source = ExplanationSource::analytic_gpc;
  return out;
}

}  // namespace lexv
