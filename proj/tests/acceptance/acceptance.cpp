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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lexv/analysis.hpp"
#include "lexv/data.hpp"
#include "lexv/gpc.hpp"
#include "lexv/mimic.hpp"
#include "lexv/numeric.hpp"
#include "lexv_tools/commands.hpp"
#include "lexv_tools/pipelines.hpp"
#include "support/oracles.hpp"

namespace {

using namespace lexv;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double cosine(const Vector& a, const Vector& b) {
  const double n = a.norm() * b.norm();
  return n > 0.0 ? a.dot(b) / n : 0.0;
}

/// Richardson-extrapolated central difference, fourth order in h.
Vector richardson_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  const Vector coarse = testing::fd_gradient(f, x, h);
  const Vector fine = testing::fd_gradient(f, x, h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

Outcome analytic_gradient() {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset d = gen_triangle(60, 3);
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  int checked = 0;
  int bad = 0;
  double worst_rel = 0.0;
  double worst_abs = 0.0;
  for (const KernelSpec& k : {KernelSpec::rbf(20.0), KernelSpec::rational_quadratic(1.0, 0.25), KernelSpec::linear()}) {
    const GpcModel m = ep_fit(d.features, d.labels, k);
    for (int t = 0; t < 500; ++t) {
      Vector x(2);
      x << u(rng), u(rng);
      const Vector g = explain_gpc(m, x).gradient;
      const Vector fd = richardson_gradient([&](const Vector& z) { return predict_proba(m, z); }, x, 1e-3);
      const double err = (g - fd).norm();
      if (g.norm() > 1e-8) {
        worst_rel = std::max(worst_rel, err / g.norm());
        bad += err / g.norm() >= 1e-5;
      } else {
        worst_abs = std::max(worst_abs, err);
        bad += err >= 1e-9;
      }
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 60.0,
          fmt("%d points, %d outside tolerance, max rel %.2e, max abs %.2e, %.1f s", checked, bad, worst_rel,
              worst_abs, secs)};
}

Outcome estimated_gradient() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1002);
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const int d = std::uniform_int_distribution<int>(1, 10)(rng);
    const int m = std::uniform_int_distribution<int>(2, 200)(rng);
    Matrix x = testing::random_points(rng, m, d);
    const int classes = std::uniform_int_distribution<int>(2, 3)(rng);
    std::uniform_int_distribution<int> label(0, classes - 1);
    std::vector<int> y(static_cast<std::size_t>(m));
    for (auto& v : y) v = label(rng);
    y[0] = 0;
    y[1] = 1;
    const double sigma = std::uniform_real_distribution<double>(0.5, 2.0)(rng) * std::sqrt(static_cast<double>(d));
    const Vector z = testing::random_vector(rng, d);
    const int g = y[std::uniform_int_distribution<std::size_t>(0, y.size() - 1)(rng)];
    const ParzenMimic mimic(std::move(x), std::move(y), sigma);
    const Vector analytic = explain_estimated(mimic, z, g).gradient;
    const Vector fd =
        richardson_gradient([&](const Vector& p) { return parzen_complement(mimic, p, g).value; }, z, 1e-3);
    const double rel = testing::rel_error(analytic, fd, 1e-6);
    worst = std::max(worst, rel);
    bad += rel >= 1e-6;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 30.0, fmt("500 configurations, %d outside tolerance, max rel %.2e, %.1f s", bad, worst, secs)};
}

Outcome ep_sanity() {
  Matrix x(2, 1);
  x << -1.0, 1.0;
  const GpcModel m = ep_fit(x, std::vector<int>{-1, 1}, KernelSpec::rbf(1.0));
  const double p0 = predict_proba(m, Vector::Zero(1));
  const double asym = std::abs(m.alpha()(0) + m.alpha()(1));
  return {std::abs(p0 - 0.5) <= 1e-6 && asym <= 1e-6, fmt("p(0) = %.17g, |alpha_1 + alpha_2| = %.2e", p0, asym)};
}

Outcome iris_pipeline() {
  std::vector<double> test_errors;
  int k4 = 0;
  int agreement_ok = 0;
  int sigma_ok = 0;
  int sign_ok = 0;
  std::string ks;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const tools::IrisRun r = tools::run_iris({s, 100, {}, {}});
    test_errors.push_back(r.test_error);
    k4 += r.k == 4;
    ks += std::to_string(r.k) + (s < 9 ? "," : "");
    agreement_ok += r.mimic_agreement >= 0.95;
    sigma_ok += r.width.sigma >= 0.1 && r.width.sigma <= 0.6;
    int setosa = 0;
    int setosa_smaller = 0;
    int virginica = 0;
    int virginica_larger = 0;
    for (std::size_t i = 0; i < r.explanations.size(); ++i) {
      if (r.test_predictions[i] != r.split.test.labels[i]) continue;
      const double g = r.explanations[i].gradient(2);
      if (r.test_species[i] == 0) {
        ++setosa;
        setosa_smaller += g > 0.0;
      } else if (r.test_species[i] == 2) {
        ++virginica;
        virginica_larger += g < 0.0;
      }
    }
    sign_ok += setosa_smaller >= 0.8 * setosa && virginica_larger >= 0.8 * virginica;
  }
  const double med = median(test_errors);
  const bool pass = med <= 0.12 && k4 > 5 && agreement_ok == 10 && sigma_ok == 10 && sign_ok >= 8;
  return {pass, fmt("median test error %.3f, k=4 in %d/10 (k: %s), agreement>=0.95 in %d/10, sigma in band %d/10, "
                    "sign structure %d/10",
                    med, k4, ks.c_str(), agreement_ok, sigma_ok, sign_ok)};
}

Outcome hessian_fallback() {
  const Dataset d = gen_three_clusters(300, 1);
  const WidthSelection sel = select_width_loo(d.features, d.labels, default_sigma_grid(d.features));
  const ParzenMimic m(d.features, d.labels, sel.sigma);
  const Vector center = Vector::Zero(2);
  const int g = mimic_predict(m, center).label;
  const double zeta = explain_estimated(m, center, g).gradient.norm();
  std::vector<double> boundary;
  for (double sx : {-0.5, 0.5}) {
    for (int k = 0; k < 21; ++k) {
      Vector z(2);
      z << sx, -0.5 + 0.05 * k;
      boundary.push_back(explain_estimated(m, z, mimic_predict(m, z).label).gradient.norm());
    }
  }
  const double med = median(boundary);
  const HessianDirection h = hessian_direction(m, center, g);
  const double cos_x = std::abs(h.direction(0));
  return {zeta < 1e-3 * med && cos_x > 0.9,
          fmt("sigma %.3f, |zeta| %.2e vs boundary median %.2e, |cos(dir, x1)| %.4f", sel.sigma, zeta, med, cos_x)};
}

Outcome width_regimes() {
  const Dataset d = gen_nonlinear(400, 3);
  const auto n = static_cast<Eigen::Index>(d.size());
  std::vector<double> gap(d.size(), std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (d.labels[static_cast<std::size_t>(i)] == d.labels[static_cast<std::size_t>(j)]) continue;
      gap[static_cast<std::size_t>(i)] =
          std::min(gap[static_cast<std::size_t>(i)], (d.features.row(i) - d.features.row(j)).norm());
    }
  }
  std::vector<double> sorted = gap;
  std::sort(sorted.begin(), sorted.end());
  const double q1 = sorted[sorted.size() / 4];
  const double q3 = sorted[3 * sorted.size() / 4];
  const double scale = median_pairwise_distance(d.features);
  struct Regime {
    double ratio;
    double cos;
  };
  auto measure = [&](double sigma) {
    const ParzenMimic m(d.features, d.labels, sigma);
    std::vector<double> interior;
    std::vector<double> boundary;
    std::vector<Vector> grads;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const Vector g = explain_estimated(m, d.features.row(i).transpose(), d.labels[k]).gradient;
      grads.push_back(g);
      if (gap[k] <= q1) boundary.push_back(g.norm());
      if (gap[k] >= q3) interior.push_back(g.norm());
    }
    double sum = 0.0;
    double count = 0.0;
    for (std::size_t i = 0; i < grads.size(); ++i) {
      for (std::size_t j = i + 1; j < grads.size(); ++j) {
        sum += std::abs(cosine(grads[i], grads[j]));
        count += 1.0;
      }
    }
    return Regime{median(interior) / median(boundary), sum / count};
  };
  const Regime tiny = measure(0.01 * scale);
  const Regime fitted = measure(0.2 * scale);
  const Regime huge = measure(2.0 * scale);
  const bool pass = tiny.ratio < 0.01 && huge.cos > fitted.cos;
  return {pass, fmt("interior/boundary at tiny sigma %.2e, mean |cos| fitted %.3f vs huge %.3f", tiny.ratio,
                    fitted.cos, huge.cos)};
}

Outcome feature_recovery() {
  int pass = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Dataset d = gen_planted_features(400, s);
    const Matrix train = d.features.topRows(200);
    const std::vector<int> y(d.labels.begin(), d.labels.begin() + 200);
    const GpcModel m = ep_fit(train, y, KernelSpec::rbf(0.025));
    std::vector<ExplanationVector> ex;
    for (Eigen::Index i = 200; i < 400; ++i) ex.push_back(explain_gpc(m, d.features.row(i).transpose()));
    const FeatureRanking r = rank_features(ex, d.feature_names);
    bool ok = true;
    for (std::size_t j = 0; j < kPlantedPositive; ++j) ok = ok && r.rank[j] <= 5;
    for (std::size_t j = kPlantedPositive; j < kPlantedPositive + kPlantedNegative; ++j) {
      ok = ok && r.rank[j] > static_cast<int>(kPlantedDim) - 5;
    }
    pass += ok;
  }
  return {pass >= 9, fmt("planted features recovered in %d/10 seeds", pass)};
}

Outcome subgroup_immunity() {
  int pass = 0;
  double worst_p = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Dataset d = gen_immune_subgroup(600, s);
    const Matrix train = d.features.topRows(300);
    const std::vector<int> y(d.labels.begin(), d.labels.begin() + 300);
    const GpcModel m = ep_fit(train, y, KernelSpec::rbf(0.5));
    Matrix grads(300, d.features.cols());
    std::vector<bool> mask;
    for (Eigen::Index i = 300; i < 600; ++i) {
      grads.row(i - 300) = explain_gpc(m, d.features.row(i).transpose()).gradient.transpose();
      mask.push_back(d.aux.at("group")[static_cast<std::size_t>(i)] == 1.0);
    }
    const GroupComparison c = compare_groups(grads, 0, mask);
    std::vector<bool> shuffled = mask;
    std::mt19937_64 rng(1000 + s);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const GroupComparison baseline = compare_groups(grads, 0, shuffled);
    worst_p = std::max(worst_p, c.ks.p_value);
    pass += c.ks.p_value < 0.01 && c.kld > baseline.kld;
  }
  return {pass >= 9, fmt("KS and KLD separation in %d/10 seeds, largest p %.2e", pass, worst_p)};
}

Outcome outlier_smoothing() {
  double unsmoothed = 0.0;
  double smoothed = 0.0;
  std::size_t count = 0;
  const int res = 41;
  Matrix grid(res * res, 2);
  for (int a = 0; a < res; ++a) {
    for (int b = 0; b < res; ++b) {
      grid(a * res + b, 0) = a / (res - 1.0);
      grid(a * res + b, 1) = b / (res - 1.0);
    }
  }
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Dataset clean = gen_triangle(100, s);
    const OutlierInjection inj = inject_outliers(clean, 2, s);
    const double sigma = 0.2 * median_pairwise_distance(clean.features);
    const ParzenMimic mc(clean.features, clean.labels, sigma);
    const ParzenMimic mo(inj.data.features, inj.data.labels, sigma);
    Matrix gc(grid.rows(), 2);
    Matrix go(grid.rows(), 2);
    for (Eigen::Index r = 0; r < grid.rows(); ++r) {
      gc.row(r) = explain_estimated(mc, grid.row(r).transpose(), -1).gradient.transpose();
      go.row(r) = explain_estimated(mo, grid.row(r).transpose(), -1).gradient.transpose();
    }
    const Matrix gs = smooth_gradients(grid, go, 2.0 * sigma);
    for (Eigen::Index r = 0; r < grid.rows(); ++r) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t i : inj.indices) {
        nearest = std::min(nearest, (grid.row(r) - inj.data.features.row(static_cast<Eigen::Index>(i))).norm());
      }
      if (nearest > 2.0 * sigma) continue;
      unsmoothed += cosine(go.row(r).transpose(), gc.row(r).transpose());
      smoothed += cosine(gs.row(r).transpose(), gc.row(r).transpose());
      ++count;
    }
  }
  const double before = unsmoothed / static_cast<double>(count);
  const double after = smoothed / static_cast<double>(count);
  return {after - before >= 0.2,
          fmt("mean cosine to clean gradients %.3f unsmoothed, %.3f smoothed, gain %.3f over %zu nodes", before,
              after, after - before, count)};
}

std::vector<std::vector<double>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

Outcome morphing() {
  const fs::path dir = fs::temp_directory_path() / "lexv_acceptance_morph";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const Dataset d = gen_triangle(100, 5);
  save_csv(dir / "triangle.csv", d);
  std::ostringstream sink;
  tools::FitGpcOptions fit;
  fit.data = (dir / "triangle.csv").string();
  fit.out = (dir / "model.json").string();
  tools::cmd_fit_gpc(fit, sink);
  tools::MorphOptions morph;
  morph.model = fit.out;
  morph.data = fit.data;
  morph.steps = 50;
  morph.out = (dir / "morph.csv").string();
  tools::cmd_morph(morph, sink);
  const auto rows = read_rows(dir / "morph.csv");
  std::vector<std::vector<std::vector<double>>> paths(d.size());
  for (const auto& row : rows) paths[static_cast<std::size_t>(row[0])].push_back(row);
  bool exact = true;
  int eligible = 0;
  int reached = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& path = paths[i];
    const auto r = static_cast<Eigen::Index>(i);
    exact = exact && !path.empty() && path[0][1] == 0.0 && path[0][2] == d.features(r, 0) &&
            path[0][3] == d.features(r, 1);
    if (d.labels[i] != -1 || path.empty() || path[0][4] >= 0.5) continue;
    ++eligible;
    reached += std::any_of(path.begin(), path.end(), [](const auto& row) { return row[4] > 0.5; });
  }
  fs::remove_all(dir);
  const double share = static_cast<double>(reached) / eligible;
  return {exact && share >= 0.9, fmt("%d/%d correctly classified negatives flip (%.1f%%), step 0 exact: %s", reached,
                                     eligible, 100.0 * share, exact ? "yes" : "no")};
}

Outcome statistics() {
  std::mt19937_64 rng(1011);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (double shift : {0.0, 0.3, 0.6}) {
    std::vector<double> a(50);
    std::vector<double> b(50);
    for (auto& v : a) v = normal(rng);
    for (auto& v : b) v = normal(rng) + shift;
    const KsResult ks = ks_two_sample(a, b);
    std::vector<double> pool(a);
    pool.insert(pool.end(), b.begin(), b.end());
    const int rounds = 100000;
    int extreme = 0;
    for (int t = 0; t < rounds; ++t) {
      std::shuffle(pool.begin(), pool.end(), rng);
      extreme += ks_statistic(std::span(pool).first(50), std::span(pool).last(50)) >= ks.statistic - 1e-12;
    }
    worst = std::max(worst, std::abs(ks.p_value - static_cast<double>(extreme) / rounds));
  }
  std::vector<double> values(400);
  for (auto& v : values) v = normal(rng);
  const HistogramSpec spec{30, -1.5, 1.5};
  const Histogram h = histogram(std::span(values).first(200), spec);
  const Histogram k = histogram(std::span(values).last(200), spec);
  const bool conserved = h.total() == 200 && k.total() == 200;
  const double asym = std::abs(sym_kld(h, k) - sym_kld(k, h));
  return {worst <= 0.02 && asym < 1e-12 && conserved,
          fmt("max |p - permutation p| %.4f, KLD asymmetry %.1e, counts conserved: %s", worst, asym,
              conserved ? "yes" : "no")};
}

struct Criterion {
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"analytic-gradient", analytic_gradient}, {"estimated-gradient", estimated_gradient},
    {"ep-sanity", ep_sanity},                 {"iris-pipeline", iris_pipeline},
    {"hessian-fallback", hessian_fallback},   {"width-regimes", width_regimes},
    {"feature-recovery", feature_recovery},   {"subgroup-immunity", subgroup_immunity},
    {"outlier-smoothing", outlier_smoothing}, {"morphing", morphing},
    {"statistics", statistics},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty()) {
    for (int c = 1; c <= static_cast<int>(std::size(kCriteria)); ++c) selected.push_back(c);
  }
  int failed = 0;
  for (int c : selected) {
    if (c < 1 || c > static_cast<int>(std::size(kCriteria))) {
      std::fprintf(stderr, "unknown criterion %d\n", c);
      return 2;
    }
    const Criterion& crit = kCriteria[c - 1];
    Outcome o;
    try {
      o = crit.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c, crit.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
