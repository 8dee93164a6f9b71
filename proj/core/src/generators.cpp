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
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "lexv/data.hpp"
#include "lexv/error.hpp"

namespace lexv {
namespace {

struct Pt {
  double x;
  double y;
};

constexpr Pt kTriA{0.2, 0.2};
constexpr Pt kTriB{0.8, 0.2};
constexpr Pt kTriC{0.2, 0.8};
constexpr double kTriangleMargin = 0.05;

constexpr Pt kDiscCenter{0.3, 0.5};
constexpr double kDiscRadius = 0.18;
constexpr double kRightRegionX = 0.6;
constexpr double kRegionMargin = 0.02;
constexpr double kRidgeClearance = 0.04;

double segment_distance(Pt p, Pt a, Pt b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

Dataset make_dataset(const std::vector<Pt>& points, const std::vector<int>& labels) {
  Dataset data;
  data.feature_names = {"x1", "x2"};
  data.features.resize(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    data.features(static_cast<Eigen::Index>(i), 0) = points[i].x;
    data.features(static_cast<Eigen::Index>(i), 1) = points[i].y;
    data.row_ids.push_back(i);
  }
  data.labels = labels;
  return data;
}

}  // namespace

bool in_triangle(double x, double y) {
  return x >= kTriA.x && y >= kTriA.y && (x - kTriA.x) + (y - kTriA.y) <= (kTriB.x - kTriA.x);
}

double triangle_distance(double x, double y) {
  if (in_triangle(x, y)) return 0.0;
  const Pt p{x, y};
  return std::min({segment_distance(p, kTriA, kTriB), segment_distance(p, kTriB, kTriC),
                   segment_distance(p, kTriC, kTriA)});
}

Dataset gen_triangle(std::size_t n_per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Pt> points;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n_per_class; ++i) {
    double u = unit(rng);
    double v = unit(rng);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    points.push_back({kTriA.x + u * (kTriB.x - kTriA.x) + v * (kTriC.x - kTriA.x),
                      kTriA.y + u * (kTriB.y - kTriA.y) + v * (kTriC.y - kTriA.y)});
    labels.push_back(1);
  }
  while (labels.size() < 2 * n_per_class) {
    const Pt p{unit(rng), unit(rng)};
    if (triangle_distance(p.x, p.y) < kTriangleMargin) continue;
    points.push_back(p);
    labels.push_back(-1);
  }
  return make_dataset(points, labels);
}

Dataset gen_three_clusters(std::size_t n, std::uint64_t seed) {
  if (n < 3) fail(ErrorKind::invalid_argument, "three clusters need n >= 3");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> offset(0.0, kClusterStddev);
  const std::size_t outer = n / 3;
  const std::size_t middle = n - 2 * outer;

  // Offsets come in mirror quadruples so every cluster is symmetric about its center.
  auto draw_offsets = [&](std::size_t count) {
    std::vector<Pt> out;
    while (out.size() < count) {
      const double dx = offset(rng);
      const double dy = offset(rng);
      for (Pt q : {Pt{dx, dy}, Pt{-dx, dy}, Pt{dx, -dy}, Pt{-dx, -dy}}) {
        if (out.size() < count) out.push_back(q);
      }
    }
    return out;
  };
  // The middle cluster reuses the outer offsets so the x2 marginal matches across classes.
  const std::vector<Pt> outer_offsets = draw_offsets(outer);
  std::vector<Pt> middle_offsets = outer_offsets;
  for (const Pt& q : draw_offsets(middle - outer)) middle_offsets.push_back(q);

  std::vector<Pt> points;
  std::vector<int> labels;
  std::vector<double> cluster;
  for (const Pt& q : outer_offsets) {
    points.push_back({-kClusterSpacing + q.x, q.y});
    labels.push_back(-1);
    cluster.push_back(0);
  }
  for (const Pt& q : middle_offsets) {
    points.push_back({q.x, q.y});
    labels.push_back(1);
    cluster.push_back(1);
  }
  for (const Pt& q : outer_offsets) {
    points.push_back({kClusterSpacing - q.x, q.y});
    labels.push_back(-1);
    cluster.push_back(2);
  }
  Dataset data = make_dataset(points, labels);
  data.aux["cluster"] = std::move(cluster);
  return data;
}

int nonlinear_region_label(double x, double y) {
  if (x >= kRightRegionX) return std::abs(x - kRidgeX) < 1e-12 ? 1 : -1;
  return std::hypot(x - kDiscCenter.x, y - kDiscCenter.y) < kDiscRadius ? -1 : 1;
}

Dataset gen_nonlinear(std::size_t n, std::uint64_t seed) {
  if (n < 10) fail(ErrorKind::invalid_argument, "nonlinear toy needs n >= 10");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t ridge = std::max<std::size_t>(3, n / 25);
  std::vector<Pt> points;
  std::vector<int> labels;
  while (points.size() < n - ridge) {
    const Pt p{unit(rng), unit(rng)};
    const double r = std::hypot(p.x - kDiscCenter.x, p.y - kDiscCenter.y);
    if (p.x < kRightRegionX + kRegionMargin && p.x > kRightRegionX - kRegionMargin) continue;
    if (p.x < kRightRegionX && std::abs(r - kDiscRadius) < kRegionMargin) continue;
    if (std::abs(p.x - kRidgeX) < kRidgeClearance) continue;
    points.push_back(p);
    labels.push_back(nonlinear_region_label(p.x, p.y));
  }
  for (std::size_t k = 0; k < ridge; ++k) {
    const double y = 0.1 + 0.8 * static_cast<double>(k) / static_cast<double>(ridge - 1);
    points.push_back({kRidgeX, y});
    labels.push_back(1);
  }
  return make_dataset(points, labels);
}

Dataset gen_planted_features(std::size_t n, std::uint64_t seed, double noise) {
  if (n < 2) fail(ErrorKind::invalid_argument, "planted-feature data needs n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kPlantedDim));
  for (std::size_t j = 0; j < kPlantedDim; ++j) {
    data.feature_names.push_back((j < 10 ? "f0" : "f") + std::to_string(j));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    for (std::size_t j = 0; j < kPlantedDim; ++j) {
      const double v = normal(rng);
      data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      if (j < kPlantedPositive) score += v;
      else if (j < kPlantedPositive + kPlantedNegative) score -= v;
    }
    const double u = std::clamp(unit(rng), 1e-12, 1.0 - 1e-12);
    score += noise * std::log(u / (1.0 - u));
    data.labels.push_back(score > 0.0 ? 1 : -1);
    data.row_ids.push_back(i);
  }
  return data;
}

Dataset gen_immune_subgroup(std::size_t n, std::uint64_t seed, double group_share, double noise) {
  if (n < 4) fail(ErrorKind::invalid_argument, "subgroup data needs n >= 4");
  if (!(group_share > 0.0 && group_share < 1.0)) {
    fail(ErrorKind::invalid_argument, "group share must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset data;
  data.feature_names = {"signal", "group", "noise"};
  data.features.resize(static_cast<Eigen::Index>(n), 3);
  const auto in_group = static_cast<std::size_t>(std::round(group_share * static_cast<double>(n)));
  std::vector<double> group(n, 0.0);
  std::fill(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(in_group), 1.0);
  std::shuffle(group.begin(), group.end(), rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double signal = normal(rng);
    const double u = std::clamp(unit(rng), 1e-12, 1.0 - 1e-12);
    const auto r = static_cast<Eigen::Index>(i);
    data.features(r, 0) = signal;
    data.features(r, 1) = group[i];
    data.features(r, 2) = normal(rng);
    const double score = group[i] > 0.5 ? u - 0.5 : signal + noise * std::log(u / (1.0 - u));
    data.labels.push_back(score > 0.0 ? 1 : -1);
    data.row_ids.push_back(i);
  }
  data.aux["group"] = std::move(group);
  return data;
}

OutlierInjection inject_outliers(const Dataset& data, std::size_t count, std::uint64_t seed) {
  const std::vector<int> classes = data.classes();
  if (classes.size() != 2) fail(ErrorKind::invalid_argument, "outlier injection needs exactly two classes");
  const std::size_t n = data.size();

  std::vector<double> gap(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (data.labels[i] == data.labels[j]) continue;
      gap[i] = std::min(gap[i], (data.features.row(static_cast<Eigen::Index>(i)) -
                                 data.features.row(static_cast<Eigen::Index>(j)))
                                    .norm());
    }
  }
  std::vector<std::size_t> candidates;
  for (int c : classes) {
    std::vector<double> class_gaps;
    for (std::size_t i = 0; i < n; ++i) {
      if (data.labels[i] == c) class_gaps.push_back(gap[i]);
    }
    std::sort(class_gaps.begin(), class_gaps.end());
    const double median = class_gaps[class_gaps.size() / 2];
    for (std::size_t i = 0; i < n; ++i) {
      if (data.labels[i] == c && gap[i] > median) candidates.push_back(i);
    }
  }
  if (count > candidates.size()) {
    fail(ErrorKind::infeasible, "only " + std::to_string(candidates.size()) +
                                    " interior points available for outliers");
  }
  std::sort(candidates.begin(), candidates.end());
  std::mt19937_64 rng(seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);

  OutlierInjection out;
  out.data = data;
  out.indices.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(out.indices.begin(), out.indices.end());
  for (std::size_t i : out.indices) {
    out.data.labels[i] = out.data.labels[i] == classes[0] ? classes[1] : classes[0];
  }
  return out;
}

}  // namespace lexv
