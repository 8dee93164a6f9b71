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

#include "lexv/classifiers.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "lexv/error.hpp"

namespace lexv {
namespace {

std::vector<std::size_t> order_by_distance(MatrixRef points, PointRef x, std::ptrdiff_t skip) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (i == skip) continue;
    dist.emplace_back((points.row(i).transpose() - x).squaredNorm(), static_cast<std::size_t>(i));
  }
  std::sort(dist.begin(), dist.end());
  std::vector<std::size_t> out;
  out.reserve(dist.size());
  for (const auto& entry : dist) out.push_back(entry.second);
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  const auto first = s.find_first_not_of(" \t");
  return first == std::string::npos ? std::string() : s.substr(first);
}

bool parse_integer(const std::string& text, long long& value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

KnnClassifier::KnnClassifier(Matrix train_x, std::vector<int> train_y, int k)
    : train_x_(std::move(train_x)), train_y_(std::move(train_y)), k_(k) {
  if (train_x_.rows() == 0) fail(ErrorKind::invalid_argument, "k-NN needs training points");
  if (static_cast<Eigen::Index>(train_y_.size()) != train_x_.rows()) {
    fail(ErrorKind::dimension_mismatch, "k-NN points and labels disagree in length");
  }
  if (k_ < 1 || k_ > train_x_.rows()) {
    fail(ErrorKind::invalid_argument, "k must lie in [1, n], got " + std::to_string(k_));
  }
}

std::vector<std::size_t> KnnClassifier::neighbors(PointRef x, std::ptrdiff_t skip) const {
  if (x.size() != train_x_.cols()) {
    fail(ErrorKind::dimension_mismatch, "k-NN query has dimension " + std::to_string(x.size()));
  }
  return order_by_distance(train_x_, x, skip);
}

int KnnClassifier::predict(PointRef x) const { return knn_vote(neighbors(x), train_y_, k_); }

int knn_vote(std::span<const std::size_t> ordered_neighbors, std::span<const int> labels, int k) {
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), ordered_neighbors.size());
  if (take == 0) fail(ErrorKind::invalid_argument, "k-NN vote over an empty neighborhood");
  std::map<int, std::size_t> votes;
  for (std::size_t r = 0; r < take; ++r) ++votes[labels[ordered_neighbors[r]]];
  std::size_t best = 0;
  for (const auto& [label, count] : votes) best = std::max(best, count);
  // Nearest neighbor whose class is among the tied leaders.
  for (std::size_t r = 0; r < take; ++r) {
    const int label = labels[ordered_neighbors[r]];
    if (votes[label] == best) return label;
  }
  return labels[ordered_neighbors[0]];
}

std::size_t knn_loo_errors(MatrixRef train_x, std::span<const int> train_y, int k) {
  if (k < 1 || k > train_x.rows() - 1) {
    fail(ErrorKind::invalid_argument, "leave-one-out k must lie in [1, n-1]");
  }
  std::size_t errors = 0;
  for (Eigen::Index i = 0; i < train_x.rows(); ++i) {
    const auto order = order_by_distance(train_x, train_x.row(i).transpose(), i);
    if (knn_vote(order, train_y, k) != train_y[static_cast<std::size_t>(i)]) ++errors;
  }
  return errors;
}

KnnSelection knn_fit_loo(MatrixRef train_x, std::span<const int> train_y,
                         std::span<const int> k_candidates) {
  const Eigen::Index n = train_x.rows();
  if (n == 0) fail(ErrorKind::invalid_argument, "k-NN needs a non-empty training set");
  if (static_cast<Eigen::Index>(train_y.size()) != n) {
    fail(ErrorKind::dimension_mismatch, "k-NN points and labels disagree in length");
  }
  if (k_candidates.empty()) fail(ErrorKind::invalid_argument, "no k candidates");
  for (int k : k_candidates) {
    if (k < 1 || k > n - 1) {
      fail(ErrorKind::invalid_argument, "candidate k=" + std::to_string(k) + " outside [1, n-1]");
    }
  }
  // Neighbor orders are shared by every candidate.
  std::vector<std::vector<std::size_t>> orders;
  orders.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) orders.push_back(order_by_distance(train_x, train_x.row(i).transpose(), i));

  std::vector<std::size_t> errors;
  for (int k : k_candidates) {
    std::size_t e = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (knn_vote(orders[static_cast<std::size_t>(i)], train_y, k) != train_y[static_cast<std::size_t>(i)]) ++e;
    }
    errors.push_back(e);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < errors.size(); ++c) {
    if (errors[c] < errors[best] || (errors[c] == errors[best] && k_candidates[c] < k_candidates[best])) {
      best = c;
    }
  }
  return KnnSelection{KnnClassifier(Matrix(train_x), std::vector<int>(train_y.begin(), train_y.end()),
                                    k_candidates[best]),
                      std::vector<int>(k_candidates.begin(), k_candidates.end()), std::move(errors)};
}

TableOracle::TableOracle(Matrix companion, std::vector<int> labels)
    : companion_(std::move(companion)), labels_(std::move(labels)) {
  if (static_cast<Eigen::Index>(labels_.size()) != companion_.rows()) {
    fail(ErrorKind::dimension_mismatch, "prediction table and companion dataset differ in length");
  }
}

int TableOracle::predict(PointRef x) const {
  if (x.size() != companion_.cols()) {
    fail(ErrorKind::dimension_mismatch, "table oracle query has dimension " + std::to_string(x.size()));
  }
  for (Eigen::Index i = 0; i < companion_.rows(); ++i) {
    if ((companion_.row(i).transpose().array() == x.array()).all()) return labels_[static_cast<std::size_t>(i)];
  }
  fail(ErrorKind::not_found, "table oracle has no row for the queried point");
}

int TableOracle::predict_row(std::size_t row_id) const {
  if (row_id >= labels_.size()) fail(ErrorKind::not_found, "table oracle has no row " + std::to_string(row_id));
  return labels_[row_id];
}

TableOracle table_oracle_read(std::istream& in, const Dataset& companion,
                              std::span<const int> declared_classes, const std::string& source) {
  const std::vector<int> classes = declared_classes.empty()
                                       ? companion.classes()
                                       : std::vector<int>(declared_classes.begin(), declared_classes.end());
  std::string line;
  if (!std::getline(in, line) || strip(line) != "id,label") {
    fail(ErrorKind::parse, source + ": prediction table must start with header 'id,label'");
  }
  // Dataset row id -> position.
  std::map<std::size_t, std::size_t> position;
  for (std::size_t r = 0; r < companion.size(); ++r) position[companion.row_ids[r]] = r;

  std::vector<int> labels(companion.size());
  std::vector<bool> seen(companion.size(), false);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    long long id = 0;
    long long label = 0;
    if (comma == std::string::npos || !parse_integer(strip(line.substr(0, comma)), id) ||
        !parse_integer(strip(line.substr(comma + 1)), label)) {
      fail(ErrorKind::parse, source + ": malformed line " + std::to_string(line_no));
    }
    const auto it = id < 0 ? position.end() : position.find(static_cast<std::size_t>(id));
    if (it == position.end()) {
      fail(ErrorKind::parse, source + ": id " + std::to_string(id) + " is not a dataset row");
    }
    if (seen[it->second]) fail(ErrorKind::parse, source + ": duplicate id " + std::to_string(id));
    if (std::find(classes.begin(), classes.end(), static_cast<int>(label)) == classes.end()) {
      fail(ErrorKind::parse, source + ": label " + std::to_string(label) + " on line " +
                                 std::to_string(line_no) + " is outside the declared classes");
    }
    seen[it->second] = true;
    labels[it->second] = static_cast<int>(label);
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    fail(ErrorKind::parse, source + ": prediction table does not cover every dataset row");
  }
  return TableOracle(companion.features, std::move(labels));
}

TableOracle table_oracle_load(const std::filesystem::path& path, const Dataset& companion,
                              std::span<const int> declared_classes) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  return table_oracle_read(in, companion, declared_classes, path.string());
}

void write_prediction_table(std::ostream& out, const LabelOracle& g, const Dataset& data) {
  out << "id,label\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    out << data.row_ids[r] << ',' << g.predict(data.features.row(static_cast<Eigen::Index>(r)).transpose())
        << '\n';
  }
}

void save_prediction_table(const std::filesystem::path& path, const LabelOracle& g,
                           const Dataset& data) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  write_prediction_table(out, g, data);
}

}  // namespace lexv
