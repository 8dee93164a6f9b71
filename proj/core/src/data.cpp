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

#include "lexv/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "lexv/error.hpp"

namespace lexv {
namespace detail {
std::string_view iris_csv();
}  // namespace detail

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(const std::string& text, double& value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

bool parse_int(const std::string& text, int& value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc() && ptr == last) return true;
  // Accept integral values written as floating point, e.g. "1.0".
  double as_double = 0.0;
  if (parse_double(text, as_double) && as_double == std::floor(as_double) &&
      std::abs(as_double) < 1e9) {
    value = static_cast<int>(as_double);
    return true;
  }
  return false;
}

}  // namespace

std::vector<int> Dataset::classes() const {
  const std::set<int> distinct(labels.begin(), labels.end());
  return {distinct.begin(), distinct.end()};
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.norm = norm;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  out.row_ids.reserve(rows.size());
  for (const auto& [name, values] : aux) out.aux[name].reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t r = rows[k];
    if (r >= size()) fail(ErrorKind::invalid_argument, "subset row out of range");
    out.features.row(static_cast<Eigen::Index>(k)) = features.row(static_cast<Eigen::Index>(r));
    out.labels.push_back(labels[r]);
    out.row_ids.push_back(row_ids[r]);
    for (const auto& [name, values] : aux) out.aux[name].push_back(values[r]);
  }
  return out;
}

std::size_t Dataset::feature_index(const std::string& name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) fail(ErrorKind::not_found, "no feature named '" + name + "'");
  return static_cast<std::size_t>(it - feature_names.begin());
}

Dataset read_csv(std::istream& in, const CsvSchema& schema, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::parse, source + ": missing header row");
  const std::vector<std::string> header = split_line(line);

  auto find_column = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto label_col = find_column(schema.label_column);
  if (!label_col && !schema.label_optional) {
    fail(ErrorKind::parse, source + ": missing label column '" + schema.label_column + "'");
  }
  const auto id_col = find_column(schema.id_column);
  std::vector<std::size_t> aux_cols;
  for (const auto& name : schema.aux_columns) {
    const auto col = find_column(name);
    if (!col) fail(ErrorKind::parse, source + ": missing column '" + name + "'");
    aux_cols.push_back(*col);
  }
  std::vector<std::size_t> feature_cols;
  Dataset data;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if ((label_col && c == *label_col) || (id_col && c == *id_col) ||
        std::find(aux_cols.begin(), aux_cols.end(), c) != aux_cols.end()) {
      continue;
    }
    feature_cols.push_back(c);
    data.feature_names.push_back(header[c]);
  }
  if (feature_cols.empty()) fail(ErrorKind::parse, source + ": no feature columns");

  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    const std::size_t row = data.labels.size();
    if (cells.size() != header.size()) {
      fail(ErrorKind::parse, source + ": line " + std::to_string(line_no) + " (row " +
                                 std::to_string(row) + ") has " + std::to_string(cells.size()) +
                                 " cells, header has " + std::to_string(header.size()));
    }
    for (std::size_t c : feature_cols) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        fail(ErrorKind::parse, source + ": row " + std::to_string(row) + ", column '" + header[c] +
                                   "': non-numeric value '" + cells[c] + "'");
      }
      values.push_back(v);
    }
    for (std::size_t k = 0; k < aux_cols.size(); ++k) {
      double v = 0.0;
      if (!parse_double(cells[aux_cols[k]], v)) {
        fail(ErrorKind::parse, source + ": row " + std::to_string(row) + ", column '" +
                                   header[aux_cols[k]] + "': non-numeric value '" +
                                   cells[aux_cols[k]] + "'");
      }
      data.aux[schema.aux_columns[k]].push_back(v);
    }
    int label = 0;
    if (label_col && !parse_int(cells[*label_col], label)) {
      fail(ErrorKind::parse, source + ": row " + std::to_string(row) + ", column '" +
                                 schema.label_column + "': label '" + cells[*label_col] +
                                 "' is not an integer");
    }
    if (label_col && !schema.allowed_labels.empty() &&
        std::find(schema.allowed_labels.begin(), schema.allowed_labels.end(), label) ==
            schema.allowed_labels.end()) {
      fail(ErrorKind::parse, source + ": row " + std::to_string(row) + ": unknown label " +
                                 std::to_string(label));
    }
    data.labels.push_back(label);
    data.row_ids.push_back(row);
  }
  const auto n = static_cast<Eigen::Index>(data.labels.size());
  const auto d = static_cast<Eigen::Index>(feature_cols.size());
  data.features = Eigen::Map<const Matrix>(values.data(), n, d);
  return data;
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  return read_csv(in, schema, path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) fail(ErrorKind::io, "cannot format number");
  return {buf, ptr};
}

void write_csv(std::ostream& out, const Dataset& data) {
  out << "id";
  for (const auto& name : data.feature_names) out << ',' << name;
  for (const auto& [name, values] : data.aux) out << ',' << name;
  out << ",label\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    out << data.row_ids[r];
    for (Eigen::Index c = 0; c < data.dim(); ++c) {
      out << ',' << format_double(data.features(static_cast<Eigen::Index>(r), c));
    }
    for (const auto& [name, values] : data.aux) out << ',' << format_double(values[r]);
    out << ',' << data.labels[r] << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  write_csv(out, data);
}

NormStats fit_normalization(const Dataset& train) {
  if (train.size() == 0) fail(ErrorKind::invalid_argument, "cannot fit normalization on an empty set");
  NormStats stats;
  stats.feature_names = train.feature_names;
  const double n = static_cast<double>(train.size());
  for (Eigen::Index c = 0; c < train.dim(); ++c) {
    const double mean = train.features.col(c).sum() / n;
    const double var = (train.features.col(c).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    const bool constant = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
    stats.mean.push_back(mean);
    stats.stddev.push_back(constant ? 1.0 : sd);
    stats.constant.push_back(constant);
  }
  return stats;
}

Dataset apply_normalization(const Dataset& data, const NormStats& stats) {
  if (static_cast<Eigen::Index>(stats.mean.size()) != data.dim()) {
    fail(ErrorKind::dimension_mismatch, "normalization statistics do not match the feature count");
  }
  Dataset out = data;
  for (Eigen::Index c = 0; c < data.dim(); ++c) {
    const auto k = static_cast<std::size_t>(c);
    out.features.col(c) = (data.features.col(c).array() - stats.mean[k]) / stats.stddev[k];
  }
  out.norm = stats;
  return out;
}

NormalizedSets normalize_fit_apply(const Dataset& train, std::span<const Dataset> others) {
  NormalizedSets out;
  out.stats = fit_normalization(train);
  out.train = apply_normalization(train, out.stats);
  for (const Dataset& other : others) out.others.push_back(apply_normalization(other, out.stats));
  return out;
}

Split split_stratified(const Dataset& data, const SplitOptions& options) {
  const std::size_t n = data.size();
  if (options.n_train == 0 || options.n_train >= n) {
    fail(ErrorKind::infeasible, "n_train must lie in [1, n-1]");
  }
  if (options.preserve_group && options.preserve_group->size() != n) {
    fail(ErrorKind::dimension_mismatch, "group mask length differs from the dataset size");
  }
  std::mt19937_64 rng(options.seed);

  // Cells are classes when balancing, otherwise the whole set.
  std::vector<std::vector<std::size_t>> cells;
  std::vector<std::size_t> quotas;
  if (options.balance_classes) {
    const std::vector<int> classes = data.classes();
    cells.resize(classes.size());
    for (std::size_t r = 0; r < n; ++r) {
      const auto pos = std::lower_bound(classes.begin(), classes.end(), data.labels[r]) - classes.begin();
      cells[static_cast<std::size_t>(pos)].push_back(r);
    }
    const std::size_t base = options.n_train / classes.size();
    const std::size_t extra = options.n_train % classes.size();
    for (std::size_t k = 0; k < classes.size(); ++k) {
      quotas.push_back(base + (k < extra ? 1 : 0));
      if (quotas.back() > cells[k].size()) {
        fail(ErrorKind::infeasible, "class " + std::to_string(classes[k]) + " has only " +
                                        std::to_string(cells[k].size()) + " rows, need " +
                                        std::to_string(quotas.back()));
      }
    }
  } else {
    cells.emplace_back(n);
    std::iota(cells[0].begin(), cells[0].end(), std::size_t{0});
    quotas.push_back(options.n_train);
  }

  std::vector<std::size_t> train_rows;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    std::vector<std::size_t>& cell = cells[k];
    if (!options.preserve_group) {
      std::shuffle(cell.begin(), cell.end(), rng);
      train_rows.insert(train_rows.end(), cell.begin(), cell.begin() + static_cast<std::ptrdiff_t>(quotas[k]));
      continue;
    }
    std::vector<std::size_t> in_group;
    std::vector<std::size_t> out_group;
    for (std::size_t r : cell) ((*options.preserve_group)[r] ? in_group : out_group).push_back(r);
    const double share = static_cast<double>(in_group.size()) / static_cast<double>(cell.size());
    auto take_in = static_cast<std::size_t>(std::llround(share * static_cast<double>(quotas[k])));
    take_in = std::min(take_in, in_group.size());
    if (quotas[k] - take_in > out_group.size()) take_in = quotas[k] - out_group.size();
    if (take_in > in_group.size()) fail(ErrorKind::infeasible, "group balance cannot be met");
    std::shuffle(in_group.begin(), in_group.end(), rng);
    std::shuffle(out_group.begin(), out_group.end(), rng);
    train_rows.insert(train_rows.end(), in_group.begin(), in_group.begin() + static_cast<std::ptrdiff_t>(take_in));
    train_rows.insert(train_rows.end(), out_group.begin(),
                      out_group.begin() + static_cast<std::ptrdiff_t>(quotas[k] - take_in));
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::vector<std::size_t> test_rows;
  std::size_t t = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (t < train_rows.size() && train_rows[t] == r) {
      ++t;
    } else {
      test_rows.push_back(r);
    }
  }
  Split out;
  out.train = data.subset(train_rows);
  out.test = data.subset(test_rows);
  out.train_rows = std::move(train_rows);
  out.test_rows = std::move(test_rows);
  return out;
}

Dataset load_iris() {
  std::istringstream in{std::string(detail::iris_csv())};
  CsvSchema schema;
  schema.label_column = "species";
  schema.allowed_labels = {0, 1, 2};
  return read_csv(in, schema, "iris.csv");
}

Dataset relabel_versicolor(const Dataset& iris) {
  Dataset out = iris;
  std::vector<double> species(iris.labels.begin(), iris.labels.end());
  for (int& y : out.labels) y = (y == 1) ? 0 : 1;
  out.aux["species"] = std::move(species);
  return out;
}

}  // namespace lexv
