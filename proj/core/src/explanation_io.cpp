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

#include "lexv/explanation_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lexv/data.hpp"
#include "lexv/error.hpp"

namespace lexv {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(ErrorKind::parse, where + ": non-numeric value '" + text + "'");
  return value;
}

long long to_integer(const std::string& text, const std::string& where) {
  long long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(ErrorKind::parse, where + ": non-integer value '" + text + "'");
  return value;
}

}  // namespace

std::string_view to_string(ExplanationSource source) {
  switch (source) {
    case ExplanationSource::analytic_gpc:
      return "analytic-gpc";
    case ExplanationSource::parzen_mimic:
      return "parzen-mimic";
    case ExplanationSource::hessian_fallback:
      return "hessian-fallback";
  }
  return "unknown";
}

ExplanationSource explanation_source_from_string(std::string_view text) {
  if (text == "analytic-gpc") return ExplanationSource::analytic_gpc;
  if (text == "parzen-mimic") return ExplanationSource::parzen_mimic;
  if (text == "hessian-fallback") return ExplanationSource::hessian_fallback;
  fail(ErrorKind::parse, "unknown explanation source '" + std::string(text) + "'");
}

void write_explanations(std::ostream& out, std::span<const ExplanationVector> explanations,
                        std::span<const std::string> feature_names, std::span<const std::size_t> ids) {
  if (!ids.empty() && ids.size() != explanations.size()) {
    fail(ErrorKind::dimension_mismatch, "explanation ids and rows differ in length");
  }
  const std::size_t d = feature_names.size();
  out << "id";
  for (const auto& name : feature_names) out << ',' << name;
  for (const auto& name : feature_names) out << ",grad_" << name;
  out << ",label,probability,source,far_field\n";
  for (std::size_t i = 0; i < explanations.size(); ++i) {
    const auto& e = explanations[i];
    if (static_cast<std::size_t>(e.query.size()) != d || static_cast<std::size_t>(e.gradient.size()) != d) {
      fail(ErrorKind::dimension_mismatch, "explanation " + std::to_string(i) + " does not match " +
                                              std::to_string(d) + " feature names");
    }
    out << (ids.empty() ? i : ids[i]);
    for (double v : e.query) out << ',' << format_double(v);
    for (double v : e.gradient) out << ',' << format_double(v);
    out << ',' << e.predicted_label << ',' << format_double(e.predicted_probability) << ','
        << to_string(e.source) << ',' << (e.far_field ? 1 : 0) << '\n';
  }
}

void save_explanations(const std::filesystem::path& path, std::span<const ExplanationVector> explanations,
                       std::span<const std::string> feature_names, std::span<const std::size_t> ids) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  write_explanations(out, explanations, feature_names, ids);
}

ExplanationTable read_explanations(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::parse, source + ": empty explanation file");
  const auto header = split_line(line);
  if (header.size() < 5 || (header.size() - 5) % 2 != 0 || header.front() != "id") {
    fail(ErrorKind::parse, source + ": malformed explanation header");
  }
  const std::size_t d = (header.size() - 5) / 2;
  ExplanationTable table;
  for (std::size_t j = 0; j < d; ++j) {
    table.feature_names.push_back(header[1 + j]);
    if (header[1 + d + j] != "grad_" + header[1 + j]) {
      fail(ErrorKind::parse, source + ": expected column 'grad_" + header[1 + j] + "'");
    }
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    const std::string where = source + " line " + std::to_string(line_no);
    if (cells.size() != header.size()) fail(ErrorKind::parse, where + ": wrong number of columns");
    ExplanationVector e;
    e.query.resize(static_cast<Eigen::Index>(d));
    e.gradient.resize(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
      e.query(static_cast<Eigen::Index>(j)) = to_double(cells[1 + j], where);
      e.gradient(static_cast<Eigen::Index>(j)) = to_double(cells[1 + d + j], where);
    }
    e.predicted_label = static_cast<int>(to_integer(cells[1 + 2 * d], where));
    e.predicted_probability = to_double(cells[2 + 2 * d], where);
    e.source = explanation_source_from_string(cells[3 + 2 * d]);
    e.far_field = to_integer(cells[4 + 2 * d], where) != 0;
    table.ids.push_back(static_cast<std::size_t>(to_integer(cells[0], where)));
    table.rows.push_back(std::move(e));
  }
  return table;
}

ExplanationTable load_explanations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  return read_explanations(in, path.string());
}

}  // namespace lexv
