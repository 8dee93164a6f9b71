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

#include "lexv/serialization.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lexv/error.hpp"

namespace lexv {
namespace {

using nlohmann::json;

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string(what) + ": " + e.what());
  }
}

template <typename T>
T field(const json& doc, const char* key, const char* what) {
  if (!doc.is_object() || !doc.contains(key)) {
    fail(ErrorKind::parse, std::string(what) + ": missing field '" + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string(what) + ": field '" + key + "': " + e.what());
  }
}

json kernel_doc(const KernelSpec& k) {
  return json{{"kind", std::string(to_string(k.kind()))}, {"w", k.width()}, {"alpha", k.rq_alpha()},
              {"length", k.rq_length()}};
}

KernelSpec kernel_from_doc(const json& doc) {
  const auto kind = kernel_kind_from_string(field<std::string>(doc, "kind", "kernel"));
  const double w = doc.contains("w") ? field<double>(doc, "w", "kernel") : 1.0;
  const double alpha = doc.contains("alpha") ? field<double>(doc, "alpha", "kernel") : 1.0;
  const double length = doc.contains("length") ? field<double>(doc, "length", "kernel") : 1.0;
  return KernelSpec(kind, w, alpha, length);
}

json matrix_doc(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

Matrix matrix_from_doc(const json& doc, const char* what) {
  const auto rows = doc.get<std::vector<std::vector<double>>>();
  const std::size_t d = rows.empty() ? 0 : rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) fail(ErrorKind::parse, std::string(what) + ": ragged point rows");
    for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

Vector vector_from(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string kernel_to_json(const KernelSpec& kernel) { return kernel_doc(kernel).dump(); }

KernelSpec kernel_from_json(const std::string& text) { return kernel_from_doc(parse(text, "kernel")); }

std::string gpc_to_json(const GpcModel& model) {
  json doc;
  doc["kernel"] = kernel_doc(model.kernel());
  doc["train_x"] = matrix_doc(model.train_x());
  doc["train_y"] = model.train_y();
  doc["site_variance"] = std::vector<double>(model.site_variance().begin(), model.site_variance().end());
  doc["alpha"] = std::vector<double>(model.alpha().begin(), model.alpha().end());
  doc["ep_sweeps"] = model.ep_sweeps();
  doc["converged"] = model.converged();
  return doc.dump(1);
}

GpcModel gpc_from_json(const std::string& text) {
  const json doc = parse(text, "gpc model");
  if (!doc.contains("kernel")) fail(ErrorKind::parse, "gpc model: missing field 'kernel'");
  if (!doc.contains("train_x")) fail(ErrorKind::parse, "gpc model: missing field 'train_x'");
  Matrix x;
  try {
    x = matrix_from_doc(doc.at("train_x"), "gpc model");
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("gpc model: field 'train_x': ") + e.what());
  }
  return GpcModel(kernel_from_doc(doc.at("kernel")), std::move(x),
                  field<std::vector<int>>(doc, "train_y", "gpc model"),
                  vector_from(field<std::vector<double>>(doc, "site_variance", "gpc model")),
                  vector_from(field<std::vector<double>>(doc, "alpha", "gpc model")),
                  doc.contains("ep_sweeps") ? field<int>(doc, "ep_sweeps", "gpc model") : 0,
                  doc.contains("converged") ? field<bool>(doc, "converged", "gpc model") : true);
}

std::string mimic_to_json(const ParzenMimic& mimic) {
  json doc;
  doc["sigma"] = mimic.sigma();
  doc["ref_x"] = matrix_doc(mimic.ref_x());
  doc["ref_labels"] = mimic.ref_labels();
  return doc.dump(1);
}

ParzenMimic mimic_from_json(const std::string& text) {
  const json doc = parse(text, "mimic");
  if (!doc.contains("ref_x")) fail(ErrorKind::parse, "mimic: missing field 'ref_x'");
  Matrix x;
  try {
    x = matrix_from_doc(doc.at("ref_x"), "mimic");
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("mimic: field 'ref_x': ") + e.what());
  }
  return ParzenMimic(std::move(x), field<std::vector<int>>(doc, "ref_labels", "mimic"),
                     field<double>(doc, "sigma", "mimic"));
}

std::string norm_to_json(const NormStats& stats) {
  // ordered_json keeps the feature order of the file.
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t j = 0; j < stats.feature_names.size(); ++j) {
    doc[stats.feature_names[j]] = {{"mean", stats.mean[j]}, {"std", stats.stddev[j]}};
  }
  return doc.dump(1);
}

NormStats norm_from_json(const std::string& text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("normalization: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::parse, "normalization: expected an object");
  NormStats stats;
  for (const auto& [name, entry] : doc.items()) {
    if (!entry.is_object() || !entry.contains("mean") || !entry.contains("std") ||
        !entry["mean"].is_number() || !entry["std"].is_number()) {
      fail(ErrorKind::parse, "normalization: feature '" + name + "' needs numeric mean and std");
    }
    const double sd = entry["std"].get<double>();
    if (!(sd > 0.0)) fail(ErrorKind::parse, "normalization: feature '" + name + "' has non-positive std");
    stats.feature_names.push_back(name);
    stats.mean.push_back(entry["mean"].get<double>());
    stats.stddev.push_back(sd);
    stats.constant.push_back(false);
  }
  return stats;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorKind::io, "failed writing '" + path.string() + "'");
}

}  // namespace lexv
