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

#include "lexv_tools/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "lexv/analysis.hpp"
#include "lexv/classifiers.hpp"
#include "lexv/error.hpp"
#include "lexv/explanation_io.hpp"
#include "lexv/mimic.hpp"
#include "lexv/numeric.hpp"
#include "lexv/serialization.hpp"
#include "lexv_tools/pipelines.hpp"

namespace lexv::tools {
namespace {

using nlohmann::json;

/// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::io, "cannot write '" + path + "'");
  write(file);
  if (!file) fail(ErrorKind::io, "failed writing '" + path + "'");
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) fail(ErrorKind::invalid_argument, std::string("missing required option --") + flag);
}

std::vector<double> scaled(double base, std::initializer_list<double> factors) {
  std::vector<double> out;
  for (double f : factors) out.push_back(base * f);
  return out;
}

std::vector<KernelSpec> kernel_candidates(const FitGpcOptions& o, MatrixRef x) {
  const KernelKind kind = kernel_kind_from_string(o.kernel);
  std::vector<KernelSpec> out;
  if (kind == KernelKind::linear) {
    out.push_back(KernelSpec::linear());
    return out;
  }
  const double median = median_pairwise_distance(x);
  if (!(median > 0.0)) fail(ErrorKind::invalid_argument, "training inputs are all identical");
  if (kind == KernelKind::rbf) {
    const auto grid = o.w_grid.empty() ? scaled(1.0 / (median * median), {0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0})
                                       : o.w_grid;
    for (double w : grid) out.push_back(KernelSpec::rbf(w));
    return out;
  }
  const auto alphas = o.alpha_grid.empty() ? std::vector<double>{0.5, 1.0, 2.0} : o.alpha_grid;
  const auto lengths = o.length_grid.empty() ? scaled(median, {0.1, 0.3, 1.0}) : o.length_grid;
  for (double a : alphas) {
    for (double l : lengths) out.push_back(KernelSpec::rational_quadratic(a, l));
  }
  return out;
}

double error_rate(const GpcModel& model, const Dataset& data, std::span<const int> signed_labels,
                  std::vector<double>* scores = nullptr) {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double p = predict_proba(model, data.features.row(static_cast<Eigen::Index>(i)).transpose());
    if (scores) scores->push_back(p);
    if ((p >= 0.5 ? 1 : -1) != signed_labels[i]) ++wrong;
  }
  return data.size() == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(data.size());
}

json auc_or_null(std::span<const double> scores, std::span<const int> labels) {
  const bool pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
  if (!pos || !neg) return nullptr;
  return roc_auc(scores, labels, 1);
}

std::vector<std::string> csv_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1) {
    cells.push_back(line.substr(start, pos - start));
  }
  cells.push_back(line.substr(start));
  return cells;
}

/// Distinct values of the label column of an `id,label` table.
std::vector<int> table_classes(const std::string& path) {
  CsvSchema schema;
  schema.id_column = "";
  schema.label_column = "label";
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  const Dataset table = read_csv(in, schema, path);
  return table.classes();
}

json norm_doc(const std::optional<NormStats>& norm) {
  if (!norm) return nullptr;
  return json::parse(norm_to_json(*norm));
}

}  // namespace

Vector GpcBundle::to_model_space(PointRef raw) const {
  if (raw.size() != model.dim()) {
    fail(ErrorKind::dimension_mismatch, "point has dimension " + std::to_string(raw.size()) + ", model expects " +
                                            std::to_string(model.dim()));
  }
  if (!norm) return raw;
  Vector out(raw.size());
  for (Eigen::Index j = 0; j < raw.size(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    out(j) = (raw(j) - norm->mean[k]) / norm->stddev[k];
  }
  return out;
}

Vector GpcBundle::gradient_to_raw(PointRef model_gradient) const {
  if (!norm) return model_gradient;
  Vector out(model_gradient.size());
  for (Eigen::Index j = 0; j < model_gradient.size(); ++j) {
    out(j) = model_gradient(j) / norm->stddev[static_cast<std::size_t>(j)];
  }
  return out;
}

ExplanationVector GpcBundle::explain(PointRef raw) const {
  ExplanationVector e = explain_gpc(model, to_model_space(raw));
  e.query = raw;
  e.gradient = gradient_to_raw(e.gradient);
  return e;
}

double GpcBundle::probability(PointRef raw) const { return predict_proba(model, to_model_space(raw)); }

Matrix GpcBundle::raw_training_inputs() const {
  Matrix x = model.train_x();
  if (!norm) return x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    x.col(j) = (x.col(j).array() * norm->stddev[k] + norm->mean[k]).matrix();
  }
  return x;
}

std::string bundle_to_json(const GpcBundle& bundle) {
  json doc;
  doc["format"] = "lexv-gpc";
  doc["feature_names"] = bundle.feature_names;
  doc["normalization"] = norm_doc(bundle.norm);
  doc["model"] = json::parse(gpc_to_json(bundle.model));
  return doc.dump(1) + "\n";
}

GpcBundle bundle_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("model file: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "lexv-gpc" || !doc.contains("model")) {
    fail(ErrorKind::parse, "model file: not a lexv GPC model");
  }
  GpcModel model = gpc_from_json(doc["model"].dump());
  std::vector<std::string> names;
  if (doc.contains("feature_names")) names = doc["feature_names"].get<std::vector<std::string>>();
  if (names.size() != static_cast<std::size_t>(model.dim())) {
    fail(ErrorKind::parse, "model file: feature names do not match the model dimension");
  }
  std::optional<NormStats> norm;
  if (doc.contains("normalization") && !doc["normalization"].is_null()) {
    norm = norm_from_json(doc["normalization"].dump());
    if (norm->feature_names != names) fail(ErrorKind::parse, "model file: normalization features differ");
  }
  return GpcBundle{std::move(model), std::move(names), std::move(norm)};
}

GpcBundle load_bundle(const std::string& path) { return bundle_from_json(read_text_file(path)); }

std::string cmd_fit_gpc(const FitGpcOptions& o, std::ostream& out) {
  require(o.data, "data");
  if (!(o.validation_fraction > 0.0 && o.validation_fraction < 1.0)) {
    fail(ErrorKind::invalid_argument, "validation fraction must lie in (0, 1)");
  }
  Dataset train = load_csv(o.data);
  std::optional<Dataset> test;
  if (!o.test.empty()) test = load_csv(o.test);
  if (test && test->feature_names != train.feature_names) {
    fail(ErrorKind::dimension_mismatch, "test set columns differ from the training set");
  }
  std::optional<NormStats> norm;
  if (o.normalize) {
    norm = fit_normalization(train);
    train = apply_normalization(train, *norm);
    if (test) test = apply_normalization(*test, *norm);
  }
  const std::vector<int> y = to_signed_labels(train.labels);
  const std::vector<KernelSpec> candidates = kernel_candidates(o, train.features);

  json scored = json::array();
  KernelSpec chosen = candidates.front();
  if (candidates.size() > 1) {
    const auto n_val = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(o.validation_fraction * static_cast<double>(train.size()))));
    if (n_val >= train.size()) fail(ErrorKind::invalid_argument, "training set too small for validation");
    Dataset signed_train = train;
    signed_train.labels = y;
    const Split split = split_stratified(signed_train, SplitOptions{train.size() - n_val, o.seed, false, std::nullopt});
    double best = -1.0;
    for (const KernelSpec& k : candidates) {
      const GpcModel m = ep_fit(split.train.features, split.train.labels, k);
      const double accuracy = 1.0 - error_rate(m, split.test, split.test.labels);
      scored.push_back({{"kernel", json::parse(kernel_to_json(k))}, {"validation_accuracy", accuracy}});
      if (accuracy > best) {
        best = accuracy;
        chosen = k;
      }
    }
  }
  GpcBundle bundle{ep_fit(train.features, y, chosen), train.feature_names, norm};

  json metrics;
  metrics["command"] = "fit-gpc";
  metrics["seed"] = o.seed;
  metrics["kernel"] = json::parse(kernel_to_json(chosen));
  metrics["candidates"] = scored;
  metrics["ep_sweeps"] = bundle.model.ep_sweeps();
  metrics["converged"] = bundle.model.converged();
  metrics["n_train"] = train.size();
  std::vector<double> scores;
  metrics["train_error"] = error_rate(bundle.model, train, y, &scores);
  metrics["train_auc"] = auc_or_null(scores, y);
  if (test) {
    const std::vector<int> ty = to_signed_labels(test->labels);
    scores.clear();
    metrics["n_test"] = test->size();
    metrics["test_error"] = error_rate(bundle.model, *test, ty, &scores);
    metrics["test_auc"] = auc_or_null(scores, ty);
  }
  if (!o.out.empty()) write_text_file(o.out, bundle_to_json(bundle));
  const std::string text = metrics.dump(1) + "\n";
  emit(o.metrics_out, out, [&](std::ostream& s) { s << text; });
  return text;
}

void cmd_explain(const ExplainOptions& o, std::ostream& out) {
  require(o.data, "data");
  const bool analytic = !o.model.empty();
  if (analytic == !o.oracle.empty()) {
    fail(ErrorKind::invalid_argument, "explain needs exactly one of --model and --oracle");
  }
  CsvSchema schema;
  schema.label_optional = true;
  const Dataset queries = load_csv(o.data, schema);
  std::vector<ExplanationVector> rows;
  if (analytic) {
    const GpcBundle bundle = load_bundle(o.model);
    if (queries.feature_names != bundle.feature_names) {
      fail(ErrorKind::dimension_mismatch, "query columns differ from the model's features");
    }
    for (std::size_t i = 0; i < queries.size(); ++i) {
      rows.push_back(bundle.explain(queries.features.row(static_cast<Eigen::Index>(i)).transpose()));
    }
  } else {
    const auto header = csv_header(o.data);
    const bool labelled = std::find(header.begin(), header.end(), "label") != header.end();
    const std::vector<int> declared = labelled ? queries.classes() : table_classes(o.oracle);
    const TableOracle g = table_oracle_load(o.oracle, queries, declared);
    std::optional<ParzenMimic> mimic;
    if (!o.mimic.empty()) {
      mimic = mimic_from_json(read_text_file(o.mimic));
    } else {
      double sigma = 0.0;
      if (o.sigma) {
        sigma = *o.sigma;
      } else {
        const auto grid = o.sigma_grid.empty() ? default_sigma_grid(queries.features) : o.sigma_grid;
        sigma = select_width_loo(queries.features, g.labels(), grid).sigma;
      }
      mimic.emplace(queries.features, g.labels(), sigma);
    }
    if (mimic->dim() != queries.dim()) fail(ErrorKind::dimension_mismatch, "mimic and queries differ in dimension");
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const Vector z = queries.features.row(static_cast<Eigen::Index>(i)).transpose();
      rows.push_back(o.hessian_fallback
                         ? explain_estimated_with_fallback(*mimic, z, g.labels()[i], o.hessian_threshold)
                         : explain_estimated(*mimic, z, g.labels()[i]));
    }
    if (!o.mimic_out.empty()) write_text_file(o.mimic_out, mimic_to_json(*mimic) + "\n");
  }
  if (o.smooth_window) {
    const Matrix smoothed = smooth_gradients(queries.features, gradient_matrix(rows), *o.smooth_window);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].gradient = smoothed.row(static_cast<Eigen::Index>(i)).transpose();
    }
  }
  emit(o.out, out, [&](std::ostream& s) { write_explanations(s, rows, queries.feature_names, queries.row_ids); });
}

void cmd_vector_field(const VectorFieldOptions& o, std::ostream& out) {
  if (o.model.empty() == o.mimic.empty()) {
    fail(ErrorKind::invalid_argument, "vector-field needs exactly one of --model and --mimic");
  }
  if (o.resolution < 2) fail(ErrorKind::invalid_argument, "resolution must be at least 2");
  std::optional<GpcBundle> bundle;
  std::optional<ParzenMimic> mimic;
  Matrix inputs;
  std::vector<std::string> names{"x1", "x2"};
  if (bundle = o.model.empty() ? std::nullopt : std::optional<GpcBundle>(load_bundle(o.model)); bundle) {
    inputs = bundle->raw_training_inputs();
    names = bundle->feature_names;
  } else {
    mimic = mimic_from_json(read_text_file(o.mimic));
    inputs = mimic->ref_x();
  }
  if (inputs.cols() != 2) fail(ErrorKind::invalid_argument, "vector-field needs a two-dimensional model");
  std::vector<double> box = o.grid;
  if (box.empty()) {
    box = {inputs.col(0).minCoeff(), inputs.col(0).maxCoeff(), inputs.col(1).minCoeff(), inputs.col(1).maxCoeff()};
  }
  if (box.size() != 4 || !(box[0] < box[1]) || !(box[2] < box[3])) {
    fail(ErrorKind::invalid_argument, "grid must be x_lo,x_hi,y_lo,y_hi with lo < hi");
  }
  const int r = o.resolution;
  emit(o.out, out, [&](std::ostream& s) {
    s << "ix,iy," << names[0] << ',' << names[1] << ",p,grad_" << names[0] << ",grad_" << names[1] << ",label\n";
    for (int iy = 0; iy < r; ++iy) {
      for (int ix = 0; ix < r; ++ix) {
        Vector z(2);
        z << box[0] + (box[1] - box[0]) * ix / (r - 1), box[2] + (box[3] - box[2]) * iy / (r - 1);
        ExplanationVector e;
        if (bundle) {
          e = bundle->explain(z);
        } else {
          e = explain_estimated(*mimic, z, mimic_predict(*mimic, z).label);
        }
        s << ix << ',' << iy << ',' << format_double(z(0)) << ',' << format_double(z(1)) << ','
          << format_double(e.predicted_probability) << ',' << format_double(e.gradient(0)) << ','
          << format_double(e.gradient(1)) << ',' << e.predicted_label << '\n';
      }
    }
  });
}

void cmd_morph(const MorphOptions& o, std::ostream& out) {
  require(o.model, "model");
  require(o.data, "data");
  if (o.steps < 0) fail(ErrorKind::invalid_argument, "steps must be non-negative");
  const GpcBundle bundle = load_bundle(o.model);
  CsvSchema schema;
  schema.label_optional = true;
  const Dataset queries = load_csv(o.data, schema);
  if (queries.feature_names != bundle.feature_names) {
    fail(ErrorKind::dimension_mismatch, "query columns differ from the model's features");
  }
  const double step = o.step_size ? *o.step_size : 0.1 * median_pairwise_distance(bundle.raw_training_inputs());
  if (!(step > 0.0)) fail(ErrorKind::invalid_argument, "step size must be positive");
  emit(o.out, out, [&](std::ostream& s) {
    s << "id,step";
    for (const auto& name : queries.feature_names) s << ',' << name;
    s << ",p,label\n";
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const Vector x0 = queries.features.row(static_cast<Eigen::Index>(i)).transpose();
      const ExplanationVector e = bundle.explain(x0);
      auto row = [&](int k, const Vector& x, double p) {
        s << queries.row_ids[i] << ',' << k;
        for (double v : x) s << ',' << format_double(v);
        s << ',' << format_double(p) << ',' << (p >= 0.5 ? 1 : -1) << '\n';
      };
      row(0, x0, e.predicted_probability);
      const double norm = e.gradient.norm();
      if (!(norm > 0.0)) continue;
      // Toward the other class: up the gradient from -1, down from +1.
      const Vector direction = (e.predicted_label == 1 ? -1.0 : 1.0) * e.gradient / norm;
      for (int k = 1; k <= o.steps; ++k) {
        const Vector x = x0 + (static_cast<double>(k) * step) * direction;
        const double p = bundle.probability(x);
        row(k, x, p);
        if ((p >= 0.5 ? 1 : -1) != e.predicted_label) break;
      }
    }
  });
}

void cmd_rank(const RankOptions& o, std::ostream& out) {
  require(o.data, "data");
  const ExplanationTable table = load_explanations(o.data);
  const FeatureRanking ranking = rank_features(table.rows, table.feature_names);
  emit(o.out, out, [&](std::ostream& s) {
    s << "feature,mean_gradient,rank\n";
    for (std::size_t j : ranking.order()) {
      s << ranking.names[j] << ',' << format_double(ranking.mean_gradient[j]) << ',' << ranking.rank[j] << '\n';
    }
  });
  if (!o.hist_out.empty()) {
    const Matrix g = gradient_matrix(table.rows);
    std::ofstream s(o.hist_out, std::ios::binary);
    if (!s) fail(ErrorKind::io, "cannot write '" + o.hist_out + "'");
    s << "feature,bin,lo,hi,count,clipped\n";
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const std::vector<double> values(g.col(j).begin(), g.col(j).end());
      const Histogram h = histogram(values, default_histogram_spec(values, o.bins, o.epsilon));
      const auto edges = h.edges();
      for (std::size_t b = 0; b < h.counts.size(); ++b) {
        s << table.feature_names[static_cast<std::size_t>(j)] << ',' << b << ',' << format_double(edges[b]) << ','
          << format_double(edges[b + 1]) << ',' << h.counts[b] << ',' << h.clipped << '\n';
      }
    }
  }
}

std::string cmd_compare(const CompareOptions& o, std::ostream& out) {
  require(o.data, "data");
  require(o.feature, "feature");
  require(o.groups, "groups");
  const ExplanationTable table = load_explanations(o.data);
  const auto it = std::find(table.feature_names.begin(), table.feature_names.end(), o.feature);
  if (it == table.feature_names.end()) fail(ErrorKind::not_found, "no feature named '" + o.feature + "'");
  const auto feature = static_cast<std::size_t>(it - table.feature_names.begin());

  CsvSchema schema;
  schema.id_column = "";
  schema.label_column = o.group_column;
  const Dataset groups_file = load_csv(o.groups, schema);
  const auto id_col = std::find(groups_file.feature_names.begin(), groups_file.feature_names.end(), "id");
  std::map<std::size_t, bool> member;
  for (std::size_t r = 0; r < groups_file.size(); ++r) {
    std::size_t id = groups_file.row_ids[r];
    if (id_col != groups_file.feature_names.end()) {
      const double v = groups_file.features(static_cast<Eigen::Index>(r),
                                            static_cast<Eigen::Index>(id_col - groups_file.feature_names.begin()));
      if (!(v >= 0.0) || v != std::floor(v)) fail(ErrorKind::parse, "groups: ids must be non-negative integers");
      id = static_cast<std::size_t>(v);
    }
    const int g = groups_file.labels[r];
    if (g != 0 && g != 1) fail(ErrorKind::parse, "group column must hold 0 or 1");
    if (!member.emplace(id, g == 1).second) fail(ErrorKind::parse, "groups: duplicate id " + std::to_string(id));
  }
  std::vector<bool> mask;
  for (std::size_t id : table.ids) {
    const auto m = member.find(id);
    if (m == member.end()) fail(ErrorKind::not_found, "no group entry for explanation id " + std::to_string(id));
    mask.push_back(m->second);
  }
  const Matrix g = gradient_matrix(table.rows);
  std::vector<double> pooled(g.col(static_cast<Eigen::Index>(feature)).begin(),
                             g.col(static_cast<Eigen::Index>(feature)).end());
  const HistogramSpec spec = default_histogram_spec(pooled, o.bins, o.epsilon);
  const GroupComparison c = compare_groups(g, feature, mask, &spec);

  json doc;
  doc["command"] = "compare";
  doc["feature"] = o.feature;
  doc["n_in"] = c.in_group.total();
  doc["n_out"] = c.out_group.total();
  doc["ks"] = {{"statistic", c.ks.statistic}, {"p_value", c.ks.p_value}};
  doc["kld"] = c.kld;
  doc["epsilon"] = spec.epsilon;
  doc["histogram"] = {{"edges", c.in_group.edges()},
                      {"in", c.in_group.counts},
                      {"out", c.out_group.counts},
                      {"clipped_in", c.in_group.clipped},
                      {"clipped_out", c.out_group.clipped}};
  const std::string text = doc.dump(1) + "\n";
  emit(o.out, out, [&](std::ostream& s) { s << text; });
  return text;
}

std::string cmd_iris(const IrisCommandOptions& o, std::ostream& out) {
  if (o.runs < 1) fail(ErrorKind::invalid_argument, "runs must be at least 1");
  if (!o.out.empty()) std::filesystem::create_directories(o.out);
  json runs = json::array();
  std::vector<double> test_errors;
  std::map<int, int> k_counts;
  for (int r = 0; r < o.runs; ++r) {
    IrisOptions options;
    options.seed = o.seed + static_cast<std::uint64_t>(r);
    options.k_candidates = o.k_grid;
    options.sigma_candidates = o.sigma_grid;
    const IrisRun run = run_iris(options);
    test_errors.push_back(run.test_error);
    ++k_counts[run.k];
    runs.push_back({{"seed", options.seed},
                    {"k", run.k},
                    {"k_candidates", run.k_candidates},
                    {"k_loo_errors", run.k_loo_errors},
                    {"train_error", run.train_error},
                    {"test_error", run.test_error},
                    {"sigma", run.width.sigma},
                    {"mimic_agreement", run.mimic_agreement},
                    {"n_train", run.split.train.size()},
                    {"n_test", run.split.test.size()}});
    if (!o.out.empty()) {
      const auto dir = std::filesystem::path(o.out) / ("run_" + std::to_string(r));
      std::filesystem::create_directories(dir);
      save_explanations(dir / "explanations.csv", run.explanations, run.split.test.feature_names,
                        run.split.test.row_ids);
      std::ofstream points(dir / "test_points.csv", std::ios::binary);
      if (!points) fail(ErrorKind::io, "cannot write '" + (dir / "test_points.csv").string() + "'");
      points << "id,species,label,knn_label\n";
      for (std::size_t i = 0; i < run.split.test.size(); ++i) {
        points << run.split.test.row_ids[i] << ',' << run.test_species[i] << ',' << run.split.test.labels[i] << ','
               << run.test_predictions[i] << '\n';
      }
      write_text_file(dir / "normalization.json", norm_to_json(run.norm) + "\n");
    }
  }
  std::vector<double> sorted = test_errors;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  json counts = json::object();
  for (const auto& [k, c] : k_counts) counts[std::to_string(k)] = c;
  json summary{{"command", "iris"}, {"seed", o.seed}, {"runs", runs}, {"median_test_error", median},
               {"k_counts", counts}};
  const std::string text = summary.dump(1) + "\n";
  if (!o.out.empty()) write_text_file(std::filesystem::path(o.out) / "summary.json", text);
  out << text;
  return text;
}

}  // namespace lexv::tools
