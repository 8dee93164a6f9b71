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

#include "lexv_tools/cli.hpp"

#include <algorithm>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexv/data.hpp"
#include "lexv/error.hpp"
#include "lexv/serialization.hpp"
#include "lexv_tools/commands.hpp"

namespace lexv::tools {
namespace {

using nlohmann::json;

void print_error(std::ostream& err, std::string_view kind, const std::string& message) {
  const json doc{{"error", {{"kind", kind}, {"message", message}}}};
  err << doc.dump() << '\n';
}

std::string scalar_text(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer() || value.is_number_unsigned()) return value.dump();
  if (value.is_number()) return format_double(value.get<double>());
  fail(ErrorKind::parse, "config: unsupported value " + value.dump());
}

/// Value of `--config`, removed from `args`.
std::string take_config(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config", 1, 0);
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  return path;
}

template <typename T>
void optional_value(CLI::Option* option, const T& value, std::optional<T>& target) {
  if (option->count() > 0) target = value;
}

json parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::parse, "config: top level must be an object");
  return doc;
}

std::string flag_of(const std::string& key) {
  std::string flag = "--" + key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return flag;
}

/// Picks the subcommand from the config's "command" entry when the arguments
/// name none, then merges the entries that subcommand understands.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args, const std::string& text) {
  json doc = parse_config(text);
  if ((args.empty() || args.front().rfind("-", 0) == 0) && doc.contains("command")) {
    args.insert(args.begin(), doc["command"].get<std::string>());
  }
  if (args.empty()) return args;
  const CLI::App* sub = app.get_subcommand_no_throw(args.front());
  if (sub == nullptr) return args;
  json known = json::object();
  for (const auto& [key, value] : doc.items()) {
    if (sub->get_option_no_throw(flag_of(key)) != nullptr) known[key] = value;
  }
  return merge_config(args, known.dump());
}

}  // namespace

std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& config_json) {
  const json doc = parse_config(config_json);
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));
  }
  std::vector<std::string> out = args;
  for (const auto& [key, value] : doc.items()) {
    const std::string flag = flag_of(key);
    if (flag == "--command" || given.count(flag) > 0) continue;
    if (value.is_null()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
      continue;
    }
    std::string text;
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) text += (i ? "," : "") + scalar_text(value[i]);
    } else {
      text = scalar_text(value);
    }
    out.push_back(flag);
    out.push_back(text);
  }
  return out;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local explanation vectors for classifier decisions", "lexv"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");
  app.add_option("--config", "JSON file mirroring the flags; flags override it");

  FitGpcOptions fit;
  auto* fit_cmd = app.add_subcommand("fit-gpc", "Train a GP classifier by grid search");
  fit_cmd->add_option("--data", fit.data, "Training CSV")->required();
  fit_cmd->add_option("--test", fit.test, "Test CSV for reported metrics");
  fit_cmd->add_option("--kernel", fit.kernel, "rbf, linear or rq")->capture_default_str();
  fit_cmd->add_option("--w-grid", fit.w_grid, "RBF widths")->delimiter(',');
  fit_cmd->add_option("--alpha-grid", fit.alpha_grid, "Rational quadratic shapes")->delimiter(',');
  fit_cmd->add_option("--length-grid", fit.length_grid, "Rational quadratic length scales")->delimiter(',');
  fit_cmd->add_option("--validation-fraction", fit.validation_fraction, "Held-out share for the grid search")
      ->capture_default_str();
  fit_cmd->add_flag("--normalize", fit.normalize, "Standardize with training statistics");
  fit_cmd->add_option("--seed", fit.seed, "Validation split seed")->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "Model file");
  fit_cmd->add_option("--metrics-out", fit.metrics_out, "Metrics JSON (default stdout)");

  ExplainOptions explain;
  double explain_sigma = 0.0;
  double explain_window = 0.0;
  auto* ex_cmd = app.add_subcommand("explain", "Explanation vectors for the rows of a CSV");
  ex_cmd->add_option("--data", explain.data, "Query CSV")->required();
  ex_cmd->add_option("--model", explain.model, "GPC model file (analytic)");
  ex_cmd->add_option("--oracle", explain.oracle, "id,label table of the classifier's predictions (estimated)");
  ex_cmd->add_option("--mimic", explain.mimic, "Stored Parzen mimic");
  ex_cmd->add_option("--mimic-out", explain.mimic_out, "Write the fitted mimic");
  auto* sigma_opt = ex_cmd->add_option("--sigma", explain_sigma, "Fixed mimic width");
  ex_cmd->add_option("--sigma-grid", explain.sigma_grid, "Candidate mimic widths")->delimiter(',');
  auto* window_opt = ex_cmd->add_option("--smooth-window", explain_window, "Half-width of gradient smoothing");
  ex_cmd->add_flag("--hessian-fallback", explain.hessian_fallback, "Use the Hessian direction at zero gradients");
  ex_cmd->add_option("--hessian-threshold", explain.hessian_threshold, "Gradient norm treated as zero")
      ->capture_default_str();
  ex_cmd->add_option("--out", explain.out, "Explanations CSV (default stdout)");

  VectorFieldOptions field;
  auto* vf_cmd = app.add_subcommand("vector-field", "Probability and gradient on a 2-D grid");
  vf_cmd->add_option("--model", field.model, "GPC model file");
  vf_cmd->add_option("--mimic", field.mimic, "Stored Parzen mimic");
  vf_cmd->add_option("--grid", field.grid, "x_lo,x_hi,y_lo,y_hi")->delimiter(',');
  vf_cmd->add_option("--resolution", field.resolution, "Nodes per axis")->capture_default_str();
  vf_cmd->add_option("--out", field.out, "Grid CSV (default stdout)");

  MorphOptions morph;
  double morph_step = 0.0;
  auto* mo_cmd = app.add_subcommand("morph", "Walk queries along their explanation vectors");
  mo_cmd->add_option("--model", morph.model, "GPC model file")->required();
  mo_cmd->add_option("--data", morph.data, "Query CSV")->required();
  mo_cmd->add_option("--steps", morph.steps, "Maximum number of steps")->capture_default_str();
  auto* step_opt = mo_cmd->add_option("--step-size", morph_step, "Step length");
  mo_cmd->add_option("--out", morph.out, "Trajectory CSV (default stdout)");

  RankOptions rank;
  auto* rk_cmd = app.add_subcommand("rank", "Rank features by mean explanation component");
  rk_cmd->add_option("--data", rank.data, "Explanations CSV")->required();
  rk_cmd->add_option("--out", rank.out, "Ranking CSV (default stdout)");
  rk_cmd->add_option("--hist-out", rank.hist_out, "Per-feature histogram CSV");
  rk_cmd->add_option("--bins", rank.bins, "Histogram bins")->capture_default_str();
  rk_cmd->add_option("--epsilon", rank.epsilon, "Pseudo-count per bin")->capture_default_str();

  CompareOptions compare;
  auto* cp_cmd = app.add_subcommand("compare", "Compare one feature's explanations between two groups");
  cp_cmd->add_option("--data", compare.data, "Explanations CSV")->required();
  cp_cmd->add_option("--feature", compare.feature, "Feature name")->required();
  cp_cmd->add_option("--groups", compare.groups, "CSV with id and group columns")->required();
  cp_cmd->add_option("--group-column", compare.group_column, "0/1 membership column")->capture_default_str();
  cp_cmd->add_option("--bins", compare.bins, "Histogram bins")->capture_default_str();
  cp_cmd->add_option("--epsilon", compare.epsilon, "Pseudo-count per bin")->capture_default_str();
  cp_cmd->add_option("--out", compare.out, "Comparison JSON (default stdout)");

  IrisCommandOptions iris;
  auto* ir_cmd = app.add_subcommand("iris", "Versicolor-vs-rest k-NN pipeline on the bundled Iris data");
  ir_cmd->add_option("--seed", iris.seed, "Seed of the first run")->capture_default_str();
  ir_cmd->add_option("--runs", iris.runs, "Number of runs, seeds seed..seed+runs-1")->capture_default_str();
  ir_cmd->add_option("--k-grid", iris.k_grid, "Candidate k values")->delimiter(',');
  ir_cmd->add_option("--sigma-grid", iris.sigma_grid, "Candidate mimic widths")->delimiter(',');
  ir_cmd->add_option("--out", iris.out, "Output directory");

  try {
    std::vector<std::string> args = raw_args;
    const std::string config = take_config(args);
    if (!config.empty()) args = apply_config(app, args, read_text_file(config));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return 2;
  } catch (const Error& e) {
    print_error(err, to_string(e.kind()), e.what());
    return 1;
  }

  try {
    if (*fit_cmd) {
      cmd_fit_gpc(fit, out);
    } else if (*ex_cmd) {
      optional_value(sigma_opt, explain_sigma, explain.sigma);
      optional_value(window_opt, explain_window, explain.smooth_window);
      cmd_explain(explain, out);
    } else if (*vf_cmd) {
      cmd_vector_field(field, out);
    } else if (*mo_cmd) {
      optional_value(step_opt, morph_step, morph.step_size);
      cmd_morph(morph, out);
    } else if (*rk_cmd) {
      cmd_rank(rank, out);
    } else if (*cp_cmd) {
      cmd_compare(compare, out);
    } else if (*ir_cmd) {
      cmd_iris(iris, out);
    }
  } catch (const Error& e) {
    print_error(err, to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return 1;
  }
  out.flush();
  return 0;
}

}  // namespace lexv::tools
