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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lexv/analysis.hpp"
#include "lexv/classifiers.hpp"
#include "lexv/data.hpp"
#include "lexv/explanation_io.hpp"
#include "lexv/mimic.hpp"
#include "lexv/serialization.hpp"
#include "lexv_tools/cli.hpp"
#include "lexv_tools/commands.hpp"

namespace lexv::tools {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lexv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    save_csv(path("train.csv"), gen_triangle(40, 1));
    save_csv(path("test.csv"), gen_triangle(20, 2));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void fit(const std::vector<std::string>& extra = {}) {
    std::vector<std::string> args{"fit-gpc", "--data", path("train.csv"), "--test", path("test.csv"),
                                  "--out", path("model.json"), "--seed", "3"};
    args.insert(args.end(), extra.begin(), extra.end());
    const Result r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir_;
};

TEST_F(CliTest, FitGpcReportsMetrics) {
  const Result r = run({"fit-gpc", "--data", path("train.csv"), "--test", path("test.csv"), "--out",
                        path("model.json"), "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json m = json::parse(r.out);
  EXPECT_EQ(m["seed"], 3);
  EXPECT_EQ(m["n_train"], 80);
  EXPECT_EQ(m["n_test"], 40);
  EXPECT_EQ(m["candidates"].size(), 7U);
  EXPECT_LE(m["test_error"].get<double>(), 0.1);
  EXPECT_GE(m["test_auc"].get<double>(), 0.9);
  EXPECT_TRUE(fs::exists(path("model.json")));
  const Result again = run({"fit-gpc", "--data", path("train.csv"), "--test", path("test.csv"), "--out",
                            path("model2.json"), "--seed", "3"});
  EXPECT_EQ(again.out, r.out);
  EXPECT_EQ(slurp(path("model.json")), slurp(path("model2.json")));
}

TEST_F(CliTest, FitGpcAucMatchesPairCount) {
  fit();
  const GpcBundle b = load_bundle(path("model.json"));
  const Dataset test = load_csv(path("test.csv"));
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    for (std::size_t j = 0; j < test.size(); ++j) {
      if (test.labels[i] != 1 || test.labels[j] != -1) continue;
      const double pi = b.probability(test.features.row(static_cast<Eigen::Index>(i)).transpose());
      const double pj = b.probability(test.features.row(static_cast<Eigen::Index>(j)).transpose());
      pairs += 1.0;
      wins += pi > pj ? 1.0 : (pi == pj ? 0.5 : 0.0);
    }
  }
  const Result r = run({"fit-gpc", "--data", path("train.csv"), "--test", path("test.csv"), "--seed", "3"});
  EXPECT_NEAR(json::parse(r.out)["test_auc"].get<double>(), wins / pairs, 1e-12);
}

TEST_F(CliTest, LinearlySeparatedDataHasUnitAuc) {
  Dataset d;
  d.features = Matrix(20, 1);
  for (int i = 0; i < 20; ++i) {
    d.features(i, 0) = i < 10 ? -1.0 - 0.1 * i : 1.0 + 0.1 * i;
    d.labels.push_back(i < 10 ? -1 : 1);
    d.row_ids.push_back(static_cast<std::size_t>(i));
  }
  d.feature_names = {"x"};
  save_csv(path("lin.csv"), d);
  const Result r = run({"fit-gpc", "--data", path("lin.csv"), "--kernel", "linear"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["train_auc"].get<double>(), 1.0);
}

TEST_F(CliTest, ExplainMatchesLibraryBitExactly) {
  fit({"--normalize"});
  const Result r = run({"explain", "--data", path("test.csv"), "--model", path("model.json"), "--out", path("ex.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const ExplanationTable t = load_explanations(path("ex.csv"));
  const Dataset test = load_csv(path("test.csv"));
  ASSERT_EQ(t.rows.size(), test.size());
  const GpcBundle b = load_bundle(path("model.json"));
  for (std::size_t i = 0; i < test.size(); ++i) {
    const ExplanationVector e = b.explain(test.features.row(static_cast<Eigen::Index>(i)).transpose());
    EXPECT_EQ(t.rows[i].gradient, e.gradient);
    EXPECT_EQ(t.rows[i].predicted_probability, e.predicted_probability);
    EXPECT_EQ(t.rows[i].source, ExplanationSource::analytic_gpc);
  }
}

TEST_F(CliTest, NormalizedModelExplainsInRawCoordinates) {
  fit({"--normalize"});
  const GpcBundle b = load_bundle(path("model.json"));
  ASSERT_TRUE(b.norm.has_value());
  Vector x(2);
  x << 0.31, 0.44;
  const Vector g = b.explain(x).gradient;
  for (Eigen::Index j = 0; j < 2; ++j) {
    Vector up = x;
    Vector down = x;
    up(j) += 1e-5;
    down(j) -= 1e-5;
    EXPECT_NEAR(g(j), (b.probability(up) - b.probability(down)) / 2e-5, 1e-5 * std::max(1.0, std::abs(g(j))));
  }
}

TEST_F(CliTest, EstimatedExplanationsMatchLibrary) {
  const Dataset train = load_csv(path("train.csv"));
  const KnnClassifier knn(train.features, train.labels, 3);
  save_prediction_table(path("oracle.csv"), knn, train);
  const Result r = run({"explain", "--data", path("train.csv"), "--oracle", path("oracle.csv"), "--sigma", "0.1",
                        "--mimic-out", path("mimic.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const ExplanationTable t = read_explanations(in);
  ASSERT_EQ(t.rows.size(), train.size());
  std::vector<int> g;
  for (Eigen::Index i = 0; i < train.features.rows(); ++i) g.push_back(knn.predict(train.features.row(i).transpose()));
  const ParzenMimic mimic(train.features, g, 0.1);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const ExplanationVector e =
        explain_estimated(mimic, train.features.row(static_cast<Eigen::Index>(i)).transpose(), g[i]);
    EXPECT_EQ(t.rows[i].gradient, e.gradient);
    EXPECT_EQ(t.rows[i].source, ExplanationSource::parzen_mimic);
    EXPECT_EQ(t.rows[i].predicted_label, g[i]);
  }
  EXPECT_EQ(mimic_from_json(read_text_file(path("mimic.json"))).ref_labels(), g);
}

TEST_F(CliTest, ExplainSmoothingAndFallbackFlags) {
  const Dataset train = load_csv(path("train.csv"));
  std::ofstream table(path("oracle.csv"));
  table << "id,label\n";
  for (std::size_t i = 0; i < train.size(); ++i) table << i << ',' << train.labels[i] << '\n';
  table.close();
  const Result plain = run({"explain", "--data", path("train.csv"), "--oracle", path("oracle.csv"), "--sigma", "0.1"});
  const Result smooth = run({"explain", "--data", path("train.csv"), "--oracle", path("oracle.csv"), "--sigma", "0.1",
                             "--smooth-window", "0.2"});
  ASSERT_EQ(smooth.code, 0) << smooth.err;
  std::istringstream a(plain.out);
  std::istringstream b(smooth.out);
  const ExplanationTable ta = read_explanations(a);
  const ExplanationTable tb = read_explanations(b);
  const Matrix expected = smooth_gradients(train.features, gradient_matrix(ta.rows), 0.2);
  for (std::size_t i = 0; i < tb.rows.size(); ++i) {
    EXPECT_EQ(tb.rows[i].gradient, Vector(expected.row(static_cast<Eigen::Index>(i)).transpose()));
  }
  const Result fallback = run({"explain", "--data", path("train.csv"), "--oracle", path("oracle.csv"), "--sigma",
                               "0.1", "--hessian-fallback", "--hessian-threshold", "1e300"});
  ASSERT_EQ(fallback.code, 0) << fallback.err;
  EXPECT_NE(fallback.out.find("hessian-fallback"), std::string::npos);
}

TEST_F(CliTest, VectorFieldGrid) {
  fit();
  const Result r = run({"vector-field", "--model", path("model.json"), "--grid", "0,1,0,1", "--resolution", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "ix,iy,x1,x2,p,grad_x1,grad_x2,label");
  const GpcBundle b = load_bundle(path("model.json"));
  int count = 0;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 8U);
    EXPECT_GE(v[4], 0.0);
    EXPECT_LE(v[4], 1.0);
    Vector x(2);
    x << v[2], v[3];
    const ExplanationVector e = b.explain(x);
    EXPECT_EQ(e.gradient(0), v[5]);
    EXPECT_EQ(e.gradient(1), v[6]);
    ++count;
  }
  EXPECT_EQ(count, 25);
}

TEST_F(CliTest, MorphStopsAtFlip) {
  fit();
  const Result r = run({"morph", "--model", path("model.json"), "--data", path("test.csv"), "--steps", "200",
                        "--step-size", "0.02", "--out", path("morph.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset test = load_csv(path("test.csv"));
  std::ifstream in(path("morph.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "id,step,x1,x2,p,label");
  std::map<std::size_t, std::vector<std::vector<double>>> paths;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
    paths[static_cast<std::size_t>(v[0])].push_back(v);
  }
  ASSERT_EQ(paths.size(), test.size());
  const GpcBundle b = load_bundle(path("model.json"));
  for (const auto& [id, rows] : paths) {
    EXPECT_EQ(rows[0][2], test.features(static_cast<Eigen::Index>(id), 0));
    EXPECT_EQ(rows[0][3], test.features(static_cast<Eigen::Index>(id), 1));
    for (const auto& row : rows) {
      Vector x(2);
      x << row[2], row[3];
      EXPECT_EQ(b.probability(x), row[4]);
    }
    const bool flipped = rows.back()[5] != rows.front()[5];
    if (flipped) {
      EXPECT_EQ(rows.front()[4] >= 0.5, rows.back()[4] < 0.5);
      for (std::size_t k = 1; k + 1 < rows.size(); ++k) EXPECT_EQ(rows[k][5], rows.front()[5]);
    } else {
      EXPECT_EQ(rows.size(), 201U);
    }
  }
}

TEST_F(CliTest, MorphWithZeroStepsEchoesInput) {
  fit();
  const Result r = run({"morph", "--model", path("model.json"), "--data", path("test.csv"), "--steps", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset test = load_csv(path("test.csv"));
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::size_t n = 0;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
    EXPECT_EQ(v[1], 0.0);
    EXPECT_EQ(v[2], test.features(static_cast<Eigen::Index>(n), 0));
    EXPECT_EQ(v[3], test.features(static_cast<Eigen::Index>(n), 1));
    ++n;
  }
  EXPECT_EQ(n, test.size());
}

TEST_F(CliTest, RankAndCompare) {
  const Dataset d = gen_immune_subgroup(400, 2);
  std::vector<std::size_t> first(200);
  std::vector<std::size_t> second(200);
  for (std::size_t i = 0; i < 200; ++i) {
    first[i] = i;
    second[i] = 200 + i;
  }
  Dataset train = d.subset(first);
  Dataset queries = d.subset(second);
  queries.aux.clear();
  train.aux.clear();
  save_csv(path("immune_train.csv"), train);
  save_csv(path("immune_queries.csv"), queries);
  {
    std::ofstream groups(path("groups.csv"));
    groups << "id,group\n";
    for (std::size_t i = 0; i < 200; ++i) groups << i << ',' << d.aux.at("group")[200 + i] << '\n';
  }
  ASSERT_EQ(run({"fit-gpc", "--data", path("immune_train.csv"), "--w-grid", "0.5", "--out", path("immune.json")}).code, 0);
  ASSERT_EQ(run({"explain", "--data", path("immune_queries.csv"), "--model", path("immune.json"), "--out",
                 path("immune_ex.csv")}).code, 0);
  const Result rank = run({"rank", "--data", path("immune_ex.csv"), "--hist-out", path("hist.csv")});
  ASSERT_EQ(rank.code, 0) << rank.err;
  EXPECT_EQ(rank.out.substr(0, rank.out.find('\n')), "feature,mean_gradient,rank");
  EXPECT_NE(rank.out.find("\nsignal,"), std::string::npos);
  const Result cmp = run({"compare", "--data", path("immune_ex.csv"), "--feature", "signal", "--groups", path("groups.csv")});
  ASSERT_EQ(cmp.code, 0) << cmp.err;
  const json doc = json::parse(cmp.out);
  const ExplanationTable t = load_explanations(path("immune_ex.csv"));
  std::vector<bool> mask;
  for (std::size_t i = 0; i < 200; ++i) mask.push_back(d.aux.at("group")[200 + i] == 1.0);
  const GroupComparison c = compare_groups(t.rows, 0, mask);
  EXPECT_EQ(doc["ks"]["statistic"].get<double>(), c.ks.statistic);
  EXPECT_EQ(doc["ks"]["p_value"].get<double>(), c.ks.p_value);
  EXPECT_EQ(doc["kld"].get<double>(), c.kld);
  EXPECT_EQ(doc["n_in"].get<std::size_t>() + doc["n_out"].get<std::size_t>(), 200U);
}

TEST_F(CliTest, IrisIsByteIdenticalAcrossRuns) {
  const Result a = run({"iris", "--seed", "2", "--runs", "2", "--out", path("iris_a")});
  const Result b = run({"iris", "--seed", "2", "--runs", "2", "--out", path("iris_b")});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  for (const char* f : {"summary.json", "run_0/explanations.csv", "run_1/test_points.csv", "run_1/normalization.json"}) {
    EXPECT_EQ(slurp(fs::path(path("iris_a")) / f), slurp(fs::path(path("iris_b")) / f)) << f;
  }
  const json s = json::parse(a.out);
  EXPECT_EQ(s["runs"].size(), 2U);
  EXPECT_EQ(s["runs"][0]["n_train"], 100);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  {
    std::ofstream cfg(path("cfg.json"));
    cfg << json{{"command", "fit-gpc"}, {"data", path("train.csv")}, {"seed", 9}, {"w_grid", {5.0, 50.0}},
                {"normalize", true}, {"steps", 4}}
               .dump();
  }
  const Result from_file = run({"--config", path("cfg.json")});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const json m = json::parse(from_file.out);
  EXPECT_EQ(m["seed"], 9);
  EXPECT_EQ(m["candidates"].size(), 2U);
  const Result overridden = run({"fit-gpc", "--config", path("cfg.json"), "--seed", "4"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(json::parse(overridden.out)["seed"], 4);
}

TEST(MergeConfig, FlagsWinAndTypesFlatten) {
  const std::vector<std::string> merged =
      merge_config({"explain", "--sigma", "2"}, R"({"sigma": 1, "sigma_grid": [0.5, 1.5], "hessian-fallback": true,
                                                    "smooth_window": null, "out": "x.csv"})");
  const std::vector<std::string> expected{"explain", "--sigma", "2", "--hessian-fallback", "--out", "x.csv",
                                          "--sigma-grid", "0.5,1.5"};
  std::vector<std::string> a = merged;
  std::vector<std::string> b = expected;
  EXPECT_EQ(a.size(), b.size());
  EXPECT_NE(std::find(a.begin(), a.end(), "0.5,1.5"), a.end());
  EXPECT_EQ(std::count(a.begin(), a.end(), "--sigma"), 1);
}

TEST(CliErrors, MachineReadableFailures) {
  const Result usage = run({});
  EXPECT_EQ(usage.code, 2);
  EXPECT_EQ(json::parse(usage.err)["error"]["kind"], "usage");
  const Result unknown = run({"explain", "--data", "x.csv", "--bogus"});
  EXPECT_EQ(unknown.code, 2);
  const Result missing = run({"explain", "--data", "/nonexistent.csv", "--model", "/nonexistent.json"});
  EXPECT_EQ(missing.code, 1);
  const json doc = json::parse(missing.err);
  EXPECT_EQ(doc["error"]["kind"], "io");
  EXPECT_FALSE(doc["error"]["message"].get<std::string>().empty());
  const Result both = run({"explain", "--data", "a.csv"});
  EXPECT_EQ(both.code, 1);
  EXPECT_EQ(json::parse(both.err)["error"]["kind"], "invalid_argument");
}

TEST(CliBinary, ExitCodes) {
  const char* binary = std::getenv("LEXV_BINARY");
  if (binary == nullptr) GTEST_SKIP() << "LEXV_BINARY not set";
  const std::string quiet = " >/dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system((std::string(binary) + " --help" + quiet).c_str())), 0);
  EXPECT_EQ(WEXITSTATUS(std::system((std::string(binary) + quiet).c_str())), 2);
  EXPECT_EQ(WEXITSTATUS(std::system((std::string(binary) + " rank --data /nonexistent.csv" + quiet).c_str())), 1);
}

TEST(CliHelp, PrintsUsage) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("fit-gpc"), std::string::npos);
}

}  // namespace
}  // namespace lexv::tools
