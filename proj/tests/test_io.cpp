// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "cptest/config.hpp"
#include "cptest/csv.hpp"
#include "cptest/serialize.hpp"
#include "test_util.hpp"

namespace cptest {
namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("cptest_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write_file(const std::string& name, const std::string& content) {
    const std::string path = (dir_ / name).string();
    std::ofstream out(path);
    out << content;
    return path;
  }

  std::filesystem::path dir_;
};

using CsvTest = TempDir;
using ConfigTest = TempDir;

TEST_F(CsvTest, LoadsPlainMatrix) {
  const std::string path = write_file("m.csv", "1,2\n3,4\n5,6\n");
  DataMatrix data = load_csv(path);
  EXPECT_EQ(data.n(), 3);
  EXPECT_EQ(data.p(), 2);
  EXPECT_EQ(data.values(2, 1), 6.0);
}

TEST_F(CsvTest, HeaderIsSkipped) {
  const std::string path = write_file("h.csv", "a,b\n1,2\n3,4\n");
  CsvSchema schema;
  schema.has_header = true;
  DataMatrix data = load_csv(path, schema);
  EXPECT_EQ(data.n(), 2);
  EXPECT_EQ(data.values(0, 0), 1.0);
}

TEST_F(CsvTest, NanCellNamesTheCell) {
  const std::string path = write_file("nan.csv", "1,2\n3,NaN\n");
  try {
    load_csv(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos);
  }
}

TEST_F(CsvTest, NonNumericCellNamesTheCell) {
  const std::string path = write_file("bad.csv", "1,2\nx,4\n");
  try {
    load_csv(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("column 1"), std::string::npos);
  }
}

TEST_F(CsvTest, RaggedRowIsRejected) {
  const std::string path = write_file("ragged.csv", "1,2\n3,4,5\n");
  EXPECT_THROW(load_csv(path), ParseError);
}

TEST_F(CsvTest, EmptyFileIsRejected) {
  const std::string path = write_file("empty.csv", "");
  EXPECT_THROW(load_csv(path), ParseError);
  EXPECT_THROW(load_csv((dir_ / "missing.csv").string()), ParseError);
}

TEST_F(CsvTest, RoundTripIsBitwise) {
  std::mt19937_64 engine(61);
  DataMatrix data{testutil::random_matrix(12, 5, engine, 3.7)};
  const std::string path = (dir_ / "rt.csv").string();
  save_csv(data, path);
  DataMatrix back = load_csv(path);
  ASSERT_EQ(back.n(), data.n());
  ASSERT_EQ(back.p(), data.p());
  EXPECT_EQ((back.values - data.values).cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(CsvTest, TransposeReadsColumnsAsObservations) {
  const std::string path = write_file("t.csv", "1,2,3\n4,5,6\n");
  CsvSchema schema;
  schema.transpose = true;
  DataMatrix data = load_csv(path, schema);
  EXPECT_EQ(data.n(), 3);
  EXPECT_EQ(data.p(), 2);
  EXPECT_EQ(data.values(0, 1), 4.0);
}

TEST_F(ConfigTest, JsonScenarioRoundTrip) {
  const std::string path = write_file("s.json", R"({
    "id": "h1_demo",
    "noise": "student_t",
    "nu": 6,
    "cov": "ar",
    "rho": 0.8,
    "n": 60,
    "p": 10,
    "m": 30,
    "theta_max": 0.75,
    "B": 100,
    "reps": 50,
    "alpha": 0.1,
    "seed": 42,
    "kernel": "sign"
  })");
  ScenarioConfig c = scenario_from_json(load_config_file(path));
  EXPECT_EQ(c.id, "h1_demo");
  EXPECT_EQ(c.noise.kind, NoiseSpec::Kind::StudentT);
  EXPECT_EQ(c.cov.kind, CovarianceSpec::Kind::AR);
  EXPECT_EQ(c.n, 60);
  EXPECT_EQ(c.p, 10);
  ASSERT_TRUE(c.m.has_value());
  EXPECT_EQ(*c.m, 30);
  EXPECT_EQ(c.theta(0), 0.75);
  EXPECT_EQ(c.theta.size(), 10);
  EXPECT_EQ(c.B, 100);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.kernel, KernelKind::Sign);
}

TEST_F(ConfigTest, FlatTomlScenario) {
  const std::string path = write_file("s.toml", R"(# null scenario
id = "h0_demo"
noise = "contaminated_gaussian"
eps = 0.2
nu = 2        # contamination scale
cov = "compound"
load = 0.8
diag = 0.2
n = 80
p = 12
B = 150
reps = 40
alpha = 0.05
seed = 7
kernel = "linear"
)");
  ScenarioConfig c = scenario_from_json(load_config_file(path));
  EXPECT_EQ(c.id, "h0_demo");
  EXPECT_EQ(c.noise.kind, NoiseSpec::Kind::ContaminatedGaussian);
  EXPECT_EQ(c.noise.eps, 0.2);
  EXPECT_EQ(c.cov.kind, CovarianceSpec::Kind::Compound);
  EXPECT_EQ(c.n, 80);
  EXPECT_EQ(c.p, 12);
  EXPECT_TRUE(c.is_null());
  EXPECT_EQ(c.seed, 7u);
}

TEST_F(ConfigTest, TomlArraysAndErrors) {
  const std::string path = write_file("g.toml", R"(
id = "grid"
n = 50
p = 4
theta_grid = [0, 0.5, 1.0]
m_grid = [5, 25]
)");
  nlohmann::json j = load_config_file(path);
  PowerGrid grid = power_grid_from_json(j);
  EXPECT_EQ(grid.theta_max.size(), 3u);
  EXPECT_EQ(grid.m.size(), 2u);
  EXPECT_EQ(grid.theta_max[1], 0.5);
  EXPECT_EQ(grid.m[1], 25);

  const std::string bad = write_file("bad.toml", "key without equals\n");
  EXPECT_THROW(load_config_file(bad), ParseError);
  const std::string bad2 = write_file("bad2.toml", "x = \"unterminated\n");
  EXPECT_THROW(load_config_file(bad2), ParseError);
}

TEST_F(ConfigTest, PowerGridExpansion) {
  ScenarioConfig base;
  base.id = "pw";
  base.n = 40;
  base.p = 5;
  base.cov = CovarianceSpec::identity(5);
  PowerGrid grid;
  grid.theta_max = {0.0, 1.0};
  grid.m = {10, 20};
  std::vector<ScenarioConfig> points = expand_power_grid(base, grid);
  ASSERT_EQ(points.size(), 4u);
  EXPECT_TRUE(points[0].is_null());  // theta = 0 point
  EXPECT_FALSE(points[1].is_null());
  EXPECT_EQ(*points[1].m, 10);
  EXPECT_EQ(points[1].theta(0), 1.0);
  EXPECT_EQ(*points[3].m, 20);
  // ids must be distinct so seed substreams differ
  EXPECT_NE(points[1].id, points[3].id);
}

TEST_F(ConfigTest, UnknownNamesThrow) {
  nlohmann::json j{{"noise", "levy"}, {"n", 10}, {"p", 2}};
  EXPECT_THROW(scenario_from_json(j), InvalidParameter);
  nlohmann::json j2{{"cov", "toeplitz"}, {"n", 10}, {"p", 2}};
  EXPECT_THROW(scenario_from_json(j2), InvalidParameter);
  nlohmann::json j3{{"kernel", "gauss"}, {"n", 10}, {"p", 2}};
  EXPECT_THROW(scenario_from_json(j3), InvalidParameter);
}

TEST_F(ConfigTest, ResultJsonHasExactKeys) {
  std::mt19937_64 engine(71);
  DataMatrix data{testutil::random_matrix(20, 3, engine)};
  TestResult r = run_test(data, Kernel::linear(), 0.05, 50, 5);
  nlohmann::json j = test_result_json(r);
  for (const char* key : {"statistic", "quantile", "p_value", "alpha", "reject", "B", "seed",
                          "kernel", "n", "p", "elapsed_ms"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.size(), 11u);
  nlohmann::json no_timing = test_result_json(r, false);
  EXPECT_FALSE(no_timing.contains("elapsed_ms"));

  CusumResult cr = run_cusum_test(data, 5, 0.05, 50, 5);
  nlohmann::json cj = cusum_result_json(cr);
  EXPECT_TRUE(cj.contains("boundary"));
  EXPECT_EQ(cj["kernel"], "cusum");
}

TEST_F(ConfigTest, ReportWritersProduceExpectedColumns) {
  ScenarioConfig config;
  config.id = "wr";
  config.n = 20;
  config.p = 2;
  config.cov = CovarianceSpec::identity(2);
  config.B = 30;
  config.reps = 8;
  config.seed = 3;
  SizeReport report = size_experiment(config, 8);
  const std::string pv = (dir_ / "pv.csv").string();
  const std::string summary = (dir_ / "summary.csv").string();
  write_size_pvalues_csv(report, pv);
  write_size_summary_csv(report, summary);

  std::ifstream pv_in(pv);
  std::string line;
  std::getline(pv_in, line);
  EXPECT_EQ(line, "scenario_id,rep,p_value");
  int rows = 0;
  while (std::getline(pv_in, line)) ++rows;
  EXPECT_EQ(rows, 8);

  std::ifstream s_in(summary);
  std::getline(s_in, line);
  EXPECT_EQ(line,
            "scenario_id,n,p,kernel,distribution,cov,uniform_error_full,uniform_error_01,"
            "runtime_ms");
  std::getline(s_in, line);
  EXPECT_NE(line.find("wr,20,2,linear,gaussian,identity,"), std::string::npos);

  PowerReport power;
  power.base = config;
  power.reps = 8;
  power.grid.push_back(PowerPoint{0.5, 10, 0.25});
  const std::string pw = (dir_ / "pw.csv").string();
  write_power_csv(power, pw);
  std::ifstream pw_in(pw);
  std::getline(pw_in, line);
  EXPECT_EQ(line, "theta_max,m,rejection_rate,R");
  std::getline(pw_in, line);
  EXPECT_EQ(line, "0.5,10,0.25,8");
}

}  // namespace
}  // namespace cptest
