// SPDX-License-Identifier: Apache-2.0
//
// End-to-end tests that drive the installed binary the way a user would.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include <json.hpp>

#include "cptest/csv.hpp"
#include "test_util.hpp"

namespace cptest {
namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = ::popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t got;
  while ((got = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("cptest_cli_" +
            std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string cli() const { return std::string(CPTEST_CLI_PATH); }

  std::string write_constant_csv(const std::string& name, Index n, Index p, double value) {
    Matrix m = Matrix::Constant(n, p, value);
    const std::string path = (dir_ / name).string();
    save_csv(DataMatrix{m}, path);
    return path;
  }

  std::string write_shifted_csv(const std::string& name) {
    std::mt19937_64 engine(5150);
    Matrix m = testutil::random_matrix(60, 4, engine);
    m.bottomRows(30).array() += 6.0;
    const std::string path = (dir_ / name).string();
    save_csv(DataMatrix{m}, path);
    return path;
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, ConstantDataAcceptsWithExitZero) {
  const std::string csv = write_constant_csv("const.csv", 20, 3, 1.0);
  CommandResult r = run_command(cli() + " test --input " + csv +
                                " --kernel sign --alpha 0.05 --bootstrap 100 --seed 1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("reject false"), std::string::npos);
}

TEST_F(CliTest, ExitStatusSignalsRejection) {
  const std::string csv = write_shifted_csv("shifted.csv");
  CommandResult r = run_command(cli() + " test --input " + csv +
                                " --kernel linear --bootstrap 200 --seed 2 --exit-status");
  EXPECT_EQ(r.exit_code, 3);

  const std::string constant = write_constant_csv("c.csv", 10, 2, 0.5);
  CommandResult acc = run_command(cli() + " test --input " + constant +
                                  " --bootstrap 50 --seed 2 --exit-status");
  EXPECT_EQ(acc.exit_code, 0);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run_command(cli() + " frobnicate").exit_code, 2);
  EXPECT_EQ(run_command(cli() + " test --no-such-flag").exit_code, 2);
  EXPECT_EQ(run_command(cli() + " test").exit_code, 2);  // missing --input
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  EXPECT_EQ(run_command(cli() + " test --input /nonexistent/x.csv").exit_code, 1);
  const std::string bad = (dir_ / "bad.csv").string();
  std::ofstream(bad) << "1,2\n3,oops\n";
  EXPECT_EQ(run_command(cli() + " test --input " + bad).exit_code, 1);
}

TEST_F(CliTest, JsonOutputHasExactKeys) {
  const std::string csv = write_shifted_csv("j.csv");
  CommandResult r = run_command(cli() + " test --input " + csv +
                                " --bootstrap 50 --seed 9 --json --no-timing");
  ASSERT_EQ(r.exit_code, 0);
  nlohmann::json j = nlohmann::json::parse(r.output);
  for (const char* key :
       {"statistic", "quantile", "p_value", "alpha", "reject", "B", "seed", "kernel", "n", "p"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_FALSE(j.contains("elapsed_ms"));
  EXPECT_EQ(j["n"], 60);
  EXPECT_EQ(j["p"], 4);
  EXPECT_EQ(j["kernel"], "linear");
}

TEST_F(CliTest, CusumSubcommandRuns) {
  const std::string csv = write_shifted_csv("cu.csv");
  CommandResult r = run_command(cli() + " cusum --input " + csv +
                                " --boundary 10 --bootstrap 100 --seed 4 --json --no-timing");
  ASSERT_EQ(r.exit_code, 0);
  nlohmann::json j = nlohmann::json::parse(r.output);
  EXPECT_EQ(j["boundary"], 10);
  EXPECT_EQ(j["kernel"], "cusum");
  EXPECT_TRUE(j["reject"].get<bool>());
}

TEST_F(CliTest, DeterministicAcrossThreadCounts) {
  const std::string csv = write_shifted_csv("det.csv");
  for (const std::string sub :
       {std::string("test --kernel sign"), std::string("cusum --boundary 10")}) {
    const std::string base = cli() + " " + sub + " --input " + csv +
                             " --bootstrap 100 --seed 11 --no-timing --threads ";
    CommandResult one = run_command(base + "1");
    CommandResult many = run_command(base + "4");
    ASSERT_EQ(one.exit_code, 0);
    ASSERT_EQ(many.exit_code, 0);
    EXPECT_EQ(one.output, many.output) << sub;
  }
}

TEST_F(CliTest, SimulateSizeWritesReports) {
  const std::string config = (dir_ / "h0.json").string();
  std::ofstream(config) << R"({
    "id": ")" << (dir_ / "tiny").string() << R"(",
    "noise": "gaussian", "cov": "identity",
    "n": 24, "p": 3, "B": 40, "reps": 12, "alpha": 0.1, "seed": 15,
    "kernel": "linear"
  })";
  CommandResult r = run_command(cli() + " simulate-size --config " + config);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "tiny_pvalues.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "tiny_summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "tiny.json"));
  EXPECT_NE(r.output.find("uniform_error_full"), std::string::npos);
}

TEST_F(CliTest, SimulatePowerAndCompareRun) {
  const std::string power_config = (dir_ / "pw.toml").string();
  std::ofstream(power_config) << "id = \"" << (dir_ / "pw").string() << "\"\n"
                              << "n = 30\np = 3\nB = 40\nreps = 10\nseed = 5\n"
                              << "theta_grid = [0, 6.0]\nm_grid = [15]\n";
  CommandResult power = run_command(cli() + " simulate-power --config " + power_config);
  ASSERT_EQ(power.exit_code, 0) << power.output;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "pw_power.csv"));

  const std::string cmp_config = (dir_ / "cmp.json").string();
  std::ofstream(cmp_config) << R"({"id": ")" << (dir_ / "cmp").string()
                            << R"(", "n": 24, "p": 3, "B": 40, "reps": 10, "seed": 6,
                                "boundary": 6})";
  CommandResult cmp = run_command(cli() + " compare --config " + cmp_config);
  ASSERT_EQ(cmp.exit_code, 0) << cmp.output;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "cmp_summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "cmp_jmb_pvalues.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "cmp_cusum_pvalues.csv"));
}

TEST_F(CliTest, FlagOverridesConfigValues) {
  const std::string config = (dir_ / "o.json").string();
  std::ofstream(config) << R"({"id": ")" << (dir_ / "o").string()
                        << R"(", "n": 24, "p": 3, "B": 40, "reps": 10, "seed": 1})";
  CommandResult a =
      run_command(cli() + " simulate-size --config " + config + " --seed 2 --reps 6");
  ASSERT_EQ(a.exit_code, 0);
  std::ifstream pv((dir_ / "o_pvalues.csv").string());
  std::string line;
  int rows = -1;  // header
  while (std::getline(pv, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

}  // namespace
}  // namespace cptest
