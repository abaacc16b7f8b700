#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output.
CliRun cli(const std::string& args) {
  std::string cmd = std::string("\"") + SELFSIM_CLI_PATH + "\" " + args + " 2>&1";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("selfsim_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    params_ = write("params.json", R"({"N": 2, "m": [2], "sigma1": ["END", "SPADE", "a1"], "sigma2": ["END", "b1"],
      "weights": {"SPADE": "1", "a1": "1", "b1": "1"}, "depth": 3, "window": [-64, 64]})");
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  fs::path dir_;
  std::string params_;
};

}  // namespace

TEST_F(Cli, DistOnOneLineIsPositionGap) {
  CliRun r = cli("dist --params " + params_ + " --x 3:2,2,2:1 --y 12:2,2,2:1");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["d"], "9");
  r = cli("dist --params " + params_ + " --x 1/2:: --y 3::");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["d"], "5/2");
}

TEST_F(Cli, ScanRowPerCell) {
  std::string cfg = write("scan.ini", "[poincare-scan]\nP-grid = 2,3,3.5\nk-range = 2..3\n");
  std::string csv = (dir_ / "scan.csv").string();
  CliRun r = cli("--config " + cfg + " poincare-scan --out " + csv);
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "P,k,pair,lhs,rhs_bound,neck_sum");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST_F(Cli, RejectsNonPositiveWeight) {
  std::string bad = write("bad.json", R"({"N": 2, "m": [2], "sigma1": ["END", "SPADE", "a1"], "sigma2": ["END", "b1"],
    "weights": {"SPADE": "0", "a1": "1", "b1": "1"}, "depth": 2, "window": [-8, 8]})");
  CliRun r = cli("build --params " + bad);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("must be positive"), std::string::npos) << r.out;
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(cli("dist --params " + params_ + " --x 999:: --y 0::").code, 3);
  EXPECT_EQ(cli("dist --params " + params_ + " --x 1:9: --y 0::").code, 2);
  EXPECT_NE(cli("no-such-command").code, 0);
  EXPECT_NE(cli("dist --params " + params_).code, 0);
}

TEST_F(Cli, ModulusAndWalkRecords) {
  CliRun r = cli("modulus --params " + params_ + " --x -6:: --y 6:2,2:1 --P 2.5");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["lhs"].get<double>(), 0);
  EXPECT_TRUE(j["converged"].get<bool>());
  r = cli("walk --params " + params_ + " --x -5:2,2,2:1 --y 6:0,0,2:0,1");
  ASSERT_EQ(r.code, 0) << r.out;
  j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["audit"]["ok"].get<bool>());
  EXPECT_EQ(j["walk"]["vertices"].size(), j["walk"]["length"].get<std::size_t>() + 1);
}
