#include "cli.hpp"

#include "spatavg/panel_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace spatavg::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(io::split_csv_line(line));
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spatavg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    const Result r = invoke({"synth", "--n", "12", "--steps", "96", "--seed", "11", "--sigma-eps",
                             "0.2", "--out", (dir_ / "data").string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  std::string panel() const { return (dir_ / "data" / "panel.csv").string(); }
  std::string truth() const { return (dir_ / "data" / "truth.csv").string(); }
  std::string out(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SynthWritesProvenanceHeader) {
  const std::string text = io::read_file(panel());
  EXPECT_EQ(text.rfind("# spatavg ", 0), 0U);
  EXPECT_NE(text.find(" synth n=12 steps=96"), std::string::npos);
  EXPECT_NE(text.find("seed=11"), std::string::npos);
}

TEST_F(CliTest, OptimizeMseWeightsAreFeasibleAndCertified) {
  const Result r = invoke({"optimize", "--panel", panel(), "--truth", truth(), "--objective", "mse",
                           "--alpha", "1.0", "--sigma-eps", "0.2", "--out", out("opt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_rows(out("opt") + "/weights_mse_alpha1.csv");
  ASSERT_EQ(rows.size(), 13U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"location_id", "lat", "lon", "beta", "rho",
                                                "active", "kkt_residual"}));
  double sum = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    sum += io::parse_double(rows[i][3]);
    EXPECT_LE(io::parse_double(rows[i][6]), 1e-8);
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
  const auto summary = read_rows(out("opt") + "/optimize_summary.csv");
  ASSERT_EQ(summary.size(), 2U);
  EXPECT_LE(io::parse_double(summary[1][3]), 1e-8);
}

TEST_F(CliTest, OptimizedWeightsFeedBackIntoEstimate) {
  ASSERT_EQ(invoke({"optimize", "--panel", panel(), "--truth", truth(), "--objective", "bias",
                    "--out", out("opt")})
                .code,
            0);
  const Result r = invoke({"estimate", "--panel", panel(), "--truth", truth(), "--weights",
                           out("opt") + "/weights_bias_alpha1.csv", "--alpha", "1", "--out",
                           out("est")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_rows(out("est") + "/estimate.csv");
  EXPECT_EQ(rows[1][1], "file");
}

TEST_F(CliTest, EstimateVarianceIsNonincreasingInAlpha) {
  const Result r = invoke({"estimate", "--panel", panel(), "--truth", truth(), "--alpha",
                           "0.5:1.0:0.1", "--sigma-eps", "0.2", "--scheme", "uniform", "--out",
                           out("est")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_rows(out("est") + "/estimate.csv");
  ASSERT_EQ(rows.size(), 7U);
  EXPECT_EQ(rows[0][0], "alpha");
  EXPECT_EQ(rows[1][0], "0.5");
  EXPECT_EQ(rows[6][0], "1");
  for (std::size_t i = 2; i < rows.size(); ++i) {
    EXPECT_LE(io::parse_double(rows[i][3]), io::parse_double(rows[i - 1][3]));
  }
}

TEST_F(CliTest, SimulateIsByteIdenticalAcrossRunsAndThreads) {
  const std::vector<std::string> base = {"simulate", "--panel", panel(), "--truth", truth(),
                                         "--alpha", "0.8", "--realizations", "5000", "--seed",
                                         "42"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  ASSERT_EQ(invoke(with({"--out", out("a")})).code, 0);
  ASSERT_EQ(invoke(with({"--out", out("b")})).code, 0);
  ASSERT_EQ(invoke(with({"--out", out("c"), "--threads", "4"})).code, 0);
  const std::string a = io::read_file(out("a") + "/simulate.csv");
  EXPECT_EQ(a, io::read_file(out("b") + "/simulate.csv"));
  EXPECT_EQ(a, io::read_file(out("c") + "/simulate.csv"));
  EXPECT_EQ(read_rows(out("a") + "/simulate.csv").size(), 2U);
}

TEST_F(CliTest, SimulateTraceHasOneRowPerRealizationAndStep) {
  const Result r = invoke({"simulate", "--panel", panel(), "--truth", truth(), "--alpha", "0.5",
                           "--realizations", "3", "--trace", "--out", out("sim")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_rows(out("sim") + "/trace.csv").size(), 1U + 3U * 96U);
}

TEST_F(CliTest, SeReportBlocks) {
  const Result r = invoke({"se-report", "--panel", panel(), "--truth", truth(), "--blocks",
                           "1-30,31-61,62-96", "--scheme", "mse", "--out", out("se")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_rows(out("se") + "/se_report.csv");
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_EQ(rows[2][1], "31");
  EXPECT_EQ(rows[2][2], "61");
  EXPECT_EQ(rows[2][3], "31");
  const double se = io::parse_double(rows[1][4]);
  const double mean = io::parse_double(rows[1][5]);
  EXPECT_NEAR(io::parse_double(rows[1][7]), se / mean, 1e-15);

  const Result sized = invoke({"se-report", "--panel", panel(), "--truth", truth(),
                               "--block-size", "40", "--out", out("se2")});
  ASSERT_EQ(sized.code, 0) << sized.err;
  EXPECT_EQ(read_rows(out("se2") + "/se_report.csv").size(), 4U);
}

TEST_F(CliTest, MomentsFileDrivesEstimateLikeThePanel) {
  ASSERT_EQ(invoke({"moments", "--panel", panel(), "--truth", truth(), "--sigma-eps", "0.2",
                    "--out", out("m")})
                .code,
            0);
  ASSERT_EQ(invoke({"estimate", "--moments", out("m") + "/moments.txt", "--alpha", "0.7",
                    "--out", out("e1")})
                .code,
            0);
  ASSERT_EQ(invoke({"estimate", "--panel", panel(), "--truth", truth(), "--sigma-eps", "0.2",
                    "--alpha", "0.7", "--out", out("e2")})
                .code,
            0);
  const auto a = read_rows(out("e1") + "/estimate.csv");
  const auto b = read_rows(out("e2") + "/estimate.csv");
  EXPECT_EQ(a, b);
}

TEST_F(CliTest, ConfigFileValuesYieldToFlags) {
  {
    std::ofstream cfg(out("run.ini"));
    cfg << "# run settings\ncommand=estimate\npanel=" << panel() << "\ntruth=" << truth()
        << "\nalpha=0.5\nout=" << out("cfg") << "\n";
  }
  Result r = invoke({"--config", out("run.ini")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = read_rows(out("cfg") + "/estimate.csv");
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_EQ(rows[1][0], "0.5");

  r = invoke({"--config", out("run.ini"), "--alpha", "0.9"});
  ASSERT_EQ(r.code, 0) << r.err;
  rows = read_rows(out("cfg") + "/estimate.csv");
  EXPECT_EQ(rows[1][0], "0.9");
}

TEST_F(CliTest, ErrorsMapToCategoriesAndLeaveNoOutput) {
  Result r = invoke({"estimate", "--panel", out("missing.csv"), "--truth", truth(), "--out",
                     out("bad")});
  EXPECT_EQ(r.code, exit_code(Errc::io_error));
  EXPECT_EQ(r.err.rfind("error: io-error: ", 0), 0U);
  EXPECT_FALSE(fs::exists(out("bad")));

  r = invoke({"estimate", "--panel", panel(), "--truth", truth(), "--alpha", "1.5", "--out",
              out("bad")});
  EXPECT_EQ(r.code, exit_code(Errc::invalid_parameter));
  EXPECT_EQ(r.err.rfind("error: invalid-parameter: ", 0), 0U);

  r = invoke({"estimate", "--panel", panel(), "--truth", truth(), "--alpha", "x", "--out",
              out("bad")});
  EXPECT_EQ(r.code, exit_code(Errc::parse_error));

  r = invoke({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error: parse-error: ", 0), 0U);

  r = invoke({"simulate", "--panel", panel(), "--out", out("bad")});
  EXPECT_EQ(r.code, exit_code(Errc::parse_error));

  {
    std::ofstream w(out("w.csv"));
    w << "location_id,beta\nnowhere,1\n";
  }
  r = invoke({"estimate", "--panel", panel(), "--truth", truth(), "--weights", out("w.csv"),
              "--alpha", "1", "--out", out("bad")});
  EXPECT_EQ(r.code, exit_code(Errc::dimension_mismatch));
  EXPECT_FALSE(fs::exists(out("bad")));
}

TEST(Cli, DistinctExitCodes) {
  std::set<int> codes;
  for (int c = 0; c <= static_cast<int>(Errc::index_out_of_range); ++c) {
    const int code = exit_code(static_cast<Errc>(c));
    EXPECT_GE(code, 2);
    EXPECT_TRUE(codes.insert(code).second) << code;
  }
}

TEST(Cli, HelpListsExitCodes) {
  const Result r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("all-missing-pattern"), std::string::npos);
  EXPECT_NE(r.out.find("--realizations"), std::string::npos);
}

TEST(Cli, AlphaGridParsing) {
  EXPECT_EQ(parse_alpha_grid("0.1:0.5:0.1"), (std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5}));
  EXPECT_EQ(parse_alpha_grid("0.1:1.0:0.1").size(), 10U);
  EXPECT_EQ(parse_alpha_grid("0.1:1.0:0.1").back(), 1.0);
  EXPECT_EQ(parse_alpha_grid("0.3,0.9"), (std::vector<double>{0.3, 0.9}));
  EXPECT_EQ(parse_alpha_grid("1"), std::vector<double>{1.0});
  EXPECT_THROW((void)parse_alpha_grid("0.5:0.1:0.1"), Error);
  EXPECT_THROW((void)parse_alpha_grid("0:1:0.5"), Error);
  EXPECT_THROW((void)parse_alpha_grid("0.1:0.2"), Error);
}

}  // namespace
}  // namespace spatavg::cli
