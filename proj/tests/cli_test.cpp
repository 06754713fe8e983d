// End-to-end runs of the command-line tool against the bundled fixtures,
// checking byte-exact outputs and the exit-code contract
// (0 success, 1 usage, 2 data).
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

const char* kBin = MOBNET_BIN_PATH;
const fs::path kTestData = MOBNET_TESTDATA_DIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in) << "missing file " << path;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    work_ = fs::temp_directory_path() /
            ("mobnet_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                                ->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(work_);
    fs::create_directories(work_);
  }
  void TearDown() override { fs::remove_all(work_); }

  RunResult run(const std::string& args) {
    const fs::path out_file = work_ / "stdout.txt";
    const fs::path err_file = work_ / "stderr.txt";
    const std::string cmd = std::string(kBin) + " " + args + " > " + out_file.string() +
                            " 2> " + err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
  }

  std::string demo_args(const std::string& rest) {
    return "--config " + (kTestData / "demo" / "config.json").string() + " --out " +
           (work_ / "out").string() + " " + rest;
  }

  std::string incl6_args(const std::string& rest) {
    return "--config " + (kTestData / "incl6" / "config.json").string() + " --out " +
           (work_ / "out").string() + " " + rest;
  }

  fs::path out(const std::string& name) { return work_ / "out" / name; }

  fs::path work_;
};

TEST_F(CliTest, IngestWritesNormalizedRecordsAndRejects) {
  const auto result = run(demo_args("ingest"));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_EQ(slurp(out("records_2008.csv")), slurp(kTestData / "golden" / "records_2008.csv"));
  EXPECT_EQ(slurp(out("rejects.csv")), "file,row,field,cause\n");
}

TEST_F(CliTest, MetricsTableMatchesGolden) {
  const auto result = run(demo_args("metrics --year 2008"));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_EQ(slurp(out("metrics_2008.csv")), slurp(kTestData / "golden" / "metrics_2008.csv"));
  EXPECT_EQ(slurp(out("metrics_2008.txt")), slurp(kTestData / "golden" / "metrics_2008.txt"));
  // the table is also printed
  EXPECT_NE(result.out.find("Active Universities"), std::string::npos);
}

TEST_F(CliTest, MetricsEmptySliceStillSucceeds) {
  const auto result = run(demo_args("metrics --year 2008 --slice M --stem nonstem"));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  const std::string csv = slurp(out("metrics_2008_M_nonstem.csv"));
  EXPECT_NE(csv.find("active_universities,0,0,0"), std::string::npos);
  EXPECT_NE(csv.find("assortativity,NA,NA,NA"), std::string::npos);
}

TEST_F(CliTest, MetricsMissingYearIsDataError) {
  const auto in_range = run(demo_args("metrics --year 2010"));
  EXPECT_EQ(in_range.exit_code, 2);
  EXPECT_NE(in_range.err.find("error: data:"), std::string::npos);
  const auto out_of_range = run(demo_args("metrics --year 2050"));
  EXPECT_EQ(out_of_range.exit_code, 2);
}

TEST_F(CliTest, TopRankingMatchesGolden) {
  const auto result = run(demo_args("top --year 2008 --direction out --k 5"));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_EQ(slurp(out("top_out_2008.csv")), slurp(kTestData / "golden" / "top_out_2008.csv"));
}

TEST_F(CliTest, TopWithZeroKIsUsageError) {
  const auto result = run(demo_args("top --year 2008 --direction out --k 0"));
  EXPECT_EQ(result.exit_code, 1);
  EXPECT_NE(result.err.find("error: usage:"), std::string::npos);
}

TEST_F(CliTest, MissingRequiredFlagIsUsageError) {
  const auto result = run(demo_args("metrics"));
  EXPECT_EQ(result.exit_code, 1);
}

TEST_F(CliTest, UnknownVerbIsUsageError) {
  const auto result = run(demo_args("frobnicate"));
  EXPECT_EQ(result.exit_code, 1);
}

TEST_F(CliTest, ExportDotMatchesGolden) {
  const auto result = run(demo_args("export-dot --year 2008"));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_EQ(slurp(out("network_2008.dot")), slurp(kTestData / "golden" / "network_2008.dot"));
}

TEST_F(CliTest, ExportGeoMatchesGoldenAndListsUnplacedNodes) {
  const auto result = run(demo_args("export-geo --year 2008"));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_EQ(slurp(out("network_2008.geojson")),
            slurp(kTestData / "golden" / "network_2008.geojson"));
  EXPECT_EQ(slurp(out("network_2008_missing_geo.txt")), "PL KRAKOW01\n");
}

TEST_F(CliTest, SharesMatchGoldenAndWarnAboutMissingPopulation) {
  const auto result = run(demo_args("shares --year 2013"));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_EQ(slurp(out("sn_share_timeseries.csv")),
            slurp(kTestData / "golden" / "sn_share_timeseries_demo.csv"));
  EXPECT_EQ(slurp(out("country_shares_2013.csv")),
            slurp(kTestData / "golden" / "country_shares_2013.csv"));
  EXPECT_NE(result.err.find("warning: country NL omitted"), std::string::npos);
}

TEST_F(CliTest, InclusivenessSlopegraphMatchesGolden) {
  const auto result = run(incl6_args("inclusiveness --early 2008-2010 --late 2011-2013"));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_EQ(slurp(out("slopegraph.csv")),
            slurp(kTestData / "golden" / "slopegraph_incl6.csv"));
}

TEST_F(CliTest, InclusivenessWindowMissingYearIsDataError) {
  const auto result = run(incl6_args("inclusiveness --early 2007-2009 --late 2011-2013"));
  EXPECT_EQ(result.exit_code, 2);
  EXPECT_NE(result.err.find("2007"), std::string::npos);
}

TEST_F(CliTest, InclusivenessWithoutPersistentReceiversWritesHeaderOnly) {
  const std::string args = "--config " + (kTestData / "nopersist" / "config.json").string() +
                           " --out " + (work_ / "out").string() +
                           " inclusiveness --early 2008 --late 2009";
  const auto result = run(args);
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_EQ(slurp(out("slopegraph.csv")), "institution,early_mean,late_mean,delta\n");
}

TEST_F(CliTest, MalformedYearWindowIsUsageError) {
  const auto result = run(incl6_args("inclusiveness --early then --late now"));
  EXPECT_EQ(result.exit_code, 1);
  EXPECT_NE(result.err.find("error: usage:"), std::string::npos);
  const auto inverted = run(incl6_args("inclusiveness --early 2010-2008 --late 2011-2013"));
  EXPECT_EQ(inverted.exit_code, 1);
}

TEST_F(CliTest, RoundingFlagControlsRatioPrecision) {
  const auto result = run(demo_args("--rounding 2 metrics --year 2008"));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_NE(slurp(out("metrics_2008.csv")).find("density,0.10,0.02,0.05"), std::string::npos);
}

TEST_F(CliTest, ExportsAreByteDeterministic) {
  const auto first = run(demo_args("export-geo --year 2013"));
  ASSERT_EQ(first.exit_code, 0) << first.err;
  const std::string once = slurp(out("network_2013.geojson"));
  const auto second = run(demo_args("export-geo --year 2013"));
  ASSERT_EQ(second.exit_code, 0);
  EXPECT_EQ(slurp(out("network_2013.geojson")), once);
}

}  // namespace
