#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dsrosc/cli.hpp"

namespace dsrosc {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table parse_table(const std::string& text, char sep = ',') {
  Table t;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    for (auto c : csv::split(line, sep)) cells.emplace_back(c);
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

double num(const std::string& s) {
  const auto v = csv::parse_number(s);
  EXPECT_TRUE(v.has_value()) << s;
  return v.value_or(std::nan(""));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { unsetenv(std::string(cli::kFormatEnv).c_str()); }
  void TearDown() override { unsetenv(std::string(cli::kFormatEnv).c_str()); }
};

TEST_F(CliTest, SpectrumRowCountAndOrdering) {
  const CliRun r = run_cli({"spectrum", "--omega", "0.1", "--eps", "0.2", "--nmax", "25", "--geometries", "sr,tl,sl,ll,ms"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Table t = parse_table(r.out);
  EXPECT_EQ(t.header, (std::vector<std::string>{"n", "geometry", "e_plus", "e_minus", "admissible"}));
  ASSERT_EQ(t.rows.size(), 130u);
  EXPECT_EQ(t.rows[0][1], "sr");
  EXPECT_EQ(t.rows[1][1], "tl");
  EXPECT_EQ(t.rows[4][1], "ms");
  EXPECT_EQ(t.rows[5][0], "1");
  EXPECT_NEAR(num(t.rows[1][2]), 0.9049876, 5e-8);
  EXPECT_FALSE(t.comments.empty());
}

TEST_F(CliTest, SpectrumOrderIndependentOfFlagOrder) {
  const CliRun a = run_cli({"spectrum", "--geometries", "ms,tl"});
  const CliRun b = run_cli({"spectrum", "--geometries", "tl,ms"});
  const Table ta = parse_table(a.out), tb = parse_table(b.out);
  EXPECT_EQ(ta.rows, tb.rows);
}

TEST_F(CliTest, TimelikeAndLightlikeColumnsIdentical) {
  const Table t = parse_table(run_cli({"spectrum", "--geometries", "tl,ll", "--nmax", "40"}).out);
  ASSERT_EQ(t.rows.size(), 82u);
  for (std::size_t i = 0; i < t.rows.size(); i += 2) {
    EXPECT_EQ(t.rows[i][2], t.rows[i + 1][2]);
    EXPECT_EQ(t.rows[i][3], t.rows[i + 1][3]);
    EXPECT_EQ(t.rows[i][4], t.rows[i + 1][4]);
  }
}

TEST_F(CliTest, UndeformedColumnsIdentical) {
  const Table t = parse_table(run_cli({"spectrum", "--eps", "0", "--nmax", "10"}).out);
  ASSERT_EQ(t.rows.size(), 55u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(t.rows[i][2], t.rows[i - i % 5][2]);
    EXPECT_EQ(t.rows[i][3], t.rows[i - i % 5][3]);
  }
}

TEST_F(CliTest, ShiftsColumns) {
  const CliRun r = run_cli({"shifts"});
  ASSERT_EQ(r.code, 0);
  const Table t = parse_table(r.out);
  EXPECT_EQ(t.header, (std::vector<std::string>{"n", "geometry", "delta_e_plus", "leading_order"}));
  ASSERT_EQ(t.rows.size(), 130u);
  for (const auto& row : t.rows) {
    const double d = num(row[2]);
    if (row[1] == "sl" || row[1] == "sr") {
      EXPECT_EQ(d, 0.0);
    } else if (row[1] == "ms") {
      EXPECT_NEAR(d, -0.167, 0.02);
      EXPECT_EQ(num(row[3]), -0.2);
    } else {
      EXPECT_NEAR(d, -0.095, 0.005);
      EXPECT_EQ(num(row[3]), -0.1);
    }
  }
  EXPECT_NEAR(num(t.rows[1][2]), -0.0950124, 1e-6);
  EXPECT_NEAR(num(t.rows[4][2]), -0.1666667, 1e-6);
}

TEST_F(CliTest, ByteDeterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"spectrum"}, {"shifts", "--nmax", "7"}, {"wavefunction", "--points", "101"},
           {"map", "--E", "0.5"}, {"verify", "--suite", "branches"}}) {
    const CliRun a = run_cli(args);
    const CliRun b = run_cli(args);
    EXPECT_EQ(a.code, 0) << args.front() << a.err;
    EXPECT_EQ(a.out, b.out) << args.front();
    EXPECT_EQ(a.out.find('\r'), std::string::npos);
  }
}

TEST_F(CliTest, NumberFormatting) {
  EXPECT_EQ(csv::format_number(0.5), "5.00000000e-01");
  EXPECT_EQ(csv::format_number(-0.0), "0.00000000e+00");
  EXPECT_EQ(csv::format_number(std::nan("")), "nan");
  EXPECT_FALSE(csv::parse_number("1,5").has_value());
  EXPECT_EQ(*csv::parse_number("+2e-1"), 0.2);
}

TEST_F(CliTest, TsvViaFlagAndEnvironment) {
  const CliRun flag = run_cli({"shifts", "--nmax", "2", "--format", "tsv"});
  ASSERT_EQ(flag.code, 0);
  EXPECT_EQ(parse_table(flag.out, '\t').header.size(), 4u);
  setenv(std::string(cli::kFormatEnv).c_str(), "tsv", 1);
  const CliRun env = run_cli({"shifts", "--nmax", "2"});
  EXPECT_EQ(env.out, flag.out);
  const CliRun override_env = run_cli({"shifts", "--nmax", "2", "--format", "csv"});
  EXPECT_EQ(parse_table(override_env.out).header.size(), 4u);
  setenv(std::string(cli::kFormatEnv).c_str(), "xml", 1);
  EXPECT_EQ(run_cli({"shifts"}).code, 2);
}

TEST_F(CliTest, WavefunctionOriginValueAndNorm) {
  const CliRun r = run_cli({"wavefunction", "--geometry", "sl", "--n", "0", "--xmin", "-1", "--xmax", "1", "--points", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Table t = parse_table(r.out);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "re", "im", "abs2"}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(num(t.rows[1][0]), 0.0);
  EXPECT_NEAR(std::sqrt(num(t.rows[1][3])), 0.444045278, 1e-8);
  bool has_integral = false;
  for (const auto& c : t.comments) has_integral = has_integral || c.find("trapezoid_integral_abs2=") != std::string::npos;
  EXPECT_TRUE(has_integral);
}

TEST_F(CliTest, WavefunctionIntegralIsNotUnity) {
  const CliRun r = run_cli({"wavefunction", "--geometry", "sl", "--points", "4001"});
  const Table t = parse_table(r.out);
  double integral = 0.0;
  for (const auto& c : t.comments) {
    const auto pos = c.find("trapezoid_integral_abs2=");
    if (pos != std::string::npos) integral = num(c.substr(pos + 24));
  }
  EXPECT_NEAR(integral, std::exp(0.1), 1e-6);
}

TEST_F(CliTest, WavefunctionUndeformedMatchesPhiAndRealForTimelike) {
  const Table sl = parse_table(run_cli({"wavefunction", "--geometry", "sl", "--eps", "0", "--n", "2", "--points", "51"}).out);
  const Table sr = parse_table(run_cli({"wavefunction", "--geometry", "sr", "--eps", "0", "--n", "2", "--points", "51"}).out);
  EXPECT_EQ(sl.rows, sr.rows);
  const Table tl = parse_table(run_cli({"wavefunction", "--geometry", "tl", "--n", "3", "--points", "51"}).out);
  for (const auto& row : tl.rows) EXPECT_EQ(num(row[2]), 0.0);
}

TEST_F(CliTest, WavefunctionErrors) {
  EXPECT_EQ(run_cli({"wavefunction", "--geometry", "ms"}).code, 3);
  EXPECT_EQ(run_cli({"wavefunction", "--n", "65"}).code, 2);
  EXPECT_EQ(run_cli({"wavefunction", "--points", "100001"}).code, 2);
  EXPECT_EQ(run_cli({"wavefunction", "--xmin", "1", "--xmax", "0"}).code, 2);
}

TEST_F(CliTest, MapValues) {
  const CliRun r = run_cli({"map", "--E", "0.5", "--p", "0", "--eps", "0.2", "--geometry", "tl"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Table t = parse_table(r.out);
  ASSERT_EQ(t.rows.size(), 1u);
  ASSERT_EQ(t.header.size(), 11u);
  EXPECT_NEAR(num(t.rows[0][3]), 0.527046, 1e-6);
  const Table id = parse_table(run_cli({"map", "--E", "1", "--p", "0", "--eps", "0"}).out);
  EXPECT_EQ(num(id.rows[0][3]), 1.0);
  EXPECT_EQ(num(id.rows[0][4]), 0.0);
  EXPECT_EQ(num(id.rows[0][6]), 0.0);  // SR residual on shell
}

TEST_F(CliTest, MapPoleIsModelError) {
  EXPECT_EQ(run_cli({"map", "--E", "5", "--eps", "0.2", "--geometry", "tl"}).code, 3);
}

TEST_F(CliTest, MapRejectsGeometryWithoutCovector) {
  EXPECT_EQ(run_cli({"map", "--geometry", "ms"}).code, 3);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"bogus"}).code, 2);
  EXPECT_EQ(run_cli({"spectrum", "--omega", "abc"}).code, 2);
  EXPECT_EQ(run_cli({"spectrum", "--omega", "-1"}).code, 2);
  EXPECT_EQ(run_cli({"spectrum", "--geometries", "xx"}).code, 2);
  EXPECT_EQ(run_cli({"spectrum", "--nmax", "-3"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--suite", "nope"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--suite", "msratio", "--eps-list", "0.7"}).code, 2);
  EXPECT_EQ(run_cli({"spectrum", "--help"}).code, 0);
}

TEST_F(CliTest, MsDegenerateIsModelError) {
  EXPECT_EQ(run_cli({"spectrum", "--eps", "1.0", "--geometries", "ms"}).code, 3);
  EXPECT_EQ(run_cli({"verify", "--eps", "1.0", "--geometries", "ms", "--suite", "branches"}).code, 3);
  EXPECT_EQ(run_cli({"spectrum", "--eps", "1.0", "--geometries", "tl"}).code, 0);
}

TEST_F(CliTest, VerifyMsRatio) {
  const CliRun r = run_cli({"verify", "--suite", "msratio", "--eps-list", "1e-2,1e-3,1e-4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("[PASS] msratio"), std::string::npos);
  const Table t = parse_table(r.out);
  EXPECT_EQ(t.header, (std::vector<std::string>{"suite", "kind", "name", "value", "tolerance", "status"}));
  std::vector<double> ratios;
  for (const auto& row : t.rows) {
    if (row[1] == "metric" && row[2].rfind("ratio@", 0) == 0) ratios.push_back(num(row[3]));
  }
  ASSERT_EQ(ratios.size(), 3u);
  EXPECT_LT(ratios[0], ratios[1]);
  EXPECT_LT(ratios[1], ratios[2]);
  EXPECT_LT(ratios[2], 2.0);
}

TEST_F(CliTest, VerifyFailureExitCode) {
  const CliRun r = run_cli({"verify", "--suite", "isospectral", "--tol-iso", "1e-30"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("[FAIL] isospectral"), std::string::npos);
}

TEST_F(CliTest, VerifyAllDefaults) {
  const CliRun r = run_cli({"verify", "--suite", "all", "--omega", "0.1", "--eps", "0.2", "--basis", "128"});
  EXPECT_EQ(r.code, 0) << r.err;
  for (const char* s : {"isospectral", "grid", "branches", "msratio", "eta"}) {
    EXPECT_NE(r.err.find(std::string("[PASS] ") + s), std::string::npos) << s;
  }
}

TEST_F(CliTest, LargeShiftWarns) {
  const CliRun r = run_cli({"wavefunction", "--omega", "0.01", "--eps", "0.5", "--points", "11"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "dsrosc_cli_test.csv";
  std::filesystem::remove(path);
  const CliRun r = run_cli({"shifts", "--nmax", "3", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), run_cli({"shifts", "--nmax", "3"}).out);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace dsrosc
