#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acev/cli.hpp"
#include "acev/report_io.hpp"

using namespace acev;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run_args(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("acev_test_" + name);
}

const std::vector<std::string> kSmallSweep{
    "rate-sweep", "--alphas", "1.3,1.7", "--n0", "8", "--samples", "400", "--sigma1", "0.37",
    "--sigma2", "0.37", "--seed", "3"};

}  // namespace

TEST(PlotData, RoundTripRateReports) {
  RateReport r;
  r.alpha = 1.5;
  r.rate_estimate = 0.123456789012345;
  r.rate_stderr = 0.01;
  r.reference = reference_lines(1.5);
  const std::vector<RateReport> reports{r};
  std::stringstream ss;
  emit_plot_data(ss, reports);
  const auto parsed = parse_plot_data(ss);
  const auto expected = plot_rows(reports);
  ASSERT_EQ(parsed.size(), 4u);
  ASSERT_EQ(expected.size(), 4u);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_EQ(parsed[i].series, expected[i].series);
    EXPECT_EQ(parsed[i].x, expected[i].x);
    EXPECT_EQ(parsed[i].y, expected[i].y);
    EXPECT_EQ(parsed[i].err, expected[i].err);
  }
  EXPECT_EQ(parsed[0].series, "rate");
  EXPECT_EQ(parsed[3].y, 0.375);
}

TEST(PlotData, StrongErrorRowsAndEmptyInput) {
  StrongErrorReport a;
  a.n = 16;
  a.s_n = 0.2;
  a.std_error = 0.001;
  const std::vector<StrongErrorReport> reports{a};
  std::stringstream ss;
  emit_plot_data(ss, reports);
  const auto parsed = parse_plot_data(ss);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].series, "s_n");
  EXPECT_EQ(parsed[0].x, 16.0);
  std::ostringstream sink;
  EXPECT_THROW(emit_plot_data(sink, std::span<const RateReport>{}), std::invalid_argument);
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (const double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Csv, WriteAndReadRow) {
  CsvRow row;
  row.scheme = "implicit";
  row.n = 32;
  row.samples = 100;
  row.seed = 4;
  row.metric = "s_n";
  row.value = 0.0123;
  row.stderr_value = 1e-4;
  std::stringstream ss;
  write_csv_header(ss);
  write_csv_row(ss, row);
  const auto back = read_csv(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].metric, "s_n");
  EXPECT_EQ(back[0].value, 0.0123);
  EXPECT_EQ(back[0].params.gamma, row.params.gamma);
}

TEST(Cli, StrongErrorCsvHeader) {
  const auto r = run_args({"strong-error", "--n", "8", "--samples", "200", "--sigma2", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], kCsvHeader);
  EXPECT_NE(l[1].find(",s_n,"), std::string::npos);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  auto args = kSmallSweep;
  args.insert(args.end(), {"--workers", "1"});
  const auto a = run_args(args);
  args.back() = "3";
  const auto b = run_args(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}

TEST(Cli, RateSweepRowsPerAlpha) {
  const auto r = run_args(kSmallSweep);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream is(r.out);
  const auto rows = read_csv(is);
  // two s_n levels, rate, three reference lines, floor
  EXPECT_EQ(rows.size(), 2u * 7u);
  std::size_t rates = 0;
  for (const auto& row : rows) rates += row.metric == "rate";
  EXPECT_EQ(rates, 2u);
}

TEST(Cli, FlagsOverrideConfigFile) {
  const auto cfg = temp_file("override.ini");
  {
    std::ofstream f(cfg);
    f << "seed = 5\nsigma2 = 0\nn = 8\nsamples = 200\n";
  }
  const auto from_file = run_args({"strong-error", "--config", cfg.string()});
  const auto overridden = run_args({"strong-error", "--config", cfg.string(), "--seed", "6"});
  const auto explicit_six =
      run_args({"strong-error", "--seed", "6", "--sigma2", "0", "--n", "8", "--samples", "200"});
  std::filesystem::remove(cfg);
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  ASSERT_EQ(overridden.code, kExitOk) << overridden.err;
  EXPECT_NE(from_file.out, overridden.out);
  EXPECT_EQ(overridden.out, explicit_six.out);
  EXPECT_NE(from_file.out.find(",5,s_n,"), std::string::npos);
}

TEST(Cli, ValidationFailureExitCodeAndJson) {
  const auto r = run_args({"strong-error", "--gamma", "0.9", "--n", "8", "--samples", "200"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("two_gamma_lt_alpha"), std::string::npos);
  EXPECT_NE(r.err.find("\"status\":\"invalid\""), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UsageErrorsAreValidationExits) {
  EXPECT_EQ(run_args({"strong-error", "--n", "banana"}).code, kExitValidation);
  EXPECT_EQ(run_args({}).code, kExitValidation);
  EXPECT_EQ(run_args({"rate-sweep", "--alphas", "1.3", "--n0", "4"}).code, kExitValidation);
}

TEST(Cli, RuntimeFailureExitCode) {
  const auto r = run_args({"strong-error", "--n", "8", "--samples", "200", "--sigma2", "0",
                           "--out", "/nonexistent-dir/out.csv"});
  EXPECT_EQ(r.code, kExitRuntime);
}

TEST(Cli, SimulateDeterministicRecursion) {
  const auto r = run_args({"simulate", "--n", "10", "--sigma1", "0", "--sigma2", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 12u);
  EXPECT_EQ(l[0], "step,t,state");
  double x = 1.0;
  for (std::size_t i = 1; i <= 10; ++i) {
    x = (x + 1.05 * 0.1) / 1.2;
    const auto last = l[i + 1].rfind(',');
    EXPECT_NEAR(std::stod(l[i + 1].substr(last + 1)), x, 1e-15) << l[i + 1];
  }
}

TEST(Cli, PlotFileAlongsideCsv) {
  const auto plot = temp_file("sweep.dat");
  auto args = kSmallSweep;
  args.insert(args.end(), {"--plot", plot.string()});
  const auto r = run_args(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream f(plot);
  const auto rows = parse_plot_data(f);
  std::filesystem::remove(plot);
  EXPECT_EQ(rows.size(), 2u * 4u);
}

TEST(Cli, DiagnosticsMetrics) {
  const auto r = run_args({"diagnostics", "--n", "16", "--samples", "10000", "--workers", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* metric : {",dneg_freq,", ",dneg_bound,", ",moment,", ",inv_moment,"}) {
    EXPECT_NE(r.out.find(metric), std::string::npos) << metric;
  }
  EXPECT_EQ(run_args({"diagnostics", "--n", "16", "--samples", "100"}).code, kExitValidation);
}
