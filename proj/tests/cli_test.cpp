#include "tmac/commands.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "tmac/csv.hpp"

namespace tmac {
namespace {

namespace fs = std::filesystem;

struct Captured {
  int code = 0;
  std::string out;
  std::string err;
};

using Command = int (*)(const CommandOptions&, std::ostream&, std::ostream&);

Captured run(Command cmd, const CommandOptions& opts) {
  std::ostringstream out, err;
  Captured r;
  r.code = cmd(opts, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path temp_file(const std::string& name, const std::string& contents) {
  const fs::path p = fs::temp_directory_path() / ("tmac_cli_test_" + name);
  std::ofstream(p) << contents;
  return p;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return static_cast<int>(k);
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

std::vector<double> means_for(const std::string& csv, const std::string& scheme) {
  const auto rows = parse_csv(csv);
  const int s = column(rows[0], "scheme"), m = column(rows[0], "mean_throughput_bps");
  std::vector<double> out;
  for (std::size_t r = 1; r < rows.size(); ++r)
    if (rows[r][static_cast<std::size_t>(s)] == scheme) out.push_back(std::stod(rows[r][static_cast<std::size_t>(m)]));
  return out;
}

int exit_code_of(const std::string& args) {
  const std::string cmd = std::string(TMAC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Solve, DefaultConfigMatchesGoldenFile) {
  const Captured r = run(cmd_solve, {});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0].front(), "scheme");
  std::ifstream golden(std::string(TMAC_GOLDEN_DIR) + "/solve_seed7.csv");
  ASSERT_TRUE(golden) << "golden file missing";
  std::stringstream expect;
  expect << golden.rdbuf();
  EXPECT_EQ(r.out, expect.str());
  EXPECT_NE(r.err.find("T_sum="), std::string::npos);
  EXPECT_NE(r.err.find("beta*="), std::string::npos);
}

TEST(Solve, SummaryGoesToStdoutWhenCsvHasAFile) {
  CommandOptions opts;
  opts.out_path = (fs::temp_directory_path() / "tmac_cli_test_solve.csv").string();
  const Captured r = run(cmd_solve, opts);
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("T_sum="), std::string::npos);
  std::ifstream f(opts.out_path);
  std::stringstream csv;
  csv << f.rdbuf();
  EXPECT_EQ(parse_csv(csv.str()).size(), 11u);
}

TEST(Solve, MissingConfigIsConfigError) {
  CommandOptions opts;
  opts.config_path = "/nonexistent/tmac.cfg";
  const Captured r = run(cmd_solve, opts);
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("config"), std::string::npos);
  EXPECT_EQ(exit_code_of("solve --config /nonexistent/tmac.cfg"), kExitConfig);
}

TEST(Solve, BadFieldNamedOnStderr) {
  CommandOptions opts;
  opts.config_path = temp_file("bad.cfg", "rho_min = 2\n").string();
  const Captured r = run(cmd_solve, opts);
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("rho_min"), std::string::npos);
}

TEST(Solve, RoundLimitReportsNonConvergence) {
  // One link per ego fits the energy limit, the initial two do not.
  CommandOptions opts;
  opts.config_path =
      temp_file("tight.cfg", "subchannel_budget_K = 2\nenergy_budget_ET = 200.0012\nmax_rounds = 1\n")
          .string();
  const Captured r = run(cmd_solve, opts);
  EXPECT_EQ(r.code, kExitNotConverged);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 11u);
  const int c = column(rows[0], "converged");
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_EQ(rows[k][static_cast<std::size_t>(c)], "false");
  EXPECT_EQ(exit_code_of("solve --config " + opts.config_path + " --out /dev/null"), kExitNotConverged);
}

TEST(Sweep, UnknownParameter) {
  CommandOptions opts;
  opts.param = "colour";
  opts.values = "1";
  EXPECT_EQ(run(cmd_sweep, opts).code, kExitConfig);
  EXPECT_EQ(exit_code_of("sweep --param colour --values 1"), kExitConfig);
  opts.param = "span_m";
  opts.values = "1,x";
  EXPECT_EQ(run(cmd_sweep, opts).code, kExitConfig);
  opts.values = "100";
  opts.schemes = "TMAC,Oracle";
  EXPECT_EQ(run(cmd_sweep, opts).code, kExitConfig);
}

TEST(Sweep, BandwidthStrictlyIncreasing) {
  CommandOptions opts;
  opts.param = "bandwidth_W";
  opts.values = "100e6,120e6,140e6,160e6,180e6,200e6";
  opts.schemes = "TMAC";
  opts.parallel = 4;
  const Captured r = run(cmd_sweep, opts);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto m = means_for(r.out, "TMAC");
  ASSERT_EQ(m.size(), 6u);
  for (std::size_t k = 1; k < m.size(); ++k) EXPECT_GT(m[k], m[k - 1]);
}

TEST(Sweep, SpanNonIncreasing) {
  CommandOptions opts;
  opts.param = "span_m";
  opts.values = "60,80,100,120,140,160,180,200";
  opts.schemes = "TMAC";
  opts.parallel = 4;
  const Captured r = run(cmd_sweep, opts);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto m = means_for(r.out, "TMAC");
  ASSERT_EQ(m.size(), 8u);
  for (std::size_t k = 1; k < m.size(); ++k) EXPECT_LE(m[k], m[k - 1]);
}

TEST(Sweep, SinglePointMatchesSolve) {
  CommandOptions opts;
  opts.param = "vehicle_count";
  opts.values = "10";
  opts.seeds = 1;
  opts.schemes = "TMAC";
  const Captured sweep = run(cmd_sweep, opts);
  ASSERT_EQ(sweep.code, kExitOk);
  const Captured solve = run(cmd_solve, {});
  const auto rows = parse_csv(solve.out);
  const std::string total = rows[1][static_cast<std::size_t>(column(rows[0], "total_throughput_bps"))];
  EXPECT_EQ(format_number(means_for(sweep.out, "TMAC").at(0)), total);
}

TEST(Sweep, HeaderAndParallelDeterminism) {
  CommandOptions opts;
  opts.param = "tx_power_Pt";
  opts.values = "4e-3,8e-3";
  opts.seeds = 5;
  const Captured a = run(cmd_sweep, opts);
  opts.parallel = 8;
  const Captured b = run(cmd_sweep, opts);
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  const auto rows = parse_csv(a.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"param", "value", "scheme", "mean_throughput_bps",
                                               "std_bps", "seeds"}));
  EXPECT_EQ(rows.size(), 9u);
}

TEST(Baselines, AllSchemesPerSeed) {
  CommandOptions opts;
  opts.seeds = 2;
  const Captured r = run(cmd_baselines, opts);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(parse_csv(r.out).size(), 1u + 2 * 4 * 10);
  EXPECT_NE(r.out.find("DMDDA-like"), std::string::npos);
  EXPECT_NE(r.out.find("FTS-like"), std::string::npos);
  EXPECT_NE(r.out.find("NoFusion"), std::string::npos);
}

TEST(FinetuneDemo, DefaultSummaryShowsBenefit) {
  const Captured r = run(cmd_finetune_demo, {});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 52u);
  const auto& summary = rows.back();
  EXPECT_EQ(summary[0], "summary");
  const double pre = std::stod(summary[static_cast<std::size_t>(column(rows[0], "pretrained_mse"))]);
  const double post = std::stod(summary[static_cast<std::size_t>(column(rows[0], "finetuned_mse"))]);
  EXPECT_LE(post, pre);
}

TEST(FinetuneDemo, AllFramesTunedLeavesNothingToScore) {
  CommandOptions opts;
  opts.config_path = temp_file("ft_all.cfg", "ft_frames_total = 12\nft_frames_tune = 12\nft_seeds = 3\n").string();
  const Captured r = run(cmd_finetune_demo, opts);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][static_cast<std::size_t>(column(rows[0], "pretrained_mse"))], "");
  EXPECT_EQ(rows[1][static_cast<std::size_t>(column(rows[0], "finetuned_mse"))], "");
}

TEST(FinetuneDemo, ZeroStepKeepsMse) {
  CommandOptions opts;
  opts.config_path = temp_file("ft_zero.cfg", "ft_alpha = 0\nft_seeds = 4\n").string();
  const Captured r = run(cmd_finetune_demo, opts);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  const int pre = column(rows[0], "pretrained_mse"), post = column(rows[0], "finetuned_mse");
  for (std::size_t k = 1; k < rows.size(); ++k)
    EXPECT_EQ(rows[k][static_cast<std::size_t>(pre)], rows[k][static_cast<std::size_t>(post)]);
}

TEST(Latency, TableFromConfig) {
  CommandOptions opts;
  opts.config_path = temp_file("lat.cfg",
                               "latency_label = TMAC-1/10, TMAC-1/10\n"
                               "finetune_frames = 1\n"
                               "L_up = 2.0, 6.0\nL_down = 1.5, 4.5\nL_ft = 1.64, 5.265\n"
                               "Lhat_up = 0.8, 2.2\nLhat_down = 0.6, 1.8\nLhat_inf = 0.25, 1.0\n")
                         .string();
  const Captured r = run(cmd_latency, opts);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "TMAC-1/10-best");
  EXPECT_NEAR(std::stod(rows[1][static_cast<std::size_t>(column(rows[0], "total_ms"))]), 19.99, 1e-9);
  EXPECT_EQ(rows[1].back(), "true");
}

TEST(Latency, ShippedTableSpansReportedRange) {
  CommandOptions opts;
  opts.config_path = std::string(TMAC_CONFIG_DIR) + "/latency.cfg";
  const Captured r = run(cmd_latency, opts);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  const int t = column(rows[0], "total_ms");
  std::vector<double> totals;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    totals.push_back(std::stod(rows[k][static_cast<std::size_t>(t)]));
    EXPECT_EQ(rows[k].back(), "true");
  }
  EXPECT_NEAR(*std::min_element(totals.begin(), totals.end()), 19.99, 1e-9);
  EXPECT_NEAR(*std::max_element(totals.begin(), totals.end()), 71.53, 1e-9);
}

TEST(Determinism, RerunsAreByteIdentical) {
  for (Command cmd : {cmd_solve, cmd_baselines, cmd_latency}) {
    CommandOptions opts;
    opts.seeds = 2;
    EXPECT_EQ(run(cmd, opts).out, run(cmd, opts).out);
  }
}

TEST(Binary, HelpAndUnknownSubcommand) {
  EXPECT_EQ(exit_code_of("--help"), 0);
  EXPECT_EQ(exit_code_of("frobnicate"), kExitConfig);
  EXPECT_EQ(exit_code_of("solve --seeds 0"), kExitConfig);
}

}  // namespace
}  // namespace tmac
