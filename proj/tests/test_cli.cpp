#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "compactfd/commands.hpp"
#include "compactfd/config.hpp"
#include "compactfd/csv.hpp"
#include "compactfd/errors.hpp"

using namespace compactfd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "compactfd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("compactfd_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Csv, ShortestRoundTripNumbers) {
  EXPECT_EQ(format_double(1.29e-7), "1.29e-07");
  EXPECT_EQ(format_double(0.1), "1e-01");
  EXPECT_EQ(format_double(-2.5), "-2.5e+00");
  EXPECT_EQ(format_double(0.0), "0e+00");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(third)), third);
}

TEST(Csv, RenderParseRenderIsIdentity) {
  CsvTable t({"N", "error_C", "rate", "predictor"});
  t.add_row({std::int64_t{16}, 5.66e-4, CsvCell{}, std::string("ab")});
  t.add_row({std::int64_t{32}, 3.238e-5, 4.127, std::string("euler")});
  const std::string text = t.render();
  EXPECT_EQ(text, "N,error_C,rate,predictor\n16,5.66e-04,,ab\n32,3.238e-05,4.127e+00,euler\n");
  const CsvTable back = CsvTable::parse(text);
  EXPECT_EQ(back.render(), text);
  EXPECT_EQ(std::get<std::int64_t>(back.rows()[1][0]), 32);
  EXPECT_EQ(std::get<double>(back.rows()[1][1]), 3.238e-5);
  EXPECT_THROW(t.add_row({std::int64_t{1}}), std::invalid_argument);
}

TEST(Config, TextParsingAndOverrides) {
  const auto entries = parse_config_text("# comment\nproblem = fhn  # trailing\n\nN=32\nnu = 1.6\n");
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].second, "fhn");
  auto all = entries;
  all.push_back(parse_assignment("N=128"));
  const auto c = RunConfig::from_entries(all);
  EXPECT_EQ(c.problem, "fhn");
  EXPECT_EQ(c.intervals, 128u);
  EXPECT_EQ(*c.nu, 1.6);
  EXPECT_EQ(c.stop_tolerance(), 1e-12);
  EXPECT_EQ(RunConfig::from_entries({{"problem", "nlse"}}).stop_tolerance(), 1e-8);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config_text("no equals sign"), ConfigError);
  EXPECT_THROW(parse_assignment("=3"), ConfigError);
  EXPECT_THROW(RunConfig::from_entries({{"colour", "red"}}), ConfigError);
  EXPECT_THROW(RunConfig::from_entries({{"nu", "0.1"}, {"tau", "0.01"}}), ConfigError);
  EXPECT_THROW(RunConfig::from_entries({{"N", "-4"}}), ConfigError);
  EXPECT_THROW(RunConfig::from_entries({{"nu", "fast"}}), ConfigError);
  EXPECT_THROW(RunConfig::from_entries({{"problem", "burgers"}}), ConfigError);
  EXPECT_THROW(RunConfig::from_entries({{"Ns", ""}}), ConfigError);
  EXPECT_THROW(RunConfig::from_entries({{"x_left", "2"}, {"x_right", "1"}}).make_problem(), ConfigError);
}

TEST(Config, DomainOverrideMovesFkppBoundaryValues) {
  const auto c = RunConfig::from_entries({{"x_right", "1.0"}});
  const auto p = std::get<Problem<double>>(c.make_problem());
  EXPECT_EQ(p.x_right, 1.0);
  EXPECT_DOUBLE_EQ(p.boundary.at(0.0).second, std::cos(1.0) * std::cos(1.0));
}

TEST(Cli, RunWritesSolutionStatsAndMeta) {
  const auto dir = scratch_dir("run");
  const auto r = cli({"run", "--out", dir.string(), "--set", "N=32", "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto solution = CsvTable::read((dir / "solution.csv").string());
  EXPECT_EQ(solution.header(), (std::vector<std::string>{"x", "u"}));
  EXPECT_EQ(solution.rows().size(), 33u);
  const auto stats = CsvTable::read((dir / "stats.csv").string());
  EXPECT_EQ(stats.header(), (std::vector<std::string>{"step", "iterations", "max_correction"}));
  EXPECT_FALSE(stats.rows().empty());
  const std::string meta = slurp(dir / "meta.txt");
  EXPECT_NE(meta.find("command=run\n"), std::string::npos);
  EXPECT_NE(meta.find("nu=1e-01\n"), std::string::npos);

  // Byte-identical on re-run; every file round-trips through the parser.
  const std::string first = slurp(dir / "solution.csv");
  ASSERT_EQ(cli({"run", "--out", dir.string(), "--set", "N=32", "--quiet"}).code, 0);
  EXPECT_EQ(slurp(dir / "solution.csv"), first);
  for (const char* name : {"solution.csv", "stats.csv"}) {
    const std::string text = slurp(dir / name);
    EXPECT_EQ(CsvTable::parse(text).render(), text) << name;
  }
}

TEST(Cli, PairAndComplexColumns) {
  const auto dir = scratch_dir("columns");
  ASSERT_EQ(cli({"run", "--out", dir.string(), "--set", "problem=fhn", "--set", "N=16", "--quiet"}).code, 0);
  EXPECT_EQ(CsvTable::read((dir / "solution.csv").string()).header(), (std::vector<std::string>{"x", "u", "w"}));
  ASSERT_EQ(cli({"run", "--out", dir.string(), "--set", "problem=nlse", "--set", "N=32", "--set", "T=0.05",
                 "--quiet"})
                .code,
            0);
  EXPECT_EQ(CsvTable::read((dir / "solution.csv").string()).header(), (std::vector<std::string>{"x", "re", "im"}));
  EXPECT_NE(slurp(dir / "meta.txt").find("soliton_phase="), std::string::npos);
}

TEST(Cli, ConfigFileWithOverride) {
  const auto dir = scratch_dir("config");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "problem = fkpp\nN = 16\nT = 0.1\n";
  const auto r = cli({"run", "--config", (dir / "run.cfg").string(), "--set", "N=8", "--out", dir.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(CsvTable::read((dir / "solution.csv").string()).rows().size(), 9u);
}

TEST(Cli, ZeroFinalTimeWritesTheInitialState) {
  const auto dir = scratch_dir("t0");
  ASSERT_EQ(cli({"run", "--out", dir.string(), "--set", "T=0", "--set", "N=8", "--quiet"}).code, 0);
  EXPECT_TRUE(CsvTable::read((dir / "stats.csv").string()).rows().empty());
  const auto rows = CsvTable::read((dir / "solution.csv").string()).rows();
  EXPECT_EQ(std::get<double>(rows.front()[1]), 1.0);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("codes");
  EXPECT_EQ(cli({"run", "--out", dir.string(), "--set", "bogus=1"}).code, 2);
  EXPECT_EQ(cli({"run", "--out", dir.string(), "--set", "nu=0.1", "--set", "tau=0.01"}).code, 2);
  EXPECT_EQ(cli({"run", "--config", (dir / "missing.cfg").string()}).code, 2);
  EXPECT_EQ(cli({"launch"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);

  const auto r = cli({"run", "--out", dir.string(), "--set", "delta=1e-30", "--set", "max_iterations=5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("final max correction"), std::string::npos) << r.err;
}

TEST(Cli, ConvergeAndRichardsonTables) {
  const auto dir = scratch_dir("converge");
  const std::vector<std::string> common{"--out", dir.string(), "--quiet", "--set", "Ns=8,16", "--set",
                                        "N_ref=64", "--set", "T=0.5"};
  auto args = common;
  args.insert(args.begin(), "converge");
  ASSERT_EQ(cli(args).code, 0);
  const auto conv = CsvTable::read((dir / "converge.csv").string());
  EXPECT_EQ(conv.header(), (std::vector<std::string>{"N", "error_C", "error_L2", "rate"}));
  ASSERT_EQ(conv.rows().size(), 2u);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(conv.rows()[0][3]));
  EXPECT_TRUE(std::holds_alternative<double>(conv.rows()[1][3]));
  const std::string first = slurp(dir / "converge.csv");
  ASSERT_EQ(cli(args).code, 0);
  EXPECT_EQ(slurp(dir / "converge.csv"), first);

  args[0] = "richardson";
  ASSERT_EQ(cli(args).code, 0);
  EXPECT_EQ(CsvTable::read((dir / "richardson.csv").string()).rows().size(), 2u);
  EXPECT_NE(slurp(dir / "meta.txt").find("reference=fine_grid"), std::string::npos);

  // Reference grid not nested with the compared grids.
  auto bad = args;
  bad.push_back("--set");
  bad.push_back("N_ref=48");
  EXPECT_EQ(cli(bad).code, 2);
}

TEST(Cli, PairConvergenceColumns) {
  const auto dir = scratch_dir("fhn_converge");
  ASSERT_EQ(cli({"converge", "--out", dir.string(), "--quiet", "--set", "problem=fhn", "--set", "Ns=8,16", "--set",
                 "N_ref=32", "--set", "T=0.05"})
                .code,
            0);
  EXPECT_EQ(CsvTable::read((dir / "converge.csv").string()).header(),
            (std::vector<std::string>{"N", "error_C", "error_L2", "error_C_u", "error_L2_u", "error_C_w", "error_L2_w",
                                      "rate", "rate_u", "rate_w", "mean_rate"}));
}

TEST(Cli, IterationAndEfficiencyTables) {
  const auto dir = scratch_dir("studies");
  ASSERT_EQ(cli({"iterations", "--out", dir.string(), "--quiet", "--set", "Ns=8,16", "--set", "nus=0.1", "--set",
                 "deltas=1e-6", "--set", "T=0.2"})
                .code,
            0);
  const auto it = CsvTable::read((dir / "iterations.csv").string());
  EXPECT_EQ(it.header(), (std::vector<std::string>{"nu", "delta", "N", "predictor", "avg_iterations"}));
  EXPECT_EQ(it.rows().size(), 4u);

  ASSERT_EQ(cli({"efficiency", "--out", dir.string(), "--quiet", "--set", "Ns=8,16", "--set", "nus=0.4", "--set",
                 "deltas=1e-2,1e-8", "--set", "N_ref=64", "--set", "T=0.5", "--set", "repeats=1", "--set",
                 "targets=1e-2,1e-12"})
                .code,
            0);
  const auto eff = CsvTable::read((dir / "efficiency.csv").string());
  EXPECT_EQ(eff.header(), (std::vector<std::string>{"target_error", "predictor", "N", "delta", "nu", "time_s",
                                                    "avg_iterations", "error"}));
  EXPECT_EQ(eff.rows().size(), 1u);
  EXPECT_EQ(CsvTable::read((dir / "regimes.csv").string()).rows().size(), 8u);
}
