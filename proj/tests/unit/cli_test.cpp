#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pipeline.hpp"
#include "spectra/errors.hpp"
#include "spectra/parallel.hpp"

using namespace spectra;
using namespace spectra::cli;

namespace {

std::string example(const std::string& name) { return std::string(SPECTRA_EXAMPLES_CFG) + "/" + name; }

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "spectra_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

RunConfig command(const std::string& name, const std::string& config) {
  RunConfig cfg;
  cfg.command = name;
  cfg.config_path = config;
  return cfg;
}

}  // namespace

TEST(Cli, PressureHasLog2AtZero) {
  const auto r = run_pipeline(command("pressure", example("reference.toml")));
  EXPECT_EQ(r.exit_code(), 0);
  ASSERT_EQ(r.csv_header.front(), "q");
  bool found = false;
  for (const auto& row : r.csv_rows)
    if (std::stod(row[0]) == 0.0) {
      found = true;
      EXPECT_NEAR(std::stod(row[1]), std::log(2.0), 1e-12);
    }
  EXPECT_TRUE(found);
  EXPECT_EQ(r.csv_rows.size(), 401u);
  const std::string csv = render(r, Format::kCsv);
  EXPECT_EQ(csv.substr(0, 10), "# command=");
  const auto second = csv.find('\n') + 1;
  EXPECT_EQ(csv.substr(second, csv.find('\n', second) - second), "q,pressure,slope");
}

TEST(Cli, SpectrumOracleColumn) {
  auto cfg = command("spectrum", example("reference.toml"));
  cfg.oracle = true;
  const auto r = run_pipeline(cfg);
  EXPECT_EQ(r.exit_code(), 0);
  ASSERT_EQ(r.csv_header.back(), "abs_diff");
  double worst = 0.0;
  for (const auto& row : r.csv_rows) worst = std::max(worst, std::stod(row.back()));
  EXPECT_LE(worst, 1e-4);
}

TEST(Cli, OracleValues) {
  const auto r = run_pipeline(command("oracle", example("reference.toml")));
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_THROW(run_pipeline(command("oracle", example("golden_mean.toml"))), UsageError);
}

TEST(Cli, MissingConfig) {
  EXPECT_THROW(run_pipeline(command("pressure", "")), UsageError);
  EXPECT_THROW(run_pipeline(command("pressure", "/nonexistent/model.toml")), ConfigError);
}

TEST(Cli, MalformedConfigReportsPosition) {
  const auto path = scratch_dir() / "bad.toml";
  std::ofstream(path) << "[system]\nalphabet = 2\n[cocycle]\ndepth = 1\nvalues = [1.0, oops]\n";
  try {
    run_pipeline(command("pressure", path.string()));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(Cli, SkeletonHasNoCsvView) {
  auto cfg = command("skeleton", example("symmetric.toml"));
  const auto r = run_pipeline(cfg);
  EXPECT_EQ(r.exit_code(), 0) << render(r, Format::kJson);
  EXPECT_FALSE(has_csv("skeleton"));
  EXPECT_THROW(render(r, Format::kCsv), UsageError);
}

TEST(Cli, ReportsCarryHashAndSeed) {
  const auto r = run_pipeline(command("schedule", example("golden_mean.toml")));
  EXPECT_EQ(r.body["seed"], 7);
  EXPECT_EQ(r.body["config_hash"].get<std::string>().size(), 18u);
  const auto failed = failure_report(command("pressure", example("golden_mean.toml")), "error", "boom");
  EXPECT_EQ(failed.body["seed"], 7);
  EXPECT_EQ(failed.exit_code(), 1);
  EXPECT_EQ(failed.body["status"], "fail");
}

TEST(Cli, EntropyOfWordFile) {
  const auto path = scratch_dir() / "words.txt";
  {
    std::ofstream out(path);
    for (int i = 0; i < 256; ++i) {
      std::string w;
      for (int b = 7; b >= 0; --b) w += ((i >> b) & 1) ? '1' : '0';
      out << w << '\n';
    }
  }
  RunConfig cfg;
  cfg.command = "entropy";
  cfg.input = path.string();
  cfg.n_range = "1:8";
  const auto r = run_pipeline(cfg);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_NEAR(r.body["estimate"]["rate"].get<double>(), std::log(2.0), 1e-12) << r.body.dump();
}

TEST(Cli, BuildAndVerifyRoundTrip) {
  const auto tower = scratch_dir() / "tower.json";
  auto build = command("build-set", example("golden_mean.toml"));
  build.levels = 2;
  const auto built = run_pipeline(build);
  EXPECT_EQ(built.exit_code(), 0) << render(built, Format::kJson);
  std::ofstream(tower) << render(built, Format::kJson);
  auto verify = command("verify", example("golden_mean.toml"));
  verify.tower_path = tower.string();
  const auto checked = run_pipeline(verify);
  EXPECT_EQ(checked.exit_code(), 0) << render(checked, Format::kJson);
  // A tower file from another config is refused.
  auto other = command("verify", example("reference.toml"));
  other.tower_path = tower.string();
  EXPECT_THROW(run_pipeline(other), UsageError);
}

TEST(Cli, DeterministicAcrossWorkerCounts) {
  auto cfg = command("spectrum", example("golden_mean.toml"));
  set_worker_count(1);
  const std::string one = render(run_pipeline(cfg), Format::kCsv);
  set_worker_count(4);
  const std::string four = render(run_pipeline(cfg), Format::kCsv);
  set_worker_count(0);
  EXPECT_EQ(one, four);
}

TEST(Parallel, OrderedResultsAndErrors) {
  set_worker_count(3);
  const auto squares = parallel_map(100, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(squares[i], i * i);
  EXPECT_THROW(parallel_map(10,
                            [](std::size_t i) -> int {
                              if (i == 7) throw InvalidArgument("seven");
                              return 0;
                            }),
               InvalidArgument);
  set_worker_count(0);
  EXPECT_GE(worker_count(), 1u);
}
