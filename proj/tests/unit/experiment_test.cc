#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "collusion/error.h"
#include "collusion/experiment.h"

namespace collusion {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("collusion_experiment_test_" + name))
      .string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig SmallConfig(SweepObjective objective) {
  ExperimentConfig c;
  c.objective = objective;
  c.source.generator = "reduced";
  c.source.rows = 60'000;
  c.N = 40'000;
  c.N_test = 5'000;
  c.n_grid = {2'000, 8'000};
  c.seeds = {0, 1};
  return c;
}

TEST(ExperimentConfigTest, ObjectiveNames) {
  for (auto o : {SweepObjective::kPlantFeatureLabel, SweepObjective::kPlantFeatureOnly,
                 SweepObjective::kUnplantNaive, SweepObjective::kUnplantAdaptive,
                 SweepObjective::kErase}) {
    EXPECT_EQ(ParseSweepObjective(SweepObjectiveName(o)), o);
  }
  EXPECT_EQ(SweepObjectiveName(SweepObjective::kPlantFeatureLabel), "plant-fl");
  EXPECT_THROW(ParseSweepObjective("plant"), Error);
}

TEST(ExperimentConfigTest, JsonRoundTripAndUpdate) {
  auto c = SmallConfig(SweepObjective::kUnplantAdaptive);
  c.n_e_fraction = 0.25;
  c.n_e_floor = 100;
  c.target = "Good";
  const auto back = ExperimentConfig::FromJson(c.ToJson());
  EXPECT_EQ(back.ToJson(), c.ToJson());
  c.Update({{"N", 1234}, {"delta", 0.1}});
  EXPECT_EQ(c.N, 1234u);
  EXPECT_EQ(c.delta, 0.1);
  EXPECT_EQ(c.N_test, 5'000u);
  EXPECT_THROW(c.Update({{"N", "many"}}), Error);
}

TEST(SweepTest, DeterministicAndByteIdentical) {
  const auto config = SmallConfig(SweepObjective::kPlantFeatureLabel);
  const auto a = RunSweep(config);
  const auto b = RunSweep(config);
  ASSERT_EQ(a.rows.size(), 4u);
  EXPECT_EQ(a.rows, b.rows);
  for (const auto& r : a.rows) {
    EXPECT_GE(r.success, 0.0);
    EXPECT_LE(r.success, 1.0);
    EXPECT_EQ(r.bound_clamped, std::max(r.bound, 0.0));
  }
  EXPECT_LT(a.rows[0].seed, a.rows[3].seed);
  const auto p1 = TempPath("a.csv");
  const auto p2 = TempPath("b.csv");
  EmitResults(a, p1, "csv");
  EmitResults(b, p2, "csv");
  EXPECT_EQ(Slurp(p1), Slurp(p2));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST(SweepTest, InfeasibleCellsAreSkipped) {
  auto config = SmallConfig(SweepObjective::kUnplantAdaptive);
  config.n_grid = {2'000, 40'000};
  config.seeds = {0};
  config.n_e = {500, 2'000};
  const auto t = RunSweep(config);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].n_e, 500u);
  ASSERT_EQ(t.skipped.size(), 3u);
  for (const auto& s : t.skipped) EXPECT_FALSE(s.reason.empty());
  EXPECT_NE(t.skipped[0].reason.find("n_e"), std::string::npos);
  EXPECT_NE(t.skipped[2].reason.find("0 < n < N"), std::string::npos);
}

TEST(SweepTest, EveryObjectiveRuns) {
  for (auto o : {SweepObjective::kPlantFeatureOnly, SweepObjective::kUnplantNaive,
                 SweepObjective::kUnplantAdaptive}) {
    auto config = SmallConfig(o);
    config.seeds = {3};
    config.n_e_fraction = 0.2;
    const auto t = RunSweep(config);
    EXPECT_EQ(t.rows.size(), 2u) << SweepObjectiveName(o);
  }
  auto erase = SmallConfig(SweepObjective::kErase);
  erase.seeds = {3};
  erase.n_grid = {100, 20'000};
  const auto t = RunSweep(erase);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].n, 20'000u);
  ASSERT_EQ(t.skipped.size(), 1u);
  EXPECT_NE(t.skipped[0].reason.find("erasure precondition violated"),
            std::string::npos);
}

TEST(EmitResultsTest, RoundTrip) {
  SweepTable table;
  table.rows.push_back({0, 100, std::nullopt, "Poor", -0.125, 0, 0.05 / 52,
                        1.0 / 3, 2, 0.5});
  table.rows.push_back({1, 200, 40, "Good", 0.1 + 0.2, 0.1 + 0.2, 1e-300,
                        0.999999999999, 5, 0.25});
  for (const std::string format : {"csv", "json"}) {
    const auto path = TempPath("round." + format);
    EmitResults(table, path, format, true);
    EXPECT_EQ(ReadResults(path, format), table.rows) << format;
    EmitResults(table, path, format, false);
    auto without = table.rows;
    for (auto& r : without) r.wall_seconds = 0;
    EXPECT_EQ(ReadResults(path, format), without) << format;
    std::remove(path.c_str());
  }
}

TEST(EmitResultsTest, Errors) {
  EXPECT_THROW(EmitResults({}, TempPath("empty.csv"), "csv"), Error);
  SweepTable table;
  table.rows.push_back({});
  EXPECT_THROW(EmitResults(table, "/nonexistent/dir/out.csv", "csv"), Error);
  EXPECT_THROW(EmitResults(table, TempPath("x"), "xml"), Error);
}

}  // namespace
}  // namespace collusion
