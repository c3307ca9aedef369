#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "collusion/bounds.h"
#include "collusion/error.h"
#include "test_util.h"

namespace collusion {
namespace {

using testing::RandomDataset;
using testing::SmallUniverse;

BoundParams Params(std::uint64_t n, std::uint64_t N, std::uint64_t N_test) {
  BoundParams p;
  p.n = n;
  p.N = N;
  p.N_test = N_test;
  return p;
}

TEST(BoundParamsTest, Rejects) {
  auto p = Params(10, 10, 5);
  EXPECT_THROW(p.Validate(), Error);
  p.N = 11;
  EXPECT_NO_THROW(p.Validate());
  p.epsilon = 1.0;
  EXPECT_THROW(p.Validate(), Error);
  p.epsilon = 0.0;
  p.n_e = 10;
  EXPECT_THROW(p.Validate(), Error);
}

TEST(PlantingFlTest, CleanCollectiveCracksEverything) {
  const auto u = SmallUniverse({2, 2}, 2);
  const Transformation g(u, {{0, 1}, {1, 1}});
  const Dataset d(u, std::vector<Sample>(50'000, {3, 1}));
  const auto r = PlantingBoundFeatureLabel(d, g, 1, Params(50'000, 100'000, 20'000));
  const double R = r.R("R(n)");
  ASSERT_EQ(r.per_feature.size(), 1u);
  EXPECT_TRUE(r.per_feature[0].cracked);
  EXPECT_NEAR(r.per_feature[0].indicator, 0.5 * (1 - 2 * R) + 0.5 * (1 - 4 * R),
              1e-12);
  EXPECT_DOUBLE_EQ(r.bound, 1.0 - R - r.R("R(N_test)"));
  EXPECT_DOUBLE_EQ(*r.delta_tilde, 0.05 / 8);
}

TEST(PlantingFlTest, LargeHoeffdingTermIsVacuous) {
  const auto u = SmallUniverse({2, 2}, 2);
  const Transformation g(u, {{0, 1}});
  const auto d = RandomDataset(u, 2, 1);
  const auto r = PlantingBoundFeatureLabel(d, g, 1, Params(2, 4, 3));
  ASSERT_GE(r.R("R(n)"), 0.5);
  EXPECT_EQ(r.CrackedCount(), 0u);
  EXPECT_LE(r.bound, -r.R("R(n)"));
  EXPECT_EQ(r.bound_clamped, 0.0);
}

TEST(PlantingFoTest, CoincidesWithFlOnTargetOnlyData) {
  const auto u = SmallUniverse({3, 2}, 3);
  const Transformation g(u, {{0, 2}});
  std::vector<Sample> rows;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) rows.push_back({rng() % 6, 2});
  const Dataset d(u, rows);
  const auto p = Params(200, 400, 100);
  const auto fl = PlantingBoundFeatureLabel(d, g, 2, p);
  const auto fo =
      PlantingBoundFeatureOnly(d, g, 2, EscapeSelector::FlipFirstFixed(), p);
  // Feature-label reports per signal feature, feature-only per raw feature;
  // compare through the raw features.
  for (const auto& v : fo.per_feature) {
    const FeatureCode x = g.Apply(v.feature);
    const auto it = std::find_if(fl.per_feature.begin(), fl.per_feature.end(),
                                 [x](const FeatureVerdict& w) { return w.feature == x; });
    ASSERT_NE(it, fl.per_feature.end());
    EXPECT_NEAR(v.indicator, it->indicator, 1e-15);
  }
  EXPECT_NEAR(fo.bound, fl.bound, 1e-12);
}

TEST(PlantingFoTest, NoTargetLabelsMeansNegativeFirstTerm) {
  const auto u = SmallUniverse({3, 2}, 3);
  const Transformation g(u, {{0, 2}});
  std::vector<Sample> rows;
  for (int i = 0; i < 120; ++i) rows.push_back({static_cast<FeatureCode>(i % 6), 0});
  const auto p = Params(120, 200, 100);
  const auto fo = PlantingBoundFeatureOnly(Dataset(u, rows), g, 1,
                                           EscapeSelector::FlipFirstFixed(), p);
  EXPECT_EQ(fo.CrackedCount(), 0u);
  for (const auto& v : fo.per_feature) EXPECT_LT(v.indicator, 0.0);
}

TEST(UnplantingTest, HugeEstimationSplitIsVacuous) {
  const auto u = SmallUniverse({2, 2}, 3);
  const Transformation g(u, {{0, 0}});
  const auto d = RandomDataset(u, 400, 2);
  auto [est, rest] = SplitDataset(d, 399, 1);
  auto p = Params(400, 800, 100);
  p.n_e = 399;
  const auto r = UnplantingBound(est, rest, g, 0, p);
  EXPECT_GE(r.R("R(n-n_e)"), 1.24);
  EXPECT_EQ(r.CrackedCount(), 0u);
  EXPECT_LT(r.bound, 0.0);
  EXPECT_EQ(r.bound_clamped, 0.0);
}

TEST(UnplantingTest, RejectsInconsistentSplit) {
  const auto u = SmallUniverse({2, 2}, 3);
  const Transformation g(u, {{0, 0}});
  const auto d = RandomDataset(u, 100, 2);
  auto [est, rest] = SplitDataset(d, 20, 1);
  auto p = Params(100, 800, 100);
  p.n_e = 30;
  EXPECT_THROW(UnplantingBound(est, rest, g, 0, p), Error);
}

TEST(NaiveUnplantingTest, TwoLabelsHaveOneCandidate) {
  const auto u = SmallUniverse({2, 2}, 2);
  const Transformation g(u, {{0, 0}});
  const auto d = RandomDataset(u, 300, 3);
  const auto p = Params(300, 500, 100);
  const auto naive = NaiveUnplantingBound(d, g, 0, p);
  EXPECT_EQ(naive.best_label, 1u);
  EXPECT_EQ(naive.candidates.size(), 1u);
  EXPECT_EQ(naive.report.bound, PlantingBoundFeatureLabel(d, g, 1, p).bound);
}

TEST(NaiveUnplantingTest, TiesGoToLowestLabel) {
  // No sample carries labels 1 or 2, so both candidates see identical data.
  const auto u = SmallUniverse({2, 2}, 3);
  const Transformation g(u, {{0, 0}});
  const Dataset d(u, std::vector<Sample>(100, {1, 0}));
  const auto naive = NaiveUnplantingBound(d, g, 0, Params(100, 150, 100));
  EXPECT_EQ(naive.candidates.at(1).bound, naive.candidates.at(2).bound);
  EXPECT_EQ(naive.best_label, 1u);
}

TEST(ErasingTest, OutsideWindowThrowsWithWindow) {
  const auto u = SmallUniverse({2, 2}, 2);
  const Transformation g(u, {{0, 0}});
  const auto d = RandomDataset(u, 100, 4);
  auto p = Params(100, 1'000, 100);
  p.eta = 0.1;
  try {
    ErasingBound(d, g, p);
    FAIL();
  } catch (const ErasureWindowError& e) {
    EXPECT_NE(std::string(e.what()).find("erasure precondition violated"),
              std::string::npos);
    const double dt = 0.05 / (2 + 4 + 8 + 16);
    EXPECT_EQ(e.window().n_min, static_cast<std::int64_t>(
                                    std::ceil(2 * std::log(1 / dt) / 0.01)));
  }
  p.eta.reset();
  EXPECT_THROW(ErasingBound(d, g, p), Error);
}

TEST(ErasingTest, FrequentFeaturesCrack) {
  const auto u = SmallUniverse({2, 2}, 2);
  const Transformation g(u, {{0, 0}});
  std::vector<Sample> rows;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 9'000; ++i) {
    const FeatureCode x = rng() % 4;
    rows.push_back({x, static_cast<LabelIndex>(rng() % 10 < 8 ? x % 2 : 1 - x % 2)});
  }
  auto p = Params(9'000, 10'000, 5'000);
  p.eta = 0.2;
  const auto r = ErasingBound(Dataset(u, rows), g, p);
  EXPECT_EQ(r.CrackedCount(), 4u);
  EXPECT_NEAR(r.bound, 1.0 - r.R("R(n)") - r.R("R(N_test)"), 1e-12);
}

TEST(BoundPropertiesTest, FeatureLabelDominatesFeatureOnly) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto u = SmallUniverse({2, 3, 2}, 2 + trial % 2);
    const Transformation g(u, {{0, static_cast<CategoryIndex>(trial % 2)}});
    const std::size_t n = 20 + rng() % 200;
    const auto d = RandomDataset(u, n, rng());
    auto p = Params(n, n + 1 + rng() % 400, 50);
    p.epsilon = (trial % 3) * 0.01;
    const LabelIndex y = rng() % u->num_labels();
    EXPECT_GE(PlantingBoundFeatureLabel(d, g, y, p).bound,
              PlantingBoundFeatureOnly(d, g, y, EscapeSelector::FlipFirstFixed(), p).bound);
  }
}

TEST(BoundPropertiesTest, LargerSignalSetNeverHelps) {
  // Every sample has f1 = 0, so both maps send each sample to the same
  // feature; only the signal-set size differs.
  const auto u = SmallUniverse({2, 4}, 3);
  const Transformation small(u, {{0, 0}, {1, 0}});
  const Transformation large(u, {{0, 0}});
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Sample> rows;
    const std::size_t n = 50 + rng() % 2000;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({(rng() % 2) * 4, static_cast<LabelIndex>(rng() % 10 < 6 ? 2 : rng() % 3)});
    }
    const Dataset d(u, rows);
    const auto p = Params(n, n + 1 + rng() % 3000, 1000);
    EXPECT_GE(PlantingBoundFeatureLabel(d, small, 2, p).bound,
              PlantingBoundFeatureLabel(d, large, 2, p).bound);
    EXPECT_GE(PlantingBoundFeatureOnly(d, small, 2, EscapeSelector::FlipFirstFixed(), p).bound,
              PlantingBoundFeatureOnly(d, large, 2, EscapeSelector::FlipFirstFixed(), p).bound);
    auto [est, rest] = SplitDataset(d, n / 4, trial);
    auto pu = p;
    pu.n_e = n / 4;
    EXPECT_GE(UnplantingBound(est, rest, small, 0, pu).bound,
              UnplantingBound(est, rest, large, 0, pu).bound);
  }
}

TEST(BoundPropertiesTest, NonincreasingInEpsilon) {
  const auto u = SmallUniverse({2, 2}, 2);
  const Transformation g(u, {{0, 0}});
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5'000;
    const auto d = RandomDataset(u, n, rng());
    auto [est, rest] = SplitDataset(d, 1'000, trial);
    double previous[4] = {INFINITY, INFINITY, INFINITY, INFINITY};
    for (double eps = 0.0; eps < 0.99; eps += 0.01) {
      auto p = Params(n, 6'000, 1'000);
      p.epsilon = eps;
      p.eta = 0.3;
      auto pu = p;
      pu.n_e = 1'000;
      const double now[4] = {
          PlantingBoundFeatureLabel(d, g, 1, p).bound,
          PlantingBoundFeatureOnly(d, g, 1, EscapeSelector::FlipFirstFixed(), p).bound,
          UnplantingBound(est, rest, g, 1, pu).bound,
          ErasingBound(d, g, p).bound};
      for (int k = 0; k < 4; ++k) {
        EXPECT_LE(now[k], previous[k]);
        previous[k] = now[k];
      }
    }
  }
}

TEST(BoundReportTest, Serialization) {
  const auto u = SmallUniverse({2, 2}, 2);
  const Transformation g(u, {{0, 1}});
  const auto d = RandomDataset(u, 100, 6);
  const auto r = PlantingBoundFeatureLabel(d, g, 1, Params(100, 200, 50));
  const auto j = ToJson(r, *u);
  EXPECT_EQ(j["bound"].get<double>(), r.bound);
  EXPECT_EQ(j["per_feature"].size(), r.per_feature.size());
  EXPECT_EQ(BoundCsvHeader(),
            "n,bound,bound_clamped,delta_tilde,R_n,R_Nmn,R_Ntest,n_cracked");
  const std::string row = BoundCsvRow(100, r);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 7);
  EXPECT_EQ(std::stod(row.substr(row.find(',') + 1)), r.bound);
}

}  // namespace
}  // namespace collusion
