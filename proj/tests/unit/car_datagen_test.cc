#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "collusion/car_datagen.h"
#include "collusion/concentration.h"
#include "collusion/error.h"
#include "collusion/joint_counts.h"

namespace collusion {
namespace {

TEST(CarSchemaTest, Cardinality) {
  const auto u = CarUniverse();
  EXPECT_EQ(u->num_features(), 18u);
  EXPECT_EQ(u->feature_cardinality(), 2'388'787'200ull);
  EXPECT_EQ(u->labels(),
            (std::vector<std::string>{"Excellent", "Good", "Average", "Poor"}));
  EXPECT_EQ(*UniverseFor(CarGeneratorConfig()), *u);
}

TEST(CarSchemaTest, PaperTransformation) {
  const auto u = CarUniverse();
  const auto g = PaperTransformation(u);
  EXPECT_EQ(g.fixed().size(), 17u);
  EXPECT_EQ(g.fixed().count(*u->FindFeature("Country of Manufacture")), 0u);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const FeatureCode x = rng() % u->feature_cardinality();
    EXPECT_TRUE(g.InSignalSet(g.Apply(x)));
    EXPECT_EQ(g.Apply(g.Apply(x)), g.Apply(x));
  }
  EXPECT_EQ(ProfileTransformation(CarGeneratorConfig(), u).fixed(), g.fixed());
  const auto escape = PaperEscapeSelector(*u);
  EXPECT_NO_THROW(escape.Validate(g));
}

TEST(GeneratorTest, SingleRow) {
  const auto d = GenerateBaseDataset(CarGeneratorConfig(), 1, 0);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(d.universe().ContainsCode(d[0].x));
  EXPECT_THROW(GenerateBaseDataset(CarGeneratorConfig(), 0, 0), Error);
}

TEST(GeneratorTest, DeterministicPerSeed) {
  const auto config = CarGeneratorConfig();
  const auto a = GenerateBaseDataset(config, 150'000, 7);
  const auto b = GenerateBaseDataset(config, 150'000, 7);
  const auto c = GenerateBaseDataset(config, 150'000, 8);
  EXPECT_TRUE(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
  EXPECT_FALSE(std::equal(a.samples().begin(), a.samples().end(), c.samples().begin()));
}

TEST(GeneratorTest, ConfigJsonRoundTrip) {
  for (const auto& config : {CarGeneratorConfig(), ReducedCarGeneratorConfig()}) {
    const auto back = GeneratorConfig::FromJson(config.ToJson());
    EXPECT_EQ(back.ToJson(), config.ToJson());
  }
  auto broken = CarGeneratorConfig().ToJson();
  broken["rubric"]["thresholds"] = {20, 10, 0};
  EXPECT_THROW(GeneratorConfig::FromJson(broken), Error);
}

TEST(GeneratorTest, SignalShareAndTableStructure) {
  const auto config = CarGeneratorConfig();
  const auto d = GenerateBaseDataset(config, 1'000'000, 0);
  const auto tally = TallySignalSet(d, PaperTransformation(CarUniverse()));
  const double share = static_cast<double>(tally.signal_rows) / tally.rows;
  EXPECT_NEAR(share, 0.0696, 0.02);
  ASSERT_EQ(tally.by_feature.size(), 5u);
  int country = 0;
  for (const auto& [x, counts] : tally.by_feature) {
    ++country;
    const auto top = std::max_element(counts.begin(), counts.end()) - counts.begin();
    EXPECT_EQ(top, 0);
    if (country == 4) {
      EXPECT_EQ(counts[1], 0u);
      EXPECT_GT(counts[2], 0u);
    } else {
      EXPECT_EQ(counts[2], 0u);
    }
  }
}

TEST(GeneratorTest, ReducedPopulationIsExact) {
  const auto config = ReducedCarGeneratorConfig();
  const auto pop = ExactPopulation(config);
  double total = 0;
  for (std::size_t i = 0; i < pop.features().size(); ++i) total += pop.MarginalAt(i);
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto d = GenerateBaseDataset(config, 400'000, 3);
  const auto c = EmpiricalJoint(d);
  const double slack = 3 * HoeffdingTerm(0.01, d.size());
  for (std::size_t i = 0; i < pop.features().size(); ++i) {
    const FeatureCode x = pop.features()[i];
    for (LabelIndex y = 0; y < 4; ++y) {
      EXPECT_NEAR(c.PairProb(x, y), pop.PairProb(x, y), slack);
    }
  }
  EXPECT_THROW(ExactPopulation(CarGeneratorConfig()), Error);
}

TEST(SamplingTest, PermutationAndPartition) {
  const auto base = GenerateBaseDataset(ReducedCarGeneratorConfig(), 5'000, 1);
  auto sorted = [](std::vector<Sample> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const std::vector<Sample> all(base.samples().begin(), base.samples().end());
  const auto perm = SampleConsumers(base, base.size(), 2);
  EXPECT_EQ(sorted({perm.samples().begin(), perm.samples().end()}), sorted(all));
  const auto parts = SampleDisjoint(base, {1'000, 4'000}, 3);
  std::vector<Sample> joined(parts[0].samples().begin(), parts[0].samples().end());
  joined.insert(joined.end(), parts[1].samples().begin(), parts[1].samples().end());
  EXPECT_EQ(sorted(joined), sorted(all));
  EXPECT_THROW(SampleConsumers(base, 5'001, 0), Error);
  EXPECT_THROW(SampleDisjoint(base, {3'000, 3'000}, 0), Error);
}

TEST(SamplingTest, LabelFrequenciesFollowBase) {
  const auto base = GenerateBaseDataset(CarGeneratorConfig(), 3'000'000, 0);
  const auto sample = SampleConsumers(base, 1'000'000, 5);
  const auto cb = EmpiricalJoint(base);
  const auto cs = EmpiricalJoint(sample);
  const double slack = 3 * HoeffdingTerm(0.01, sample.size());
  for (LabelIndex y = 0; y < 4; ++y) {
    EXPECT_NEAR(static_cast<double>(cs.LabelTotal(y)) / cs.total(),
                static_cast<double>(cb.LabelTotal(y)) / cb.total(), slack);
  }
}

}  // namespace
}  // namespace collusion
