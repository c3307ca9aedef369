#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "collusion/csv_io.h"
#include "collusion/error.h"
#include "collusion/joint_counts.h"
#include "test_util.h"

namespace collusion {
namespace {

using testing::RandomDataset;
using testing::SmallUniverse;

// One feature {a, b}, labels {1, 2}.
UniversePtr AbUniverse() {
  return MakeUniverse({{"x", {"a", "b"}}}, {"1", "2"});
}

Dataset AbDataset() {
  // [(a,1),(a,1),(b,2),(a,2)]
  return Dataset(AbUniverse(), {{0, 0}, {0, 0}, {1, 1}, {0, 1}});
}

TEST(UniverseTest, RejectsDegenerateSchemas) {
  EXPECT_THROW(MakeUniverse({{"x", {"a"}}}, {"1", "2"}), Error);
  EXPECT_THROW(MakeUniverse({{"x", {"a", "b"}}}, {"1"}), Error);
  EXPECT_THROW(MakeUniverse({{"x", {"a", "a"}}}, {"1", "2"}), Error);
  EXPECT_THROW(MakeUniverse({{"x", {"a", "b"}}, {"x", {"a", "b"}}}, {"1", "2"}),
               Error);
  EXPECT_THROW(MakeUniverse({{"x", {"a", "b"}}}, {"1", "1"}), Error);
}

TEST(UniverseTest, CardinalityAndEncoding) {
  const auto u = SmallUniverse({2, 3, 4}, 3);
  EXPECT_EQ(u->feature_cardinality(), 24u);
  EXPECT_EQ(u->num_labels(), 3u);
  for (FeatureCode code = 0; code < 24; ++code) {
    const auto x = u->Decode(code);
    EXPECT_EQ(u->Encode(x), code);
  }
  const std::vector<CategoryIndex> x = {1, 2, 3};
  EXPECT_EQ(u->Encode(x), 23u);
  const std::vector<CategoryIndex> bad = {2, 0, 0};
  EXPECT_THROW(u->Encode(bad), Error);
  EXPECT_EQ(u->WithCategory(23, 1, 0), u->Encode(std::vector<CategoryIndex>{1, 0, 3}));
}

TEST(UniverseTest, JsonRoundTrip) {
  const auto u = SmallUniverse({2, 3}, 2);
  EXPECT_EQ(Universe::FromJson(u->ToJson()), *u);
  EXPECT_EQ(u->Describe(5), "f0=c1;f1=c2");
}

TEST(DatasetTest, RejectsInvalidSamples) {
  EXPECT_THROW(Dataset(AbUniverse(), {{2, 0}}), Error);
  EXPECT_THROW(Dataset(AbUniverse(), {{0, 2}}), Error);
}

TEST(JointCountsTest, CountsSmallDataset) {
  const auto c = EmpiricalJoint(AbDataset());
  EXPECT_EQ(c.total(), 4u);
  EXPECT_EQ(c.Count(0, 0), 2u);
  EXPECT_EQ(c.Count(1, 1), 1u);
  EXPECT_EQ(c.Count(0, 1), 1u);
  EXPECT_DOUBLE_EQ(MarginalFeatureProb(c, 0), 0.75);
  EXPECT_DOUBLE_EQ(PairProb(c, 0, 0), 0.5);
  EXPECT_EQ(PairProb(c, 1, 0), 0.0);
}

TEST(JointCountsTest, SingleSample) {
  const auto c = EmpiricalJoint(Dataset(AbUniverse(), {{0, 0}}));
  EXPECT_EQ(PairProb(c, 0, 0), 1.0);
}

TEST(JointCountsTest, EmptyDatasetThrows) {
  try {
    EmpiricalJoint(Dataset(AbUniverse(), {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "empty dataset has no empirical distribution");
  }
}

TEST(JointCountsTest, AbsentFeatureHasZeroMass) {
  const auto c = EmpiricalJoint(Dataset(AbUniverse(), {{0, 0}}));
  EXPECT_EQ(MarginalFeatureProb(c, 1), 0.0);
}

TEST(JointCountsTest, UniformTwoByTwoMatchesIndependentTally) {
  const auto u = SmallUniverse({2}, 2);
  const auto d = RandomDataset(u, 50, 7);
  const auto c = EmpiricalJoint(d);
  std::map<std::pair<FeatureCode, LabelIndex>, int> tally;
  for (const auto& s : d.samples()) ++tally[{s.x, s.y}];
  for (FeatureCode x = 0; x < 2; ++x) {
    for (LabelIndex y = 0; y < 2; ++y) {
      EXPECT_EQ(c.Count(x, y), static_cast<std::uint64_t>(tally[{x, y}]));
      EXPECT_NEAR(PairProb(c, x, y), 0.25, 0.25);
    }
  }
}

TEST(JointCountsTest, MatchesLinearScan) {
  const auto u = SmallUniverse({3, 2, 4}, 3);
  const auto d = RandomDataset(u, 200, 11);
  const auto c = EmpiricalJoint(d);
  std::uint64_t cell_sum = 0;
  for (FeatureCode x = 0; x < u->feature_cardinality(); ++x) {
    int marginal = 0;
    double pair_sum = 0;
    for (LabelIndex y = 0; y < 3; ++y) {
      int count = 0;
      for (const auto& s : d.samples()) count += s.x == x && s.y == y;
      marginal += count;
      EXPECT_EQ(PairProb(c, x, y), count / 200.0);
      pair_sum += PairProb(c, x, y);
      cell_sum += c.Count(x, y);
    }
    EXPECT_EQ(MarginalFeatureProb(c, x), marginal / 200.0);
    EXPECT_NEAR(pair_sum, MarginalFeatureProb(c, x), 1e-15);
  }
  EXPECT_EQ(cell_sum, c.total());
}

TEST(SplitDatasetTest, BoundaryAndRange) {
  const auto d = RandomDataset(SmallUniverse({3}, 2), 10, 1);
  auto [first, second] = SplitDataset(d, 9, 3);
  EXPECT_EQ(first.size(), 9u);
  EXPECT_EQ(second.size(), 1u);
  EXPECT_EQ(first.role(), DatasetRole::kEstimationSplit);
  EXPECT_EQ(second.role(), DatasetRole::kCollective);
  EXPECT_THROW(SplitDataset(d, 0, 3), Error);
  EXPECT_THROW(SplitDataset(d, 10, 3), Error);
}

TEST(SplitDatasetTest, DeterministicPartition) {
  const auto d = RandomDataset(SmallUniverse({4, 3}, 3), 10'000, 2);
  auto sorted = [](const Dataset& a, const Dataset& b) {
    std::vector<Sample> all(a.samples().begin(), a.samples().end());
    all.insert(all.end(), b.samples().begin(), b.samples().end());
    std::sort(all.begin(), all.end());
    return all;
  };
  std::vector<Sample> input(d.samples().begin(), d.samples().end());
  std::sort(input.begin(), input.end());

  auto [a1, b1] = SplitDataset(d, 2'000, 5);
  auto [a2, b2] = SplitDataset(d, 2'000, 5);
  auto [a3, b3] = SplitDataset(d, 2'000, 6);
  EXPECT_TRUE(std::equal(a1.samples().begin(), a1.samples().end(),
                         a2.samples().begin(), a2.samples().end()));
  EXPECT_FALSE(std::equal(a1.samples().begin(), a1.samples().end(),
                          a3.samples().begin(), a3.samples().end()));
  EXPECT_EQ(a3.size(), 2'000u);
  EXPECT_EQ(b3.size(), 8'000u);
  EXPECT_EQ(sorted(a1, b1), input);
  EXPECT_EQ(sorted(a3, b3), input);
}

TEST(CsvTest, RoundTripIsExact) {
  const auto u = MakeUniverse(
      {{"plain", {"a", "b"}}, {"odd, name", {"with \"quote\"", "x,y"}}},
      {"good", "bad"});
  const auto d = RandomDataset(u, 300, 9);
  std::stringstream first;
  WriteDatasetCsv(first, d);
  const auto back = ReadDatasetCsv(first, u);
  ASSERT_EQ(back.size(), d.size());
  EXPECT_TRUE(std::equal(back.samples().begin(), back.samples().end(),
                         d.samples().begin()));
  std::stringstream second;
  WriteDatasetCsv(second, back);
  std::stringstream again;
  WriteDatasetCsv(again, d);
  EXPECT_EQ(second.str(), again.str());
}

TEST(CsvTest, InferredSchemaUsesFirstAppearance) {
  std::stringstream in("color,size,label\nred,S,no\nblue,M,yes\nred,M,no\n");
  const auto d = ReadDatasetCsvInferred(in);
  EXPECT_EQ(d.universe().feature(0).categories,
            (std::vector<std::string>{"red", "blue"}));
  EXPECT_EQ(d.universe().labels(), (std::vector<std::string>{"no", "yes"}));
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d[1].y, 1u);
}

TEST(CsvTest, RejectsUnknownCategory) {
  std::stringstream in("x,label\nc,1\n");
  EXPECT_THROW(ReadDatasetCsv(in, AbUniverse()), Error);
}

}  // namespace
}  // namespace collusion
