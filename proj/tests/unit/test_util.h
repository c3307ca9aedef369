#ifndef COLLUSION_TESTS_UNIT_TEST_UTIL_H_
#define COLLUSION_TESTS_UNIT_TEST_UTIL_H_

#include <random>
#include <string>
#include <vector>

#include "collusion/dataset.h"
#include "collusion/universe.h"

namespace collusion::testing {

// Features f0..f{k-1} with the given category counts, categories c0..,
// labels y0...
inline UniversePtr SmallUniverse(const std::vector<int>& dims, int labels) {
  std::vector<Feature> features;
  for (std::size_t f = 0; f < dims.size(); ++f) {
    Feature feature{"f" + std::to_string(f), {}};
    for (int c = 0; c < dims[f]; ++c) {
      feature.categories.push_back("c" + std::to_string(c));
    }
    features.push_back(feature);
  }
  std::vector<std::string> names;
  for (int y = 0; y < labels; ++y) names.push_back("y" + std::to_string(y));
  return MakeUniverse(features, names);
}

inline Dataset RandomDataset(const UniversePtr& u, std::size_t rows,
                             std::uint64_t seed,
                             DatasetRole role = DatasetRole::kCollective) {
  std::mt19937_64 rng(seed);
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < rows; ++i) {
    samples.push_back({rng() % u->feature_cardinality(),
                       static_cast<LabelIndex>(rng() % u->num_labels())});
  }
  return {u, samples, role};
}

}  // namespace collusion::testing

#endif  // COLLUSION_TESTS_UNIT_TEST_UTIL_H_
