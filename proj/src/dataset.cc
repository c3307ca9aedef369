#include "collusion/dataset.h"

#include <algorithm>
#include <numeric>

#include "collusion/error.h"
#include "collusion/random.h"

namespace collusion {

std::string_view RoleName(DatasetRole role) {
  switch (role) {
    case DatasetRole::kBase:
      return "base";
    case DatasetRole::kCollective:
      return "collective";
    case DatasetRole::kNonCollective:
      return "non-collective";
    case DatasetRole::kTest:
      return "test";
    case DatasetRole::kEstimationSplit:
      return "estimation-split";
    case DatasetRole::kCollectiveModified:
      return "collective-modified";
  }
  return "unknown";
}

Dataset::Dataset(UniversePtr universe, std::vector<Sample> samples,
                 DatasetRole role)
    : universe_(std::move(universe)), samples_(std::move(samples)), role_(role) {
  if (!universe_) throw Error("dataset requires a universe");
  for (const auto& s : samples_) {
    if (!universe_->ContainsCode(s.x) || !universe_->ContainsLabel(s.y)) {
      throw Error("sample outside the universe");
    }
  }
}

std::pair<Dataset, Dataset> SplitDataset(const Dataset& dataset,
                                         std::size_t k, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (k == 0 || k >= n) {
    throw Error("split size must satisfy 0 < k < #dataset");
  }
  // Partial Fisher-Yates selects k positions; both parts keep input order.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + rng.UniformIndex(n - i)]);
  }
  std::vector<char> chosen(n, 0);
  for (std::size_t i = 0; i < k; ++i) chosen[idx[i]] = 1;

  std::vector<Sample> first;
  std::vector<Sample> second;
  first.reserve(k);
  second.reserve(n - k);
  for (std::size_t i = 0; i < n; ++i) {
    (chosen[i] ? first : second).push_back(dataset[i]);
  }
  return {Dataset(dataset.universe_ptr(), std::move(first),
                  DatasetRole::kEstimationSplit),
          Dataset(dataset.universe_ptr(), std::move(second),
                  DatasetRole::kCollective)};
}

Dataset Concatenate(const Dataset& first, const Dataset& second,
                    DatasetRole role) {
  if (!(first.universe() == second.universe())) {
    throw Error("cannot concatenate datasets over different universes");
  }
  std::vector<Sample> all(first.samples().begin(), first.samples().end());
  all.insert(all.end(), second.samples().begin(), second.samples().end());
  return {first.universe_ptr(), std::move(all), role};
}

}  // namespace collusion
