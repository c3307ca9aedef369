#ifndef COLLUSION_DATASET_H_
#define COLLUSION_DATASET_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "collusion/universe.h"

namespace collusion {

struct Sample {
  FeatureCode x = 0;
  LabelIndex y = 0;

  bool operator==(const Sample&) const = default;
  auto operator<=>(const Sample&) const = default;
};

enum class DatasetRole {
  kBase,
  kCollective,
  kNonCollective,
  kTest,
  kEstimationSplit,
  kCollectiveModified,
};

std::string_view RoleName(DatasetRole role);

// An ordered multiset of samples over a universe. Immutable once built.
class Dataset {
 public:
  Dataset(UniversePtr universe, std::vector<Sample> samples,
          DatasetRole role = DatasetRole::kBase);

  const Universe& universe() const { return *universe_; }
  const UniversePtr& universe_ptr() const { return universe_; }
  std::span<const Sample> samples() const { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  DatasetRole role() const { return role_; }

  Dataset WithRole(DatasetRole role) const& { return {universe_, samples_, role}; }
  Dataset WithRole(DatasetRole role) && {
    return {std::move(universe_), std::move(samples_), role};
  }

 private:
  UniversePtr universe_;
  std::vector<Sample> samples_;
  DatasetRole role_;
};

// Random partition into a first part of size k (tagged estimation-split) and
// the remainder (tagged collective). Both parts keep the input's relative
// order. Deterministic per seed.
std::pair<Dataset, Dataset> SplitDataset(const Dataset& dataset,
                                         std::size_t k, std::uint64_t seed);

// Concatenation of datasets over the same universe.
Dataset Concatenate(const Dataset& first, const Dataset& second,
                    DatasetRole role);

}  // namespace collusion

#endif  // COLLUSION_DATASET_H_
