#ifndef COLLUSION_TRANSFORMATION_H_
#define COLLUSION_TRANSFORMATION_H_

#include <cstdint>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "collusion/universe.h"

namespace collusion {

// A feature-fixing map g: X -> X. Fixed features are forced to a category,
// the others pass through. Such maps are idempotent, and the signal set
// X~ = g(X) is the product of the unfixed features' categories.
class Transformation {
 public:
  Transformation(UniversePtr universe,
                 std::map<std::size_t, CategoryIndex> fixed);

  static Transformation Identity(UniversePtr universe) {
    return {std::move(universe), {}};
  }

  const Universe& universe() const { return *universe_; }
  const UniversePtr& universe_ptr() const { return universe_; }
  const std::map<std::size_t, CategoryIndex>& fixed() const { return fixed_; }

  FeatureCode Apply(FeatureCode x) const {
    return (x - FixedPart(x)) + image_offset_;
  }
  bool InSignalSet(FeatureCode x) const { return FixedPart(x) == image_offset_; }

  // #X~.
  std::uint64_t SignalSetSize() const { return signal_size_; }

  // Every element of X~ in ascending code order. Throws when #X~ exceeds
  // `limit`.
  std::vector<FeatureCode> EnumerateSignalSet(
      std::uint64_t limit = 10'000'000) const;

  bool is_idempotent() const { return true; }

  // {"fix": {"feature-name": "category-name", ...}}
  nlohmann::json ToJson() const;
  static Transformation FromJson(const nlohmann::json& j,
                                 UniversePtr universe);

 private:
  // Sums the positional contributions of the fixed features, walking the
  // free features instead when there are fewer of them.
  FeatureCode FixedPart(FeatureCode x) const {
    FeatureCode part = 0;
    for (std::size_t f : walk_) {
      part += static_cast<FeatureCode>(universe_->CategoryOf(x, f)) *
              universe_->stride(f);
    }
    return walk_free_ ? x - part : part;
  }

  UniversePtr universe_;
  std::map<std::size_t, CategoryIndex> fixed_;
  std::vector<std::size_t> walk_;
  bool walk_free_ = false;
  FeatureCode image_offset_ = 0;
  std::uint64_t signal_size_ = 1;
};

// Exposed as a free function to mirror the other strategy operations.
inline std::vector<FeatureCode> SignalSet(const Transformation& g) {
  return g.EnumerateSignalSet();
}

}  // namespace collusion

#endif  // COLLUSION_TRANSFORMATION_H_
