#ifndef COLLUSION_UNIVERSE_H_
#define COLLUSION_UNIVERSE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace collusion {

using CategoryIndex = std::uint32_t;
using LabelIndex = std::uint32_t;

// A feature vector packed as a mixed-radix integer. The first feature is the
// most significant digit, so ordering codes orders feature vectors
// lexicographically by category index.
using FeatureCode = std::uint64_t;

using FeatureVector = std::vector<CategoryIndex>;

struct Feature {
  std::string name;
  std::vector<std::string> categories;
};

// The finite schema X x Y: ordered categorical features and an ordered label
// set. #X must fit in 64 bits so that every feature vector has a code.
class Universe {
 public:
  Universe(std::vector<Feature> features, std::vector<std::string> labels);

  std::size_t num_features() const { return features_.size(); }
  const Feature& feature(std::size_t i) const { return features_.at(i); }
  const std::vector<Feature>& features() const { return features_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t num_labels() const { return labels_.size(); }

  // #X, the product of per-feature category counts.
  std::uint64_t feature_cardinality() const { return cardinality_; }

  std::size_t num_categories(std::size_t feature) const {
    return features_.at(feature).categories.size();
  }
  std::uint64_t stride(std::size_t feature) const { return strides_[feature]; }

  FeatureCode Encode(std::span<const CategoryIndex> x) const;
  FeatureVector Decode(FeatureCode code) const;
  CategoryIndex CategoryOf(FeatureCode code, std::size_t feature) const {
    return static_cast<CategoryIndex>((code / strides_[feature]) %
                                      features_[feature].categories.size());
  }
  FeatureCode WithCategory(FeatureCode code, std::size_t feature,
                           CategoryIndex category) const {
    return code - static_cast<FeatureCode>(CategoryOf(code, feature)) *
                      strides_[feature] +
           static_cast<FeatureCode>(category) * strides_[feature];
  }
  bool ContainsCode(FeatureCode code) const { return code < cardinality_; }
  bool ContainsLabel(LabelIndex y) const { return y < labels_.size(); }

  std::optional<std::size_t> FindFeature(std::string_view name) const;
  std::optional<CategoryIndex> FindCategory(std::size_t feature,
                                            std::string_view name) const;
  std::optional<LabelIndex> FindLabel(std::string_view name) const;
  LabelIndex LabelOrThrow(std::string_view name) const;

  // Human-readable "name=category;..." rendering of a feature vector.
  std::string Describe(FeatureCode code) const;

  bool operator==(const Universe& other) const {
    return labels_ == other.labels_ && SameFeatures(other);
  }

  nlohmann::json ToJson() const;
  static Universe FromJson(const nlohmann::json& j);

 private:
  bool SameFeatures(const Universe& other) const;

  std::vector<Feature> features_;
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t cardinality_ = 1;
};

using UniversePtr = std::shared_ptr<const Universe>;

inline UniversePtr MakeUniverse(std::vector<Feature> features,
                                std::vector<std::string> labels) {
  return std::make_shared<const Universe>(std::move(features),
                                          std::move(labels));
}

}  // namespace collusion

#endif  // COLLUSION_UNIVERSE_H_
