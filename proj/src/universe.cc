#include "collusion/universe.h"

#include <limits>
#include <set>

#include "collusion/error.h"

namespace collusion {
namespace {

void CheckUnique(const std::vector<std::string>& names,
                 const std::string& what) {
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) {
      throw Error("duplicate " + what + " name: " + name);
    }
  }
}

}  // namespace

Universe::Universe(std::vector<Feature> features,
                   std::vector<std::string> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.empty()) throw Error("universe needs at least one feature");
  if (labels_.size() < 2) throw Error("universe needs at least two labels");
  CheckUnique(labels_, "label");
  std::vector<std::string> names;
  for (const auto& f : features_) {
    if (f.categories.size() < 2) {
      throw Error("feature '" + f.name + "' needs at least two categories");
    }
    CheckUnique(f.categories, "category");
    names.push_back(f.name);
  }
  CheckUnique(names, "feature");

  strides_.assign(features_.size(), 1);
  cardinality_ = 1;
  for (std::size_t i = features_.size(); i-- > 0;) {
    strides_[i] = cardinality_;
    const std::uint64_t k = features_[i].categories.size();
    if (cardinality_ > std::numeric_limits<std::uint64_t>::max() / k) {
      throw Error("feature space too large to encode in 64 bits");
    }
    cardinality_ *= k;
  }
}

FeatureCode Universe::Encode(std::span<const CategoryIndex> x) const {
  if (x.size() != features_.size()) {
    throw Error("feature vector has wrong length");
  }
  FeatureCode code = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= features_[i].categories.size()) {
      throw Error("category index out of range for feature '" +
                  features_[i].name + "'");
    }
    code += static_cast<FeatureCode>(x[i]) * strides_[i];
  }
  return code;
}

FeatureVector Universe::Decode(FeatureCode code) const {
  FeatureVector x(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) x[i] = CategoryOf(code, i);
  return x;
}

std::optional<std::size_t> Universe::FindFeature(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<CategoryIndex> Universe::FindCategory(
    std::size_t feature, std::string_view name) const {
  const auto& cats = features_.at(feature).categories;
  for (std::size_t c = 0; c < cats.size(); ++c) {
    if (cats[c] == name) return static_cast<CategoryIndex>(c);
  }
  return std::nullopt;
}

std::optional<LabelIndex> Universe::FindLabel(std::string_view name) const {
  for (std::size_t y = 0; y < labels_.size(); ++y) {
    if (labels_[y] == name) return static_cast<LabelIndex>(y);
  }
  return std::nullopt;
}

LabelIndex Universe::LabelOrThrow(std::string_view name) const {
  if (auto y = FindLabel(name)) return *y;
  throw Error("unknown label: " + std::string(name));
}

std::string Universe::Describe(FeatureCode code) const {
  std::string out;
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (i) out += ';';
    out += features_[i].name;
    out += '=';
    out += features_[i].categories[CategoryOf(code, i)];
  }
  return out;
}

bool Universe::SameFeatures(const Universe& other) const {
  if (features_.size() != other.features_.size()) return false;
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name != other.features_[i].name ||
        features_[i].categories != other.features_[i].categories) {
      return false;
    }
  }
  return true;
}

nlohmann::json Universe::ToJson() const {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : features_) {
    features.push_back({{"name", f.name}, {"categories", f.categories}});
  }
  return {{"features", features}, {"labels", labels_}};
}

Universe Universe::FromJson(const nlohmann::json& j) {
  std::vector<Feature> features;
  for (const auto& f : j.at("features")) {
    features.push_back({f.at("name").get<std::string>(),
                        f.at("categories").get<std::vector<std::string>>()});
  }
  return {std::move(features), j.at("labels").get<std::vector<std::string>>()};
}

}  // namespace collusion
