#include "collusion/transformation.h"

#include "collusion/error.h"

namespace collusion {

Transformation::Transformation(UniversePtr universe,
                               std::map<std::size_t, CategoryIndex> fixed)
    : universe_(std::move(universe)), fixed_(std::move(fixed)) {
  if (!universe_) throw Error("transformation requires a universe");
  for (const auto& [f, c] : fixed_) {
    if (f >= universe_->num_features() || c >= universe_->num_categories(f)) {
      throw Error("transformation fixes a feature outside the universe");
    }
    image_offset_ += static_cast<FeatureCode>(c) * universe_->stride(f);
  }
  std::vector<std::size_t> free;
  for (std::size_t f = 0; f < universe_->num_features(); ++f) {
    if (fixed_.contains(f)) continue;
    signal_size_ *= universe_->num_categories(f);
    free.push_back(f);
  }
  walk_free_ = free.size() < fixed_.size();
  if (walk_free_) {
    walk_ = std::move(free);
  } else {
    for (const auto& [f, c] : fixed_) walk_.push_back(f);
  }
}

std::vector<FeatureCode> Transformation::EnumerateSignalSet(
    std::uint64_t limit) const {
  if (signal_size_ > limit) throw Error("signal set too large to enumerate");
  std::vector<std::size_t> free;
  for (std::size_t f = 0; f < universe_->num_features(); ++f) {
    if (!fixed_.contains(f)) free.push_back(f);
  }
  std::vector<FeatureCode> out;
  out.reserve(signal_size_);
  std::vector<CategoryIndex> digits(free.size(), 0);
  for (std::uint64_t i = 0; i < signal_size_; ++i) {
    FeatureCode code = image_offset_;
    for (std::size_t k = 0; k < free.size(); ++k) {
      code += static_cast<FeatureCode>(digits[k]) * universe_->stride(free[k]);
    }
    out.push_back(code);
    // Odometer over free features, last feature fastest: ascending codes.
    for (std::size_t k = free.size(); k-- > 0;) {
      if (++digits[k] < universe_->num_categories(free[k])) break;
      digits[k] = 0;
    }
  }
  return out;
}

nlohmann::json Transformation::ToJson() const {
  nlohmann::json fix = nlohmann::json::object();
  for (const auto& [f, c] : fixed_) {
    const auto& feature = universe_->feature(f);
    fix[feature.name] = feature.categories[c];
  }
  return {{"fix", fix}};
}

Transformation Transformation::FromJson(const nlohmann::json& j,
                                        UniversePtr universe) {
  std::map<std::size_t, CategoryIndex> fixed;
  for (const auto& [name, value] : j.at("fix").items()) {
    auto f = universe->FindFeature(name);
    if (!f) throw Error("unknown feature in transformation: " + name);
    const auto category = value.get<std::string>();
    auto c = universe->FindCategory(*f, category);
    if (!c) {
      throw Error("unknown category '" + category + "' for feature '" + name +
                  "'");
    }
    fixed[*f] = *c;
  }
  return {std::move(universe), std::move(fixed)};
}

}  // namespace collusion
