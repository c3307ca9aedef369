#include "collusion/joint_counts.h"

#include <algorithm>

#include "collusion/error.h"

namespace collusion {

JointCounts::JointCounts(UniversePtr universe,
                         std::span<const std::span<const Sample>> parts)
    : universe_(std::move(universe)) {
  std::vector<Sample> all;
  std::size_t total = 0;
  for (const auto& part : parts) total += part.size();
  if (total == 0) throw Error("empty dataset has no empirical distribution");
  all.reserve(total);
  for (const auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end());

  const std::size_t k = universe_->num_labels();
  label_totals_.assign(k, 0);
  for (const auto& s : all) {
    if (features_.empty() || features_.back() != s.x) {
      features_.push_back(s.x);
      counts_.resize(counts_.size() + k, 0);
      feature_totals_.push_back(0);
    }
    ++counts_[(features_.size() - 1) * k + s.y];
    ++feature_totals_.back();
    ++label_totals_[s.y];
  }
  total_ = total;
}

std::size_t JointCounts::Find(FeatureCode x) const {
  auto it = std::lower_bound(features_.begin(), features_.end(), x);
  if (it == features_.end() || *it != x) return npos;
  return static_cast<std::size_t>(it - features_.begin());
}

std::uint64_t JointCounts::Count(FeatureCode x, LabelIndex y) const {
  const std::size_t row = Find(x);
  if (row == npos || y >= universe_->num_labels()) return 0;
  return counts_[row * universe_->num_labels() + y];
}

std::uint64_t JointCounts::FeatureCount(FeatureCode x) const {
  const std::size_t row = Find(x);
  return row == npos ? 0 : feature_totals_[row];
}

double JointCounts::PairProb(FeatureCode x, LabelIndex y) const {
  return static_cast<double>(Count(x, y)) / static_cast<double>(total_);
}

double JointCounts::MarginalFeatureProb(FeatureCode x) const {
  return static_cast<double>(FeatureCount(x)) / static_cast<double>(total_);
}

JointCounts EmpiricalJoint(const Dataset& dataset) {
  const std::span<const Sample> parts[] = {dataset.samples()};
  return JointCounts(dataset.universe_ptr(), parts);
}

}  // namespace collusion
