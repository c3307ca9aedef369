#ifndef COLLUSION_JOINT_COUNTS_H_
#define COLLUSION_JOINT_COUNTS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "collusion/dataset.h"

namespace collusion {

// Exact integer co-occurrence counts over the observed cells of X x Y.
// Observed feature vectors are kept sorted by code; every probability is a
// count ratio computed at query time.
class JointCounts {
 public:
  // Counts over the concatenation of the given sample ranges. Throws on an
  // empty input.
  JointCounts(UniversePtr universe,
              std::span<const std::span<const Sample>> parts);

  const Universe& universe() const { return *universe_; }
  const UniversePtr& universe_ptr() const { return universe_; }
  std::uint64_t total() const { return total_; }

  // Observed feature vectors, ascending.
  std::span<const FeatureCode> features() const { return features_; }
  std::size_t num_features() const { return features_.size(); }

  // Row of `x` in features(), or npos when unseen.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t Find(FeatureCode x) const;

  std::uint64_t Count(FeatureCode x, LabelIndex y) const;
  std::uint64_t FeatureCount(FeatureCode x) const;
  // Per-label counts at a row; size #Y.
  std::span<const std::uint64_t> LabelCountsAt(std::size_t row) const {
    const std::size_t k = universe_->num_labels();
    return {counts_.data() + row * k, k};
  }
  std::uint64_t FeatureCountAt(std::size_t row) const {
    return feature_totals_[row];
  }
  std::uint64_t LabelTotal(LabelIndex y) const { return label_totals_.at(y); }

  double PairProb(FeatureCode x, LabelIndex y) const;
  double MarginalFeatureProb(FeatureCode x) const;

 private:
  UniversePtr universe_;
  std::uint64_t total_ = 0;
  std::vector<FeatureCode> features_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> feature_totals_;
  std::vector<std::uint64_t> label_totals_;
};

// Empirical joint distribution of a dataset. Throws
// "empty dataset has no empirical distribution" when the dataset is empty.
JointCounts EmpiricalJoint(const Dataset& dataset);

inline double MarginalFeatureProb(const JointCounts& counts, FeatureCode x) {
  return counts.MarginalFeatureProb(x);
}
inline double PairProb(const JointCounts& counts, FeatureCode x,
                       LabelIndex y) {
  return counts.PairProb(x, y);
}

}  // namespace collusion

#endif  // COLLUSION_JOINT_COUNTS_H_
