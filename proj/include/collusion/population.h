#ifndef COLLUSION_POPULATION_H_
#define COLLUSION_POPULATION_H_

#include <span>
#include <utility>
#include <vector>

#include "collusion/joint_counts.h"

namespace collusion {

// A population distribution over X x Y with explicit cell probabilities.
// Feature vectors with zero mass are not stored.
class PopulationDistribution {
 public:
  // Duplicate cells are summed. Requires nonnegative probabilities summing to
  // 1 within 1e-12.
  PopulationDistribution(UniversePtr universe,
                         std::vector<std::pair<Sample, double>> cells);

  // The empirical distribution of `counts`, read as a population.
  static PopulationDistribution FromCounts(const JointCounts& counts);

  const Universe& universe() const { return *universe_; }
  const UniversePtr& universe_ptr() const { return universe_; }

  std::span<const FeatureCode> features() const { return features_; }
  std::span<const double> LabelProbsAt(std::size_t row) const {
    const std::size_t k = universe_->num_labels();
    return {probs_.data() + row * k, k};
  }
  double MarginalAt(std::size_t row) const { return marginals_[row]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t Find(FeatureCode x) const;
  double PairProb(FeatureCode x, LabelIndex y) const;
  double MarginalProb(FeatureCode x) const;

 private:
  UniversePtr universe_;
  std::vector<FeatureCode> features_;
  std::vector<double> probs_;
  std::vector<double> marginals_;
};

}  // namespace collusion

#endif  // COLLUSION_POPULATION_H_
