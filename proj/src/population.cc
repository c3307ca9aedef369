#include "collusion/population.h"

#include <algorithm>
#include <cmath>

#include "collusion/error.h"

namespace collusion {

PopulationDistribution::PopulationDistribution(
    UniversePtr universe, std::vector<std::pair<Sample, double>> cells)
    : universe_(std::move(universe)) {
  const std::size_t k = universe_->num_labels();
  // Neumaier summation; empirical populations have millions of cells.
  double total = 0;
  double carry = 0;
  for (const auto& [s, p] : cells) {
    if (!universe_->ContainsCode(s.x) || !universe_->ContainsLabel(s.y)) {
      throw Error("population cell outside the universe");
    }
    if (!(p >= 0.0)) throw Error("population probabilities must be >= 0");
    const double t = total + p;
    carry += std::abs(total) >= p ? (total - t) + p : (p - t) + total;
    total = t;
  }
  if (std::abs(total + carry - 1.0) > 1e-12) {
    throw Error("population probabilities must sum to 1");
  }
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [s, p] : cells) {
    if (features_.empty() || features_.back() != s.x) {
      features_.push_back(s.x);
      probs_.resize(probs_.size() + k, 0.0);
      marginals_.push_back(0.0);
    }
    probs_[(features_.size() - 1) * k + s.y] += p;
    marginals_.back() += p;
  }
  // Drop feature vectors without mass.
  std::size_t kept = 0;
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (marginals_[i] <= 0.0) continue;
    features_[kept] = features_[i];
    marginals_[kept] = marginals_[i];
    std::copy_n(probs_.begin() + i * k, k, probs_.begin() + kept * k);
    ++kept;
  }
  features_.resize(kept);
  marginals_.resize(kept);
  probs_.resize(kept * k);
}

PopulationDistribution PopulationDistribution::FromCounts(
    const JointCounts& counts) {
  std::vector<std::pair<Sample, double>> cells;
  const double total = static_cast<double>(counts.total());
  for (std::size_t i = 0; i < counts.num_features(); ++i) {
    const auto row = counts.LabelCountsAt(i);
    for (LabelIndex y = 0; y < row.size(); ++y) {
      if (row[y]) {
        cells.push_back({{counts.features()[i], y},
                         static_cast<double>(row[y]) / total});
      }
    }
  }
  return {counts.universe_ptr(), std::move(cells)};
}

std::size_t PopulationDistribution::Find(FeatureCode x) const {
  auto it = std::lower_bound(features_.begin(), features_.end(), x);
  if (it == features_.end() || *it != x) return npos;
  return static_cast<std::size_t>(it - features_.begin());
}

double PopulationDistribution::PairProb(FeatureCode x, LabelIndex y) const {
  const std::size_t row = Find(x);
  if (row == npos || y >= universe_->num_labels()) return 0.0;
  return probs_[row * universe_->num_labels() + y];
}

double PopulationDistribution::MarginalProb(FeatureCode x) const {
  const std::size_t row = Find(x);
  return row == npos ? 0.0 : marginals_[row];
}

}  // namespace collusion
