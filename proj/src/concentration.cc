#include "collusion/concentration.h"

#include <cmath>

#include "collusion/error.h"

namespace collusion {

std::string_view ObjectiveName(Objective objective) {
  switch (objective) {
    case Objective::kPlantingFeatureLabel:
      return "planting-fl";
    case Objective::kPlantingFeatureOnly:
      return "planting-fo";
    case Objective::kUnplanting:
      return "unplanting";
    case Objective::kErasing:
      return "erasing";
  }
  return "unknown";
}

double HoeffdingTerm(double delta_tilde, std::uint64_t k) {
  if (k == 0) throw Error("Hoeffding term needs k >= 1");
  if (!(delta_tilde > 0.0 && delta_tilde <= 1.0)) {
    throw Error("Hoeffding term needs delta in (0, 1]");
  }
  return std::sqrt(-std::log(delta_tilde) / (2.0 * static_cast<double>(k)));
}

void ConfidenceBudget::Validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error("delta must be in (0, 1]");
  if (!(card_signal >= 1 && card_labels >= 1 && card_features >= 1)) {
    throw Error("cardinalities must be at least 1");
  }
}

double UnionEventCount(const ConfidenceBudget& b) {
  switch (b.objective) {
    case Objective::kPlantingFeatureLabel:
    case Objective::kPlantingFeatureOnly:
      return 2 + 2 * b.card_signal + 2 * b.card_signal * b.card_labels;
    case Objective::kUnplanting:
      return 2 + 6 * b.card_signal;
    case Objective::kErasing:
      return 2 + b.card_signal * b.card_labels + 2 * b.card_features +
             2 * b.card_features * b.card_labels;
  }
  throw Error("unknown objective");
}

double UnionDelta(const ConfidenceBudget& budget) {
  budget.Validate();
  return budget.delta / UnionEventCount(budget);
}

SampleWindow ErasureSampleWindow(double delta_tilde, double eta,
                                 std::uint64_t N) {
  if (!(eta > 0.0)) throw Error("eta must be positive");
  if (!(delta_tilde > 0.0 && delta_tilde <= 1.0)) {
    throw Error("delta must be in (0, 1]");
  }
  SampleWindow w;
  w.threshold = 2.0 * -std::log(delta_tilde) / (eta * eta);
  w.n_min = static_cast<std::int64_t>(std::ceil(w.threshold));
  w.n_max = static_cast<std::int64_t>(
      std::floor(static_cast<double>(N) - w.threshold));
  return w;
}

}  // namespace collusion
