#ifndef COLLUSION_CONCENTRATION_H_
#define COLLUSION_CONCENTRATION_H_

#include <cstdint>
#include <string_view>

namespace collusion {

enum class Objective {
  kPlantingFeatureLabel,
  kPlantingFeatureOnly,
  kUnplanting,
  kErasing,
};

std::string_view ObjectiveName(Objective objective);

// Hoeffding error term sqrt(ln(1/delta) / (2k)). Natural log.
// Requires delta in (0, 1] and k >= 1.
double HoeffdingTerm(double delta_tilde, std::uint64_t k);

// Failure budget of one theorem: delta is split across all the concentration
// events the theorem union-bounds over.
struct ConfidenceBudget {
  double delta = 0.05;
  Objective objective = Objective::kPlantingFeatureLabel;
  double card_signal = 1;    // #X~
  double card_labels = 2;    // #Y
  double card_features = 1;  // #X, erasing only

  void Validate() const;
};

// Number of union-bounded events for the budget's objective:
//   planting (both strategies): 2 + 2#X~ + 2#X~#Y
//   unplanting:                 2 + 6#X~
//   erasing:                    2 + #X~#Y + 2#X + 2#X#Y
double UnionEventCount(const ConfidenceBudget& budget);

// delta / UnionEventCount(budget).
double UnionDelta(const ConfidenceBudget& budget);

// Range of collective sizes for which the erasure labels are guaranteed:
// ceil(t) <= n <= floor(N - t) with t = 2 ln(1/delta_tilde) / eta^2.
struct SampleWindow {
  std::int64_t n_min = 0;
  std::int64_t n_max = 0;
  double threshold = 0;  // t, before rounding

  bool empty() const { return n_min > n_max; }
  bool Contains(std::uint64_t n) const {
    const auto v = static_cast<std::int64_t>(n);
    return v >= n_min && v <= n_max;
  }
};

SampleWindow ErasureSampleWindow(double delta_tilde, double eta,
                                 std::uint64_t N);

}  // namespace collusion

#endif  // COLLUSION_CONCENTRATION_H_
