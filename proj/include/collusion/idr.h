#ifndef COLLUSION_IDR_H_
#define COLLUSION_IDR_H_

#include <optional>

#include "collusion/bounds.h"
#include "collusion/population.h"

namespace collusion {

// Infinite-data-regime lower bound on S(alpha) for the platform observing
// alpha * D~ + (1 - alpha) * D. No estimation terms.
//
// `y_star` is required for both planting objectives and for unplanting.
// `labels` optionally overrides the exact population labels: y_{x~} for
// unplanting, y*_{x~} for erasing. Without it they are the population argmax
// (over labels other than y* for unplanting). When the erasing argmax is tied
// the report carries a degenerate-margin warning.
BoundReport IdrBound(const PopulationDistribution& dist,
                     const Transformation& g, Objective objective,
                     std::optional<LabelIndex> y_star, double alpha,
                     double epsilon = 0.0,
                     const LabelTable* labels = nullptr);

// The earlier population-level planting bound
//   1 - ((1 - alpha) / alpha) P(X~) max_{x~} max_y (P(y|x~) - P(y*|x~)),
// with the max over signal features of positive mass. Returns 1 when no such
// feature exists. May be negative.
double PriorBoundPlanting(const PopulationDistribution& dist,
                          const Transformation& g, LabelIndex y_star,
                          double alpha);

// The largest eta for which the population satisfies
//   P(x~, y*_{x~}) > P(x~, y') + eta  for all x~ in X~ and y' != y*_{x~},
// i.e. the minimum over X~ of the gap between the top two labels. Zero or
// negative values mean the assumption fails.
double ErasureMargin(const PopulationDistribution& dist,
                     const Transformation& g);

}  // namespace collusion

#endif  // COLLUSION_IDR_H_
