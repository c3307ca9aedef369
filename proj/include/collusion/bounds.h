#ifndef COLLUSION_BOUNDS_H_
#define COLLUSION_BOUNDS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "collusion/concentration.h"
#include "collusion/error.h"
#include "collusion/dataset.h"
#include "collusion/strategies.h"
#include "collusion/transformation.h"

namespace collusion {

struct BoundParams {
  std::uint64_t N = 0;       // consumers in the platform's training set
  std::uint64_t N_test = 0;  // test-set size
  std::uint64_t n = 0;       // collective size
  std::optional<std::uint64_t> n_e;  // estimation split, unplanting only
  double delta = 0.05;
  double epsilon = 0.0;
  std::optional<double> eta;  // A1 margin, erasing only
  // Unplanting only: bound P(x~, y*) with the full collective instead of the
  // held-out part. Slightly sharper; off by default.
  bool sharp_unplanting = false;

  void Validate() const;
};

struct FeatureVerdict {
  FeatureCode feature = 0;  // x~ (planting, unplanting) or x' (erasing)
  double weight = 0;        // mass under the outer empirical measure
  double indicator = 0;     // argument of the strict-positivity indicator
  bool cracked = false;     // indicator > 0
};

struct BoundReport {
  Objective objective = Objective::kPlantingFeatureLabel;
  std::optional<LabelIndex> target;  // y*, or the chosen naive label
  double bound = 0;                  // may be negative (vacuous)
  double bound_clamped = 0;          // max(bound, 0)
  std::optional<double> delta_tilde;  // absent for infinite-data bounds
  double epsilon_term = 0;            // eps / (1 - eps)
  std::map<std::string, double> r_terms;
  std::vector<FeatureVerdict> per_feature;
  std::vector<std::string> warnings;

  std::size_t CrackedCount() const;
  double R(const std::string& name) const;
};

nlohmann::json ToJson(const BoundReport& report, const Universe& universe);

// Compact sweep form: n, bound, bound_clamped, delta_tilde, R_n, R_Nmn,
// R_Ntest, n_cracked.
std::string BoundCsvHeader();
std::string BoundCsvRow(std::uint64_t n, const BoundReport& report);

// Thrown by ErasingBound when n is outside the erasure sample window.
class ErasureWindowError : public Error {
 public:
  ErasureWindowError(std::uint64_t n, SampleWindow window);
  const SampleWindow& window() const { return window_; }

 private:
  SampleWindow window_;
};

// Feature-label planting lower bound from the collective's raw data D^(n).
BoundReport PlantingBoundFeatureLabel(const Dataset& collective,
                                      const Transformation& g,
                                      LabelIndex y_star,
                                      const BoundParams& params);

// Feature-only planting lower bound. The outer measure runs over x' ~ D^(n)
// and the first term uses P(g(x'), y*) under the modified data.
BoundReport PlantingBoundFeatureOnly(const Dataset& collective,
                                     const Transformation& g,
                                     LabelIndex y_star,
                                     const EscapeSelector& escape,
                                     const BoundParams& params);

// Adaptive unplanting lower bound. `estimation` (size n_e) picks the labels,
// `rest` (size n - n_e) estimates the gaps.
BoundReport UnplantingBound(const Dataset& estimation, const Dataset& rest,
                            const Transformation& g, LabelIndex y_star,
                            const BoundParams& params);

struct NaiveUnplantingResult {
  LabelIndex best_label = 0;
  BoundReport report;                    // report for best_label
  std::map<LabelIndex, BoundReport> candidates;  // every y' != y*
};

// Plants each y' != y* in turn and keeps the label with the largest bound.
// Ties go to the lowest label index.
NaiveUnplantingResult NaiveUnplantingBound(const Dataset& collective,
                                           const Transformation& g,
                                           LabelIndex y_star,
                                           const BoundParams& params);

// Erasure lower bound. Requires params.eta and n inside the erasure sample
// window; throws ErasureWindowError otherwise.
BoundReport ErasingBound(const Dataset& collective, const Transformation& g,
                         const BoundParams& params);

}  // namespace collusion

#endif  // COLLUSION_BOUNDS_H_
