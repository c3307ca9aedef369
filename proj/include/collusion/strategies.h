#ifndef COLLUSION_STRATEGIES_H_
#define COLLUSION_STRATEGIES_H_

#include <map>
#include <optional>

#include "collusion/dataset.h"
#include "collusion/transformation.h"

namespace collusion {

// Per-signal-feature labels produced by the unplanting and erasure
// estimators. Keys are the signal features the estimator observed; lookups of
// anything else fall back to the default label when one is set.
class LabelTable {
 public:
  LabelTable() = default;
  LabelTable(std::map<FeatureCode, LabelIndex> estimated,
             std::optional<LabelIndex> default_label)
      : estimated_(std::move(estimated)), default_label_(default_label) {}

  std::optional<LabelIndex> Lookup(FeatureCode signal_feature) const {
    if (auto it = estimated_.find(signal_feature); it != estimated_.end()) {
      return it->second;
    }
    return default_label_;
  }
  // Coverage flag: true when the label was estimated from data rather than
  // defaulted.
  bool IsEstimated(FeatureCode signal_feature) const {
    return estimated_.contains(signal_feature);
  }
  const std::map<FeatureCode, LabelIndex>& estimated() const {
    return estimated_;
  }
  std::optional<LabelIndex> default_label() const { return default_label_; }

 private:
  std::map<FeatureCode, LabelIndex> estimated_;
  std::optional<LabelIndex> default_label_;
};

// Chooses the out-of-signal-set feature x0 that the feature-only strategy
// assigns to samples whose label differs from the target.
class EscapeSelector {
 public:
  // Default: take g(x) and move its first fixed feature to the next category.
  // The result differs from every element of X~ on that feature.
  static EscapeSelector FlipFirstFixed() { return EscapeSelector({}); }

  // Overwrites the listed features and keeps the sample's own value for the
  // rest. With every feature listed this is a constant x0. The overwrite must
  // disagree with g on at least one fixed feature.
  static EscapeSelector Overwrite(std::map<std::size_t, CategoryIndex> values) {
    return EscapeSelector(std::move(values));
  }

  // Throws "no escape feature exists" when X~ = X, and when an overwrite
  // cannot leave X~.
  void Validate(const Transformation& g) const;
  FeatureCode Select(FeatureCode x, const Transformation& g) const;

  bool is_overwrite() const { return !overwrite_.empty(); }
  const std::map<std::size_t, CategoryIndex>& overwrite() const {
    return overwrite_;
  }

 private:
  explicit EscapeSelector(std::map<std::size_t, CategoryIndex> overwrite)
      : overwrite_(std::move(overwrite)) {}

  std::map<std::size_t, CategoryIndex> overwrite_;
};

// h(x, y) = (g(x), y*).
Dataset ApplyFeatureLabel(const Dataset& dataset, const Transformation& g,
                          LabelIndex y_star);

// h(x, y) = (g(x), y*) if y = y*, else (x0, y) with x0 outside X~.
Dataset ApplyFeatureOnly(const Dataset& dataset, const Transformation& g,
                         LabelIndex y_star, const EscapeSelector& escape);

// For every signal feature seen in `estimation`, the most frequent label other
// than y* among samples whose feature is exactly that signal feature. Ties go
// to the lowest label index; unseen signal features default to the first
// label other than y*.
LabelTable EstimateUnplantLabels(const Dataset& estimation,
                                 const Transformation& g, LabelIndex y_star);

// h(x, y) = (g(x), table[g(x)]).
Dataset ApplyUnplanting(const Dataset& dataset, const Transformation& g,
                        const LabelTable& table);

// Unrestricted argmax label per observed signal feature, lowest index on
// ties. Unseen signal features default to label 0, the argmax of an all-zero
// row under the same tie rule.
LabelTable EstimateErasureLabels(const Dataset& collective,
                                 const Transformation& g);

// h(x, y) = (x, table[g(x)]).
Dataset ApplyErasure(const Dataset& dataset, const Transformation& g,
                     const LabelTable& table);

}  // namespace collusion

#endif  // COLLUSION_STRATEGIES_H_
