#ifndef COLLUSION_PLATFORM_H_
#define COLLUSION_PLATFORM_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "collusion/joint_counts.h"
#include "collusion/transformation.h"

namespace collusion {

// The platform's training counts: the modified collective data concatenated
// with the non-collective data.
struct MixtureCounts {
  JointCounts counts;
  std::uint64_t n_modified = 0;
  std::uint64_t n_rest = 0;
};

// Throws on a universe mismatch or an empty modified part. The rest may be
// empty (n = N).
MixtureCounts AssembleTraining(const Dataset& modified, const Dataset& rest);

enum class TiePolicy { kLowestLabel, kHighestLabel };

struct FallbackPolicy {
  enum class Kind { kGlobalMajority, kFixedLabel };
  Kind kind = Kind::kGlobalMajority;
  LabelIndex label = 0;  // kFixedLabel only
};

// Empirical argmax classifier: for each observed x, a label maximizing the
// mixture count; unseen x get the fallback label.
class Classifier {
 public:
  Classifier(UniversePtr universe, std::vector<FeatureCode> features,
             std::vector<LabelIndex> labels, LabelIndex fallback);

  LabelIndex Predict(FeatureCode x) const;
  std::optional<LabelIndex> PredictObserved(FeatureCode x) const;
  LabelIndex fallback() const { return fallback_; }
  std::size_t size() const { return features_.size(); }
  const Universe& universe() const { return *universe_; }

  // Audit export: feature columns, then "label"; one row per observed x.
  void ExportCsv(std::ostream& out) const;

 private:
  UniversePtr universe_;
  std::vector<FeatureCode> features_;
  std::vector<LabelIndex> labels_;
  LabelIndex fallback_;
};

Classifier FitArgmaxClassifier(const MixtureCounts& mix,
                               TiePolicy tie = TiePolicy::kLowestLabel,
                               FallbackPolicy fallback = {});

enum class SuccessObjective { kPlanting, kUnplanting, kErasing };

// Test-time success:
//   planting    P(f(g(x)) = y*)
//   unplanting  P(f(g(x)) != y*)
//   erasing     P(f(g(x)) = f(x))
// y_star is required unless the objective is erasing.
double EvaluateSuccess(const Classifier& classifier, const Dataset& test,
                       const Transformation& g, SuccessObjective objective,
                       std::optional<LabelIndex> y_star = std::nullopt);

}  // namespace collusion

#endif  // COLLUSION_PLATFORM_H_
