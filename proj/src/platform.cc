#include "collusion/platform.h"

#include <algorithm>
#include <ostream>

#include "collusion/csv_io.h"
#include "collusion/error.h"

namespace collusion {

MixtureCounts AssembleTraining(const Dataset& modified, const Dataset& rest) {
  if (modified.empty()) throw Error("modified collective data is empty");
  if (!(modified.universe() == rest.universe())) {
    throw Error("training parts use different universes");
  }
  const std::span<const Sample> parts[] = {modified.samples(), rest.samples()};
  return {JointCounts(modified.universe_ptr(), parts), modified.size(),
          rest.size()};
}

Classifier::Classifier(UniversePtr universe, std::vector<FeatureCode> features,
                       std::vector<LabelIndex> labels, LabelIndex fallback)
    : universe_(std::move(universe)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      fallback_(fallback) {
  if (features_.size() != labels_.size()) {
    throw Error("classifier table sizes differ");
  }
  if (!std::is_sorted(features_.begin(), features_.end())) {
    throw Error("classifier features must be sorted");
  }
}

std::optional<LabelIndex> Classifier::PredictObserved(FeatureCode x) const {
  auto it = std::lower_bound(features_.begin(), features_.end(), x);
  if (it == features_.end() || *it != x) return std::nullopt;
  return labels_[it - features_.begin()];
}

LabelIndex Classifier::Predict(FeatureCode x) const {
  return PredictObserved(x).value_or(fallback_);
}

void Classifier::ExportCsv(std::ostream& out) const {
  const Universe& u = *universe_;
  for (std::size_t f = 0; f < u.num_features(); ++f) {
    out << QuoteCsvField(u.feature(f).name) << ',';
  }
  out << "label\n";
  for (std::size_t i = 0; i < features_.size(); ++i) {
    for (std::size_t f = 0; f < u.num_features(); ++f) {
      out << QuoteCsvField(
                 u.feature(f).categories[u.CategoryOf(features_[i], f)])
          << ',';
    }
    out << QuoteCsvField(u.labels()[labels_[i]]) << '\n';
  }
}

Classifier FitArgmaxClassifier(const MixtureCounts& mix, TiePolicy tie,
                               FallbackPolicy fallback) {
  const JointCounts& c = mix.counts;
  const std::size_t k = c.universe().num_labels();
  auto pick = [&](auto count_of) {
    LabelIndex best = tie == TiePolicy::kLowestLabel
                          ? 0
                          : static_cast<LabelIndex>(k - 1);
    for (std::size_t j = 1; j < k; ++j) {
      const auto y = static_cast<LabelIndex>(
          tie == TiePolicy::kLowestLabel ? j : k - 1 - j);
      if (count_of(y) > count_of(best)) best = y;
    }
    return best;
  };

  std::vector<FeatureCode> features(c.features().begin(), c.features().end());
  std::vector<LabelIndex> labels;
  labels.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto row = c.LabelCountsAt(i);
    labels.push_back(pick([&](LabelIndex y) { return row[y]; }));
  }

  LabelIndex fallback_label = fallback.label;
  if (fallback.kind == FallbackPolicy::Kind::kGlobalMajority) {
    fallback_label = pick([&](LabelIndex y) { return c.LabelTotal(y); });
  } else if (!c.universe().ContainsLabel(fallback_label)) {
    throw Error("fallback label outside universe");
  }
  return {c.universe_ptr(), std::move(features), std::move(labels),
          fallback_label};
}

double EvaluateSuccess(const Classifier& classifier, const Dataset& test,
                       const Transformation& g, SuccessObjective objective,
                       std::optional<LabelIndex> y_star) {
  if (test.empty()) throw Error("empty test set");
  if (objective != SuccessObjective::kErasing && !y_star) {
    throw Error("target label required");
  }
  std::uint64_t hits = 0;
  for (const auto& s : test.samples()) {
    const LabelIndex signal = classifier.Predict(g.Apply(s.x));
    switch (objective) {
      case SuccessObjective::kPlanting:
        hits += signal == *y_star;
        break;
      case SuccessObjective::kUnplanting:
        hits += signal != *y_star;
        break;
      case SuccessObjective::kErasing:
        hits += signal == classifier.Predict(s.x);
        break;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

}  // namespace collusion
