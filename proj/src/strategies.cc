#include "collusion/strategies.h"

#include <map>

#include "collusion/error.h"

namespace collusion {
namespace {

// Label counts per signal feature over samples lying exactly in X~.
std::map<FeatureCode, std::vector<std::uint64_t>> SignalCounts(
    const Dataset& dataset, const Transformation& g) {
  std::map<FeatureCode, std::vector<std::uint64_t>> counts;
  const std::size_t k = dataset.universe().num_labels();
  for (const auto& s : dataset.samples()) {
    if (!g.InSignalSet(s.x)) continue;
    auto& row = counts[s.x];
    if (row.empty()) row.assign(k, 0);
    ++row[s.y];
  }
  return counts;
}

LabelIndex LookupOrThrow(const LabelTable& table, FeatureCode x) {
  if (auto y = table.Lookup(x)) return *y;
  throw Error("label table has no entry for a signal feature");
}

}  // namespace

void EscapeSelector::Validate(const Transformation& g) const {
  const Universe& u = g.universe();
  if (g.fixed().empty()) throw Error("no escape feature exists");
  for (const auto& [f, c] : overwrite_) {
    if (f >= u.num_features() || c >= u.num_categories(f)) {
      throw Error("escape feature outside the universe");
    }
  }
  if (overwrite_.empty()) return;
  for (const auto& [f, c] : overwrite_) {
    auto it = g.fixed().find(f);
    if (it != g.fixed().end() && it->second != c) return;
  }
  throw Error("no escape feature exists");
}

FeatureCode EscapeSelector::Select(FeatureCode x,
                                   const Transformation& g) const {
  const Universe& u = g.universe();
  if (overwrite_.empty()) {
    const auto& [f, c] = *g.fixed().begin();
    const auto next =
        static_cast<CategoryIndex>((c + 1) % u.num_categories(f));
    return u.WithCategory(g.Apply(x), f, next);
  }
  for (const auto& [f, c] : overwrite_) x = u.WithCategory(x, f, c);
  return x;
}

Dataset ApplyFeatureLabel(const Dataset& dataset, const Transformation& g,
                          LabelIndex y_star) {
  if (!dataset.universe().ContainsLabel(y_star)) throw Error("invalid label");
  std::vector<Sample> out;
  out.reserve(dataset.size());
  for (const auto& s : dataset.samples()) out.push_back({g.Apply(s.x), y_star});
  return {dataset.universe_ptr(), std::move(out),
          DatasetRole::kCollectiveModified};
}

Dataset ApplyFeatureOnly(const Dataset& dataset, const Transformation& g,
                         LabelIndex y_star, const EscapeSelector& escape) {
  if (!dataset.universe().ContainsLabel(y_star)) throw Error("invalid label");
  escape.Validate(g);
  std::vector<Sample> out;
  out.reserve(dataset.size());
  for (const auto& s : dataset.samples()) {
    if (s.y == y_star) {
      out.push_back({g.Apply(s.x), s.y});
    } else {
      out.push_back({escape.Select(s.x, g), s.y});
    }
  }
  return {dataset.universe_ptr(), std::move(out),
          DatasetRole::kCollectiveModified};
}

LabelTable EstimateUnplantLabels(const Dataset& estimation,
                                 const Transformation& g, LabelIndex y_star) {
  const Universe& u = estimation.universe();
  if (!u.ContainsLabel(y_star)) throw Error("invalid label");
  if (u.num_labels() < 2) throw Error("no label other than y* exists");
  std::map<FeatureCode, LabelIndex> labels;
  for (const auto& [x, row] : SignalCounts(estimation, g)) {
    std::optional<LabelIndex> best;
    for (LabelIndex y = 0; y < row.size(); ++y) {
      if (y == y_star) continue;
      if (!best || row[y] > row[*best]) best = y;
    }
    labels[x] = *best;
  }
  const LabelIndex fallback = y_star == 0 ? 1 : 0;
  return {std::move(labels), fallback};
}

Dataset ApplyUnplanting(const Dataset& dataset, const Transformation& g,
                        const LabelTable& table) {
  std::vector<Sample> out;
  out.reserve(dataset.size());
  for (const auto& s : dataset.samples()) {
    const FeatureCode x = g.Apply(s.x);
    out.push_back({x, LookupOrThrow(table, x)});
  }
  return {dataset.universe_ptr(), std::move(out),
          DatasetRole::kCollectiveModified};
}

LabelTable EstimateErasureLabels(const Dataset& collective,
                                 const Transformation& g) {
  std::map<FeatureCode, LabelIndex> labels;
  for (const auto& [x, row] : SignalCounts(collective, g)) {
    LabelIndex best = 0;
    for (LabelIndex y = 1; y < row.size(); ++y) {
      if (row[y] > row[best]) best = y;
    }
    labels[x] = best;
  }
  return {std::move(labels), LabelIndex{0}};
}

Dataset ApplyErasure(const Dataset& dataset, const Transformation& g,
                     const LabelTable& table) {
  std::vector<Sample> out;
  out.reserve(dataset.size());
  for (const auto& s : dataset.samples()) {
    out.push_back({s.x, LookupOrThrow(table, g.Apply(s.x))});
  }
  return {dataset.universe_ptr(), std::move(out),
          DatasetRole::kCollectiveModified};
}

}  // namespace collusion
