#include "collusion/idr.h"

#include <algorithm>
#include <map>

#include "collusion/error.h"

namespace collusion {
namespace {

struct ImageMass {
  double total = 0;
  std::vector<double> by_label;
};

// Mass of the population pushed through g, per signal feature.
std::map<FeatureCode, ImageMass> PushForward(const PopulationDistribution& d,
                                             const Transformation& g) {
  std::map<FeatureCode, ImageMass> out;
  const std::size_t k = d.universe().num_labels();
  for (std::size_t i = 0; i < d.features().size(); ++i) {
    auto& m = out[g.Apply(d.features()[i])];
    if (m.by_label.empty()) m.by_label.assign(k, 0.0);
    m.total += d.MarginalAt(i);
    const auto probs = d.LabelProbsAt(i);
    for (std::size_t y = 0; y < k; ++y) m.by_label[y] += probs[y];
  }
  return out;
}

// max_{y != y*} P(x, y) - P(x, y*).
double PlantGap(const PopulationDistribution& d, FeatureCode x,
                LabelIndex y_star) {
  const std::size_t row = d.Find(x);
  if (row == PopulationDistribution::npos) return 0.0;
  const auto probs = d.LabelProbsAt(row);
  double best = 0.0;
  for (LabelIndex y = 0; y < probs.size(); ++y) {
    if (y != y_star) best = std::max(best, probs[y]);
  }
  return best - probs[y_star];
}

LabelIndex Argmax(std::span<const double> probs, std::optional<LabelIndex> skip,
                  bool* tied) {
  std::optional<LabelIndex> best;
  for (LabelIndex y = 0; y < probs.size(); ++y) {
    if (skip && y == *skip) continue;
    if (!best || probs[y] > probs[*best]) best = y;
  }
  if (tied) {
    *tied = false;
    for (LabelIndex y = 0; y < probs.size(); ++y) {
      if (y != *best && (!skip || y != *skip) && probs[y] == probs[*best]) {
        *tied = true;
      }
    }
  }
  return *best;
}

}  // namespace

BoundReport IdrBound(const PopulationDistribution& dist,
                     const Transformation& g, Objective objective,
                     std::optional<LabelIndex> y_star, double alpha,
                     double epsilon, const LabelTable* labels) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must be in (0, 1)");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error("epsilon must be in [0, 1)");
  }
  const Universe& u = dist.universe();
  if (objective != Objective::kErasing) {
    if (!y_star) throw Error("target label required");
    if (!u.ContainsLabel(*y_star)) throw Error("target label outside universe");
  }

  BoundReport r;
  r.objective = objective;
  r.target = y_star;
  r.epsilon_term = epsilon / (1.0 - epsilon);
  auto verdict = [&](FeatureCode x, double weight, double first, double gap) {
    const double ind = alpha * first - (1.0 - alpha) * gap - r.epsilon_term;
    r.per_feature.push_back({x, weight, ind, ind > 0});
  };

  const auto image = PushForward(dist, g);
  switch (objective) {
    case Objective::kPlantingFeatureLabel:
      for (const auto& [xt, m] : image) {
        verdict(xt, m.total, m.total, PlantGap(dist, xt, *y_star));
      }
      break;
    case Objective::kPlantingFeatureOnly:
      // Outer measure over x ~ D, grouped by g(x).
      for (const auto& [xt, m] : image) {
        verdict(xt, m.total, m.by_label[*y_star], PlantGap(dist, xt, *y_star));
      }
      break;
    case Objective::kUnplanting:
      for (const auto& [xt, m] : image) {
        LabelIndex y_alt;
        if (labels && labels->Lookup(xt)) {
          y_alt = *labels->Lookup(xt);
        } else {
          const std::size_t row = dist.Find(xt);
          const std::vector<double> zero(u.num_labels(), 0.0);
          y_alt = Argmax(row == PopulationDistribution::npos
                             ? std::span<const double>(zero)
                             : dist.LabelProbsAt(row),
                         *y_star, nullptr);
        }
        const double gap = dist.PairProb(xt, *y_star) - dist.PairProb(xt, y_alt);
        verdict(xt, m.total, m.total, gap);
      }
      break;
    case Objective::kErasing: {
      std::map<FeatureCode, LabelIndex> opt;
      for (const auto& [xt, m] : image) {
        if (labels && labels->Lookup(xt)) {
          opt[xt] = *labels->Lookup(xt);
          continue;
        }
        const std::size_t row = dist.Find(xt);
        const std::vector<double> zero(u.num_labels(), 0.0);
        bool tied = false;
        opt[xt] = Argmax(row == PopulationDistribution::npos
                             ? std::span<const double>(zero)
                             : dist.LabelProbsAt(row),
                         std::nullopt, &tied);
        if (tied) {
          r.warnings.push_back("degenerate margin at " + u.Describe(xt) +
                               ": optimal label is tied");
        }
      }
      for (std::size_t i = 0; i < dist.features().size(); ++i) {
        const FeatureCode x = dist.features()[i];
        const LabelIndex y_opt = opt.at(g.Apply(x));
        const double p = dist.MarginalAt(i);
        verdict(x, p, p, PlantGap(dist, x, y_opt));
      }
      break;
    }
  }

  // The outer measure is a probability measure, so the bound is one minus
  // the uncracked mass.
  double uncracked = 0;
  for (const auto& v : r.per_feature) {
    if (!v.cracked) uncracked += v.weight;
  }
  r.bound = r.CrackedCount() == 0 ? 0.0 : std::max(0.0, 1.0 - uncracked);
  r.bound_clamped = r.bound;
  return r;
}

double PriorBoundPlanting(const PopulationDistribution& dist,
                          const Transformation& g, LabelIndex y_star,
                          double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must be in (0, 1)");
  if (!dist.universe().ContainsLabel(y_star)) {
    throw Error("target label outside universe");
  }
  double signal_mass = 0;
  double worst = 0;
  bool any = false;
  for (std::size_t i = 0; i < dist.features().size(); ++i) {
    const FeatureCode x = dist.features()[i];
    if (!g.InSignalSet(x)) continue;
    const double px = dist.MarginalAt(i);
    signal_mass += px;
    const auto probs = dist.LabelProbsAt(i);
    double gap = 0;  // y = y* contributes zero
    for (LabelIndex y = 0; y < probs.size(); ++y) {
      gap = std::max(gap, probs[y] / px - probs[y_star] / px);
    }
    worst = any ? std::max(worst, gap) : gap;
    any = true;
  }
  if (!any) return 1.0;
  return 1.0 - (1.0 - alpha) / alpha * signal_mass * worst;
}

double ErasureMargin(const PopulationDistribution& dist,
                     const Transformation& g) {
  const std::size_t k = dist.universe().num_labels();
  double margin = 0;
  bool first = true;
  for (const FeatureCode xt : g.EnumerateSignalSet()) {
    double top = 0;
    double second = 0;
    for (LabelIndex y = 0; y < k; ++y) {
      const double p = dist.PairProb(xt, y);
      if (p > top) {
        second = top;
        top = p;
      } else if (p > second) {
        second = p;
      }
    }
    margin = first ? top - second : std::min(margin, top - second);
    first = false;
  }
  return margin;
}

}  // namespace collusion
