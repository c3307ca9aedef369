#include "random_instances.h"

#include <map>
#include <string>

namespace oracle {
namespace {

int Uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

Instance RandomInstance(std::mt19937_64& rng, bool need_fixed, int min_n) {
  static const std::vector<std::vector<int>> kShapes = {
      {2}, {3}, {2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 2, 2}, {2, 2, 3}, {2, 3, 2},
      {3, 4}, {4, 3}, {2, 6}, {12}, {4, 2}};
  Instance in;
  in.dims = kShapes[Uniform(rng, 0, static_cast<int>(kShapes.size()) - 1)];
  in.labels = Uniform(rng, 2, 3);
  in.fixed.assign(in.dims.size(), -1);
  for (std::size_t f = 0; f < in.dims.size(); ++f) {
    if (Uniform(rng, 0, 1)) in.fixed[f] = Uniform(rng, 0, in.dims[f] - 1);
  }
  if (need_fixed) {
    bool any = false;
    for (int c : in.fixed) any = any || c >= 0;
    if (!any) {
      const int f = Uniform(rng, 0, static_cast<int>(in.dims.size()) - 1);
      in.fixed[f] = Uniform(rng, 0, in.dims[f] - 1);
    }
  }

  const int n = Uniform(rng, min_n, 50);
  const int favorite = Uniform(rng, 0, in.labels - 1);
  for (int i = 0; i < n; ++i) {
    Row r;
    for (int k : in.dims) r.x.push_back(Uniform(rng, 0, k - 1));
    // Half the rows land in the signal set so signal features get mass.
    if (Uniform(rng, 0, 1)) {
      for (std::size_t f = 0; f < in.dims.size(); ++f) {
        if (in.fixed[f] >= 0) r.x[f] = in.fixed[f];
      }
    }
    r.y = Uniform(rng, 0, 2) ? favorite : Uniform(rng, 0, in.labels - 1);
    in.data.push_back(r);
  }
  in.N = n + Uniform(rng, 1, Uniform(rng, 0, 1) ? 10 : 500);
  in.N_test = Uniform(rng, 1, 400);
  static const double kDeltas[] = {0.05, 0.2, 0.5, 1.0};
  in.delta = kDeltas[Uniform(rng, 0, 3)];
  static const double kEps[] = {0.0, 0.0, 0.01, 0.1};
  in.epsilon = kEps[Uniform(rng, 0, 3)];
  return in;
}

collusion::UniversePtr ToUniverse(const Instance& in) {
  std::vector<collusion::Feature> features;
  for (std::size_t f = 0; f < in.dims.size(); ++f) {
    collusion::Feature feature{"f" + std::to_string(f), {}};
    for (int c = 0; c < in.dims[f]; ++c) {
      feature.categories.push_back("c" + std::to_string(c));
    }
    features.push_back(feature);
  }
  std::vector<std::string> labels;
  for (int y = 0; y < in.labels; ++y) labels.push_back("y" + std::to_string(y));
  return collusion::MakeUniverse(features, labels);
}

collusion::Dataset ToDataset(const collusion::UniversePtr& u,
                             const std::vector<Row>& rows) {
  std::vector<collusion::Sample> samples;
  for (const auto& r : rows) {
    std::vector<collusion::CategoryIndex> x(r.x.begin(), r.x.end());
    samples.push_back({u->Encode(x), static_cast<collusion::LabelIndex>(r.y)});
  }
  return {u, samples, collusion::DatasetRole::kCollective};
}

collusion::Transformation ToTransformation(const collusion::UniversePtr& u,
                                           const Instance& in) {
  std::map<std::size_t, collusion::CategoryIndex> fixed;
  for (std::size_t f = 0; f < in.fixed.size(); ++f) {
    if (in.fixed[f] >= 0) {
      fixed[f] = static_cast<collusion::CategoryIndex>(in.fixed[f]);
    }
  }
  return {u, fixed};
}

std::vector<Row> FromDataset(const collusion::Dataset& d) {
  std::vector<Row> rows;
  for (const auto& s : d.samples()) {
    const auto x = d.universe().Decode(s.x);
    rows.push_back({std::vector<int>(x.begin(), x.end()), static_cast<int>(s.y)});
  }
  return rows;
}

}  // namespace oracle
