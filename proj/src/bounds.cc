#include "collusion/bounds.h"

#include <algorithm>
#include <cstdio>

#include "collusion/error.h"
#include "collusion/joint_counts.h"

namespace collusion {
namespace {

constexpr const char* kRn = "R(n)";
constexpr const char* kRnRest = "R(n-n_e)";
constexpr const char* kRNmn = "R(N-n)";
constexpr const char* kRNtest = "R(N_test)";

double Ratio(std::uint64_t a, std::uint64_t b) {
  return static_cast<double>(a) / static_cast<double>(b);
}

// Samples (g(x), y) of a dataset; their counts give the mass of each signal
// feature under the transformed data.
JointCounts ImageCounts(const Dataset& dataset, const Transformation& g) {
  std::vector<Sample> image;
  image.reserve(dataset.size());
  for (const auto& s : dataset.samples()) image.push_back({g.Apply(s.x), s.y});
  const std::span<const Sample> parts[] = {image};
  return JointCounts(dataset.universe_ptr(), parts);
}

// max_{y' != y*} c(x, y') - c(x, y*) at a row of raw counts, as a count.
double PlantGapCount(std::span<const std::uint64_t> row, LabelIndex y_star) {
  std::uint64_t best = 0;
  for (LabelIndex y = 0; y < row.size(); ++y) {
    if (y != y_star) best = std::max(best, row[y]);
  }
  return static_cast<double>(best) - static_cast<double>(row[y_star]);
}

double PlantGap(const JointCounts& raw, FeatureCode x, LabelIndex y_star) {
  const std::size_t row = raw.Find(x);
  if (row == JointCounts::npos) return 0.0;
  return PlantGapCount(raw.LabelCountsAt(row), y_star) /
         static_cast<double>(raw.total());
}

void CheckTarget(const Universe& u, LabelIndex y_star) {
  if (!u.ContainsLabel(y_star)) throw Error("target label outside universe");
}

void CheckSize(const Dataset& d, std::uint64_t expected, const char* what) {
  if (d.size() != expected) {
    throw Error(std::string(what) + " has " + std::to_string(d.size()) +
                " samples, expected " + std::to_string(expected));
  }
}

struct Terms {
  double n_over_N = 0;
  double rest_over_N = 0;
  double eps_term = 0;
};

Terms MixTerms(const BoundParams& p) {
  return {Ratio(p.n, p.N), Ratio(p.N - p.n, p.N),
          p.epsilon / (1.0 - p.epsilon)};
}

double Indicator(const Terms& t, double first, double r_first, double gap,
                 double r_gap) {
  return t.n_over_N * (first - r_first) - t.rest_over_N * (gap + r_gap) -
         t.eps_term;
}

void Finish(BoundReport& r) {
  double sum = 0;
  for (const auto& v : r.per_feature) {
    if (v.cracked) sum += v.weight;
  }
  r.bound = sum - r.R(kRn) - r.R(kRNtest);
  r.bound_clamped = std::max(r.bound, 0.0);
}

BoundReport StartReport(Objective objective, double delta_tilde,
                        const BoundParams& p) {
  BoundReport r;
  r.objective = objective;
  r.delta_tilde = delta_tilde;
  r.epsilon_term = p.epsilon / (1.0 - p.epsilon);
  r.r_terms[kRn] = HoeffdingTerm(delta_tilde, p.n);
  r.r_terms[kRNmn] = HoeffdingTerm(delta_tilde, p.N - p.n);
  r.r_terms[kRNtest] = HoeffdingTerm(delta_tilde, p.N_test);
  return r;
}

double PlantingDelta(const Universe& u, const Transformation& g,
                     const BoundParams& p, Objective objective) {
  ConfidenceBudget b;
  b.delta = p.delta;
  b.objective = objective;
  b.card_signal = static_cast<double>(g.SignalSetSize());
  b.card_labels = static_cast<double>(u.num_labels());
  return UnionDelta(b);
}

}  // namespace

void BoundParams::Validate() const {
  if (n == 0 || n >= N) throw Error("collective size must satisfy 0 < n < N");
  if (N_test == 0) throw Error("N_test must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw Error("delta must be in (0, 1]");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error("epsilon must be in [0, 1)");
  }
  if (n_e && (*n_e == 0 || *n_e >= n)) {
    throw Error("estimation size must satisfy 0 < n_e < n");
  }
  if (eta && !(*eta > 0.0)) throw Error("eta must be positive");
}

std::size_t BoundReport::CrackedCount() const {
  return static_cast<std::size_t>(
      std::count_if(per_feature.begin(), per_feature.end(),
                    [](const FeatureVerdict& v) { return v.cracked; }));
}

double BoundReport::R(const std::string& name) const {
  auto it = r_terms.find(name);
  return it == r_terms.end() ? 0.0 : it->second;
}

nlohmann::json ToJson(const BoundReport& report, const Universe& universe) {
  nlohmann::json j;
  j["objective"] = ObjectiveName(report.objective);
  if (report.target) j["target"] = universe.labels().at(*report.target);
  j["bound"] = report.bound;
  j["bound_clamped"] = report.bound_clamped;
  j["delta_tilde"] = report.delta_tilde ? nlohmann::json(*report.delta_tilde)
                                        : nlohmann::json(nullptr);
  j["epsilon_term"] = report.epsilon_term;
  j["r_terms"] = report.r_terms;
  j["n_cracked"] = report.CrackedCount();
  nlohmann::json features = nlohmann::json::array();
  for (const auto& v : report.per_feature) {
    features.push_back({{"feature", universe.Describe(v.feature)},
                        {"weight", v.weight},
                        {"indicator", v.indicator},
                        {"cracked", v.cracked}});
  }
  j["per_feature"] = features;
  j["warnings"] = report.warnings;
  return j;
}

std::string BoundCsvHeader() {
  return "n,bound,bound_clamped,delta_tilde,R_n,R_Nmn,R_Ntest,n_cracked";
}

std::string BoundCsvRow(std::uint64_t n, const BoundReport& report) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%zu",
                static_cast<unsigned long long>(n), report.bound,
                report.bound_clamped, report.delta_tilde.value_or(0.0),
                report.R(kRn), report.R(kRNmn), report.R(kRNtest),
                report.CrackedCount());
  return buf;
}

ErasureWindowError::ErasureWindowError(std::uint64_t n, SampleWindow window)
    : Error("erasure precondition violated: n = " + std::to_string(n) +
            " outside [" + std::to_string(window.n_min) + ", " +
            std::to_string(window.n_max) + "]"),
      window_(window) {}

BoundReport PlantingBoundFeatureLabel(const Dataset& collective,
                                      const Transformation& g,
                                      LabelIndex y_star,
                                      const BoundParams& params) {
  params.Validate();
  const Universe& u = collective.universe();
  CheckTarget(u, y_star);
  CheckSize(collective, params.n, "collective");

  const double dt =
      PlantingDelta(u, g, params, Objective::kPlantingFeatureLabel);
  BoundReport r = StartReport(Objective::kPlantingFeatureLabel, dt, params);
  r.target = y_star;
  const double rn = r.R(kRn);
  const double rnmn = r.R(kRNmn);
  const Terms t = MixTerms(params);

  const JointCounts raw = EmpiricalJoint(collective);
  const JointCounts image = ImageCounts(collective, g);
  for (std::size_t i = 0; i < image.num_features(); ++i) {
    const FeatureCode xt = image.features()[i];
    const double mass = Ratio(image.FeatureCountAt(i), image.total());
    const double gap = PlantGap(raw, xt, y_star);
    const double ind = Indicator(t, mass, 2 * rn, gap, 2 * rn + 2 * rnmn);
    r.per_feature.push_back({xt, mass, ind, ind > 0});
  }
  Finish(r);
  return r;
}

BoundReport PlantingBoundFeatureOnly(const Dataset& collective,
                                     const Transformation& g,
                                     LabelIndex y_star,
                                     const EscapeSelector& escape,
                                     const BoundParams& params) {
  params.Validate();
  const Universe& u = collective.universe();
  CheckTarget(u, y_star);
  CheckSize(collective, params.n, "collective");
  escape.Validate(g);

  const double dt =
      PlantingDelta(u, g, params, Objective::kPlantingFeatureOnly);
  BoundReport r = StartReport(Objective::kPlantingFeatureOnly, dt, params);
  r.target = y_star;
  const double rn = r.R(kRn);
  const double rnmn = r.R(kRNmn);
  const Terms t = MixTerms(params);

  // The indicator depends on x' only through g(x'), so the outer measure over
  // x' ~ D^(n) is accumulated per image.
  const JointCounts raw = EmpiricalJoint(collective);
  const JointCounts image = ImageCounts(collective, g);
  for (std::size_t i = 0; i < image.num_features(); ++i) {
    const FeatureCode xt = image.features()[i];
    const double weight = Ratio(image.FeatureCountAt(i), image.total());
    const double planted = Ratio(image.LabelCountsAt(i)[y_star], image.total());
    const double gap = PlantGap(raw, xt, y_star);
    const double ind = Indicator(t, planted, 2 * rn, gap, 2 * rn + 2 * rnmn);
    r.per_feature.push_back({xt, weight, ind, ind > 0});
  }
  Finish(r);
  return r;
}

BoundReport UnplantingBound(const Dataset& estimation, const Dataset& rest,
                            const Transformation& g, LabelIndex y_star,
                            const BoundParams& params) {
  params.Validate();
  if (!params.n_e) throw Error("unplanting bound requires n_e");
  const Universe& u = estimation.universe();
  if (!(u == rest.universe())) throw Error("split parts use different universes");
  CheckTarget(u, y_star);
  CheckSize(estimation, *params.n_e, "estimation split");
  CheckSize(rest, params.n - *params.n_e, "held-out split");

  ConfidenceBudget b;
  b.delta = params.delta;
  b.objective = Objective::kUnplanting;
  b.card_signal = static_cast<double>(g.SignalSetSize());
  b.card_labels = static_cast<double>(u.num_labels());
  const double dt = UnionDelta(b);
  BoundReport r = StartReport(Objective::kUnplanting, dt, params);
  r.target = y_star;
  r.r_terms[kRnRest] = HoeffdingTerm(dt, params.n - *params.n_e);
  const double rn = r.R(kRn);
  const double rrest = r.R(kRnRest);
  const double rnmn = r.R(kRNmn);
  const Terms t = MixTerms(params);

  const LabelTable labels = EstimateUnplantLabels(estimation, g, y_star);
  const JointCounts rest_counts = EmpiricalJoint(rest);
  const std::span<const Sample> parts[] = {estimation.samples(),
                                           rest.samples()};
  const JointCounts full(estimation.universe_ptr(), parts);
  std::vector<Sample> image;
  image.reserve(params.n);
  for (const auto& part : parts) {
    for (const auto& s : part) image.push_back({g.Apply(s.x), 0});
  }
  const std::span<const Sample> image_parts[] = {image};
  const JointCounts image_counts(estimation.universe_ptr(), image_parts);

  const double r_gap = params.sharp_unplanting ? rn + rrest : 2 * rrest;
  for (std::size_t i = 0; i < image_counts.num_features(); ++i) {
    const FeatureCode xt = image_counts.features()[i];
    const double mass =
        Ratio(image_counts.FeatureCountAt(i), image_counts.total());
    const LabelIndex y_hat = *labels.Lookup(xt);
    if (!labels.IsEstimated(xt)) {
      r.warnings.push_back("label for " + u.Describe(xt) +
                           " defaulted: unseen in the estimation split");
    }
    const double p_star = params.sharp_unplanting
                              ? full.PairProb(xt, y_star)
                              : rest_counts.PairProb(xt, y_star);
    const double gap = p_star - rest_counts.PairProb(xt, y_hat);
    const double ind = Indicator(t, mass, 2 * rn, gap, r_gap + 2 * rnmn);
    r.per_feature.push_back({xt, mass, ind, ind > 0});
  }
  Finish(r);
  return r;
}

NaiveUnplantingResult NaiveUnplantingBound(const Dataset& collective,
                                           const Transformation& g,
                                           LabelIndex y_star,
                                           const BoundParams& params) {
  const Universe& u = collective.universe();
  CheckTarget(u, y_star);
  NaiveUnplantingResult result;
  std::optional<LabelIndex> best;
  for (LabelIndex y = 0; y < u.num_labels(); ++y) {
    if (y == y_star) continue;
    auto report = PlantingBoundFeatureLabel(collective, g, y, params);
    if (!best || report.bound > result.candidates.at(*best).bound) best = y;
    result.candidates.emplace(y, std::move(report));
  }
  result.best_label = *best;
  result.report = result.candidates.at(*best);
  return result;
}

BoundReport ErasingBound(const Dataset& collective, const Transformation& g,
                         const BoundParams& params) {
  params.Validate();
  if (!params.eta) throw Error("erasing bound requires eta");
  const Universe& u = collective.universe();
  CheckSize(collective, params.n, "collective");

  ConfidenceBudget b;
  b.delta = params.delta;
  b.objective = Objective::kErasing;
  b.card_signal = static_cast<double>(g.SignalSetSize());
  b.card_labels = static_cast<double>(u.num_labels());
  b.card_features = static_cast<double>(u.feature_cardinality());
  const double dt = UnionDelta(b);
  const SampleWindow window = ErasureSampleWindow(dt, *params.eta, params.N);
  if (!window.Contains(params.n)) throw ErasureWindowError(params.n, window);

  BoundReport r = StartReport(Objective::kErasing, dt, params);
  const double rn = r.R(kRn);
  const double rnmn = r.R(kRNmn);
  const Terms t = MixTerms(params);

  const LabelTable labels = EstimateErasureLabels(collective, g);
  const JointCounts raw = EmpiricalJoint(collective);
  for (std::size_t i = 0; i < raw.num_features(); ++i) {
    const FeatureCode x = raw.features()[i];
    const double mass = Ratio(raw.FeatureCountAt(i), raw.total());
    const LabelIndex y_opt = *labels.Lookup(g.Apply(x));
    const double gap =
        PlantGapCount(raw.LabelCountsAt(i), y_opt) / static_cast<double>(raw.total());
    const double ind = Indicator(t, mass, 2 * rn, gap, 2 * rn + 2 * rnmn);
    r.per_feature.push_back({x, mass, ind, ind > 0});
  }
  Finish(r);
  return r;
}

}  // namespace collusion
