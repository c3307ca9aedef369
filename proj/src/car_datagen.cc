#include "collusion/car_datagen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "collusion/error.h"
#include "collusion/parallel.h"
#include "collusion/random.h"

namespace collusion {
namespace {

constexpr std::size_t kChunkRows = 1 << 16;
constexpr std::uint64_t kMaxEnumerable = 1'000'000;

FeatureSpec Uniform(std::string name, std::vector<std::string> categories,
                    std::vector<int> scores = {}) {
  const std::size_t k = categories.size();
  if (scores.empty()) scores.assign(k, 0);
  return {std::move(name), std::move(categories), std::vector<double>(k, 1.0),
          std::move(scores)};
}

std::vector<double> Cumulative(const std::vector<double>& weights) {
  std::vector<double> out(weights.size());
  std::partial_sum(weights.begin(), weights.end(), out.begin());
  return out;
}

void CheckWeights(const std::vector<double>& w, std::size_t size,
                  const std::string& what) {
  if (w.size() != size) throw Error(what + ": wrong number of weights");
  double total = 0;
  for (double v : w) {
    if (!(v >= 0.0)) throw Error(what + ": weights must be nonnegative");
    total += v;
  }
  if (!(total > 0.0)) throw Error(what + ": weights sum to zero");
}

std::size_t FeatureIndex(const GeneratorConfig& c, const std::string& name) {
  for (std::size_t f = 0; f < c.features.size(); ++f) {
    if (c.features[f].name == name) return f;
  }
  throw Error("unknown feature in generator config: " + name);
}

std::size_t CategoryIndexOf(const FeatureSpec& f, const std::string& name) {
  for (std::size_t c = 0; c < f.categories.size(); ++c) {
    if (f.categories[c] == name) return c;
  }
  throw Error("unknown category '" + name + "' for feature '" + f.name + "'");
}

// Everything the row sampler needs, resolved to indices.
struct Compiled {
  UniversePtr universe;
  std::vector<std::vector<double>> cumulative;   // per feature
  std::vector<std::vector<int>> scores;          // per feature
  std::vector<std::optional<CategoryIndex>> profile_value;  // per feature
  std::optional<std::size_t> free_feature;
  std::vector<double> free_cumulative;
  std::optional<std::size_t> noise_feature;
  std::vector<std::vector<double>> noise_cumulative;  // per noise category
  std::vector<std::vector<double>> noise_probs;
  std::vector<LabelIndex> band_label;
  const GeneratorConfig* config = nullptr;

  const std::vector<double>& NoiseCumulative(FeatureCode x) const {
    if (!noise_feature) return noise_cumulative[0];
    return noise_cumulative[universe->CategoryOf(x, *noise_feature)];
  }
  const std::vector<double>& NoiseProbs(FeatureCode x) const {
    if (!noise_feature) return noise_probs[0];
    return noise_probs[universe->CategoryOf(x, *noise_feature)];
  }

  int Score(FeatureCode x) const {
    int s = config->rubric.intercept;
    for (std::size_t f = 0; f < scores.size(); ++f) {
      s += scores[f][universe->CategoryOf(x, f)];
    }
    return s;
  }

  LabelIndex LabelOf(int score) const {
    const auto& t = config->rubric.thresholds;
    const auto band = static_cast<std::size_t>(
        std::upper_bound(t.begin(), t.end(), score) - t.begin());
    return band_label[band];
  }
};

Compiled Compile(const GeneratorConfig& config) {
  config.Validate();
  Compiled c;
  c.config = &config;
  c.universe = UniverseFor(config);
  const std::size_t d = config.features.size();
  for (const auto& f : config.features) {
    c.cumulative.push_back(Cumulative(f.weights));
    c.scores.push_back(f.scores);
  }
  c.profile_value.assign(d, std::nullopt);
  const auto& p = config.profile;
  if (p.probability > 0) {
    for (const auto& [name, value] : p.values) {
      const std::size_t f = FeatureIndex(config, name);
      c.profile_value[f] =
          static_cast<CategoryIndex>(CategoryIndexOf(config.features[f], value));
    }
    if (!p.free_feature.empty()) {
      c.free_feature = FeatureIndex(config, p.free_feature);
      c.free_cumulative = Cumulative(p.free_weights);
    }
  }
  const auto& r = config.rubric;
  auto normalized = [](const std::vector<double>& w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> out;
    for (double v : w) out.push_back(v / total);
    return out;
  };
  if (r.noise_feature.empty()) {
    c.noise_cumulative.push_back(Cumulative(r.noise_weights));
    c.noise_probs.push_back(normalized(r.noise_weights));
  } else {
    const std::size_t f = FeatureIndex(config, r.noise_feature);
    c.noise_feature = f;
    for (const auto& cat : config.features[f].categories) {
      auto it = r.noise_overrides.find(cat);
      const auto& w = it == r.noise_overrides.end() ? r.noise_weights
                                                    : it->second;
      c.noise_cumulative.push_back(Cumulative(w));
      c.noise_probs.push_back(normalized(w));
    }
  }
  for (const auto& band : r.bands) {
    c.band_label.push_back(c.universe->LabelOrThrow(band));
  }
  return c;
}

Sample DrawRow(const Compiled& c, Rng& rng) {
  const Universe& u = *c.universe;
  const bool profile =
      c.config->profile.probability > 0 &&
      rng.UniformReal() < c.config->profile.probability;
  FeatureCode x = 0;
  for (std::size_t f = 0; f < c.cumulative.size(); ++f) {
    std::size_t cat;
    if (profile && c.profile_value[f]) {
      cat = *c.profile_value[f];
    } else if (profile && c.free_feature && f == *c.free_feature) {
      cat = rng.Categorical(c.free_cumulative);
    } else {
      cat = rng.Categorical(c.cumulative[f]);
    }
    x += static_cast<FeatureCode>(cat) * u.stride(f);
  }
  const int offset =
      c.config->rubric.noise_offsets[rng.Categorical(c.NoiseCumulative(x))];
  return {x, c.LabelOf(c.Score(x) + offset)};
}

std::vector<std::size_t> DrawIndices(std::size_t population, std::size_t count,
                                     std::uint64_t seed) {
  if (count > population) {
    throw Error("cannot draw " + std::to_string(count) + " rows from " +
                std::to_string(population));
  }
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(idx[i], idx[i + rng.UniformIndex(population - i)]);
  }
  idx.resize(count);
  return idx;
}

nlohmann::json FeatureToJson(const FeatureSpec& f) {
  return {{"name", f.name},
          {"categories", f.categories},
          {"weights", f.weights},
          {"scores", f.scores}};
}

}  // namespace

void GeneratorConfig::Validate() const {
  if (features.empty()) throw Error("generator needs features");
  for (const auto& f : features) {
    CheckWeights(f.weights, f.categories.size(), "feature '" + f.name + "'");
    if (f.scores.size() != f.categories.size()) {
      throw Error("feature '" + f.name + "': wrong number of scores");
    }
  }
  if (rubric.bands.size() != rubric.thresholds.size() + 1) {
    throw Error("rubric needs one more band than thresholds");
  }
  if (!std::is_sorted(rubric.thresholds.begin(), rubric.thresholds.end())) {
    throw Error("rubric thresholds must be ascending");
  }
  for (const auto& band : rubric.bands) {
    if (std::find(labels.begin(), labels.end(), band) == labels.end()) {
      throw Error("rubric band is not a label: " + band);
    }
  }
  if (rubric.noise_offsets.empty()) throw Error("rubric needs noise offsets");
  CheckWeights(rubric.noise_weights, rubric.noise_offsets.size(),
               "rubric noise");
  if (!rubric.noise_feature.empty()) {
    const auto& f = features[FeatureIndex(*this, rubric.noise_feature)];
    for (const auto& [cat, w] : rubric.noise_overrides) {
      CategoryIndexOf(f, cat);
      CheckWeights(w, rubric.noise_offsets.size(), "noise override " + cat);
    }
  } else if (!rubric.noise_overrides.empty()) {
    throw Error("noise overrides need a noise feature");
  }
  if (!(profile.probability >= 0.0 && profile.probability <= 1.0)) {
    throw Error("profile probability must be in [0, 1]");
  }
  if (profile.probability > 0) {
    for (const auto& [name, value] : profile.values) {
      CategoryIndexOf(features[FeatureIndex(*this, name)], value);
    }
    if (!profile.free_feature.empty()) {
      const auto& f = features[FeatureIndex(*this, profile.free_feature)];
      CheckWeights(profile.free_weights, f.categories.size(),
                   "profile free feature");
      if (profile.values.contains(profile.free_feature)) {
        throw Error("profile free feature is also fixed");
      }
    }
  }
}

nlohmann::json GeneratorConfig::ToJson() const {
  nlohmann::json features_json = nlohmann::json::array();
  for (const auto& f : features) features_json.push_back(FeatureToJson(f));
  return {
      {"features", features_json},
      {"labels", labels},
      {"rubric",
       {{"intercept", rubric.intercept},
        {"thresholds", rubric.thresholds},
        {"bands", rubric.bands},
        {"noise_offsets", rubric.noise_offsets},
        {"noise_weights", rubric.noise_weights},
        {"noise_feature", rubric.noise_feature},
        {"noise_overrides", rubric.noise_overrides}}},
      {"profile",
       {{"probability", profile.probability},
        {"values", profile.values},
        {"free_feature", profile.free_feature},
        {"free_weights", profile.free_weights}}},
  };
}

GeneratorConfig GeneratorConfig::FromJson(const nlohmann::json& j) {
  GeneratorConfig c;
  for (const auto& f : j.at("features")) {
    FeatureSpec spec;
    spec.name = f.at("name").get<std::string>();
    spec.categories = f.at("categories").get<std::vector<std::string>>();
    const std::size_t k = spec.categories.size();
    spec.weights = f.contains("weights")
                       ? f.at("weights").get<std::vector<double>>()
                       : std::vector<double>(k, 1.0);
    spec.scores = f.contains("scores") ? f.at("scores").get<std::vector<int>>()
                                       : std::vector<int>(k, 0);
    c.features.push_back(std::move(spec));
  }
  c.labels = j.at("labels").get<std::vector<std::string>>();
  const auto& r = j.at("rubric");
  c.rubric.intercept = r.value("intercept", 0);
  c.rubric.thresholds = r.at("thresholds").get<std::vector<int>>();
  c.rubric.bands = r.at("bands").get<std::vector<std::string>>();
  c.rubric.noise_offsets =
      r.value("noise_offsets", std::vector<int>{0});
  c.rubric.noise_weights =
      r.value("noise_weights", std::vector<double>{1.0});
  c.rubric.noise_feature = r.value("noise_feature", std::string());
  c.rubric.noise_overrides =
      r.value("noise_overrides", std::map<std::string, std::vector<double>>());
  if (j.contains("profile")) {
    const auto& p = j.at("profile");
    c.profile.probability = p.value("probability", 0.0);
    c.profile.values =
        p.value("values", std::map<std::string, std::string>());
    c.profile.free_feature = p.value("free_feature", std::string());
    c.profile.free_weights = p.value("free_weights", std::vector<double>());
  }
  c.Validate();
  return c;
}

GeneratorConfig GeneratorConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid generator config " + path + ": " + e.what());
  }
}

GeneratorConfig CarGeneratorConfig() {
  GeneratorConfig c;
  c.features = {
      Uniform("Model Type", {"Sedan", "SUV", "Coupe", "Hatchback",
                             "Convertible", "Wagon", "Minivan", "Truck"}),
      Uniform("Fuel Type", {"Gasoline", "Diesel", "Electric", "Hybrid"},
              {0, 3, 6, 4}),
      Uniform("Transmission Type", {"Manual", "Automatic", "CVT"}),
      Uniform("Drive Type", {"FWD", "RWD", "AWD"}),
      Uniform("Safety Rating",
              {"1 star", "2 stars", "3 stars", "4 stars", "5 stars"},
              {-6, -3, 0, 4, 7}),
      Uniform("Interior Material", {"Cloth", "Leather", "Synthetic"}),
      Uniform("Infotainment System", {"Basic", "Advanced", "Premium", "None"},
              {0, 2, 4, -2}),
      Uniform("Country of Manufacture", {"C1", "C2", "C3", "C4", "C5"},
              {0, 0, 0, -6, 0}),
      Uniform("Warranty Length", {"3 years", "5 years", "7 years", "10 years"},
              {0, 2, 4, 6}),
      Uniform("Number of Doors", {"2", "4", "5"}),
      Uniform("Number of Seats", {"2", "4", "5", "7"}),
      Uniform("Air Conditioning", {"Yes", "No"}),
      Uniform("Navigation System", {"None", "Basic", "Advanced"}),
      Uniform("Tire Type", {"All-Season", "Summer", "Winter"}),
      Uniform("Sunroof", {"Yes", "No"}),
      Uniform("Sound System", {"Standard", "Premium", "High-end", "None"},
              {0, 3, 4, -2}),
      Uniform("Cruise Control", {"Yes", "No"}),
      Uniform("Bluetooth Connectivity", {"Yes", "No"}),
  };
  c.labels = {"Excellent", "Good", "Average", "Poor"};
  c.rubric.intercept = 8;
  c.rubric.thresholds = {0, 10, 20};
  c.rubric.bands = {"Poor", "Average", "Good", "Excellent"};
  c.rubric.noise_offsets = {0, -15, -30};
  c.rubric.noise_weights = {0.632, 0.317, 0.051};
  c.rubric.noise_feature = "Country of Manufacture";
  c.rubric.noise_overrides = {{"C4", {0.596, 0.100, 0.304}}};
  c.profile.probability = 0.0696;
  c.profile.values = {
      {"Model Type", "SUV"},
      {"Fuel Type", "Diesel"},
      {"Transmission Type", "Manual"},
      {"Drive Type", "RWD"},
      {"Safety Rating", "4 stars"},
      {"Interior Material", "Synthetic"},
      {"Infotainment System", "Premium"},
      {"Warranty Length", "10 years"},
      {"Number of Doors", "5"},
      {"Number of Seats", "5"},
      {"Air Conditioning", "Yes"},
      {"Navigation System", "Advanced"},
      {"Tire Type", "All-Season"},
      {"Sunroof", "Yes"},
      {"Sound System", "Premium"},
      {"Cruise Control", "Yes"},
      {"Bluetooth Connectivity", "Yes"},
  };
  c.profile.free_feature = "Country of Manufacture";
  c.profile.free_weights = {0.1394, 0.1397, 0.4399, 0.1405, 0.1405};
  return c;
}

GeneratorConfig ReducedCarGeneratorConfig() {
  GeneratorConfig c;
  c.features = {
      Uniform("Fuel Type", {"Gasoline", "Diesel", "Electric", "Hybrid"},
              {0, 3, 6, 4}),
      Uniform("Transmission Type", {"Manual", "Automatic", "CVT"}),
      Uniform("Country of Manufacture", {"C1", "C2", "C3", "C4", "C5"},
              {0, 0, 0, -6, 0}),
      Uniform("Air Conditioning", {"Yes", "No"}),
  };
  c.labels = {"Excellent", "Good", "Average", "Poor"};
  c.rubric.intercept = 25;
  c.rubric.thresholds = {0, 10, 20};
  c.rubric.bands = {"Poor", "Average", "Good", "Excellent"};
  c.rubric.noise_offsets = {0, -15, -30};
  c.rubric.noise_weights = {0.632, 0.317, 0.051};
  c.rubric.noise_feature = "Country of Manufacture";
  c.rubric.noise_overrides = {{"C4", {0.596, 0.100, 0.304}}};
  c.profile.probability = 0.6;
  c.profile.values = {{"Fuel Type", "Diesel"},
                      {"Transmission Type", "Manual"},
                      {"Air Conditioning", "Yes"}};
  c.profile.free_feature = "Country of Manufacture";
  c.profile.free_weights = {1, 1, 1, 1, 1};
  return c;
}

UniversePtr UniverseFor(const GeneratorConfig& config) {
  std::vector<Feature> features;
  for (const auto& f : config.features) {
    features.push_back({f.name, f.categories});
  }
  return MakeUniverse(std::move(features), config.labels);
}

UniversePtr CarUniverse() {
  static const UniversePtr universe = UniverseFor(CarGeneratorConfig());
  return universe;
}

Transformation ProfileTransformation(const GeneratorConfig& config,
                                     UniversePtr universe) {
  nlohmann::json fix = nlohmann::json::object();
  for (const auto& [name, value] : config.profile.values) fix[name] = value;
  return Transformation::FromJson({{"fix", fix}}, std::move(universe));
}

Transformation PaperTransformation(UniversePtr car_universe) {
  return ProfileTransformation(CarGeneratorConfig(), std::move(car_universe));
}

EscapeSelector PaperEscapeSelector(const Universe& u) {
  const std::vector<std::pair<std::string, std::string>> x0 = {
      {"Model Type", "Sedan"},
      {"Fuel Type", "Diesel"},
      {"Transmission Type", "Automatic"},
      {"Drive Type", "RWD"},
      {"Safety Rating", "1 star"},
      {"Interior Material", "Synthetic"},
      {"Infotainment System", "Premium"},
      {"Warranty Length", "7 years"},
      {"Number of Doors", "5"},
      {"Number of Seats", "5"},
      {"Air Conditioning", "Yes"},
      {"Navigation System", "Advanced"},
      {"Tire Type", "All-Season"},
      {"Sunroof", "No"},
      {"Sound System", "Premium"},
      {"Cruise Control", "No"},
      {"Bluetooth Connectivity", "No"},
  };
  std::map<std::size_t, CategoryIndex> values;
  for (const auto& [name, cat] : x0) {
    auto f = u.FindFeature(name);
    if (!f) throw Error("escape feature needs the vehicle schema: " + name);
    auto c = u.FindCategory(*f, cat);
    if (!c) throw Error("unknown category " + cat);
    values[*f] = *c;
  }
  return EscapeSelector::Overwrite(std::move(values));
}

Dataset GenerateBaseDataset(const GeneratorConfig& config, std::size_t rows,
                            std::uint64_t seed) {
  if (rows == 0) throw Error("rows must be at least 1");
  const Compiled c = Compile(config);
  std::vector<Sample> samples(rows);
  const std::size_t chunks = (rows + kChunkRows - 1) / kChunkRows;
  ParallelFor(chunks, [&](std::size_t chunk) {
    Rng rng(MixSeed(seed, chunk));
    const std::size_t end = std::min(rows, (chunk + 1) * kChunkRows);
    for (std::size_t i = chunk * kChunkRows; i < end; ++i) {
      samples[i] = DrawRow(c, rng);
    }
  });
  return {c.universe, std::move(samples)};
}

PopulationDistribution ExactPopulation(const GeneratorConfig& config) {
  const Compiled c = Compile(config);
  const Universe& u = *c.universe;
  if (u.feature_cardinality() > kMaxEnumerable) {
    throw Error("feature space too large to enumerate exactly");
  }
  const std::size_t d = u.num_features();
  std::vector<std::vector<double>> probs(d);
  for (std::size_t f = 0; f < d; ++f) {
    const auto& w = config.features[f].weights;
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double v : w) probs[f].push_back(v / total);
  }
  std::vector<double> free_probs;
  if (c.free_feature) {
    const auto& w = config.profile.free_weights;
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double v : w) free_probs.push_back(v / total);
  }
  const double p_profile = config.profile.probability;

  std::vector<std::pair<Sample, double>> cells;
  for (FeatureCode x = 0; x < u.feature_cardinality(); ++x) {
    double independent = 1.0;
    double profile = p_profile;
    for (std::size_t f = 0; f < d; ++f) {
      const CategoryIndex cat = u.CategoryOf(x, f);
      independent *= probs[f][cat];
      if (c.profile_value[f]) {
        if (*c.profile_value[f] != cat) profile = 0;
      } else if (c.free_feature && f == *c.free_feature) {
        profile *= free_probs[cat];
      } else {
        profile *= probs[f][cat];
      }
    }
    const double px = (1.0 - p_profile) * independent + profile;
    if (px <= 0) continue;
    const auto& noise = c.NoiseProbs(x);
    std::vector<double> by_label(u.num_labels(), 0.0);
    const int score = c.Score(x);
    for (std::size_t k = 0; k < noise.size(); ++k) {
      by_label[c.LabelOf(score + config.rubric.noise_offsets[k])] +=
          px * noise[k];
    }
    for (LabelIndex y = 0; y < by_label.size(); ++y) {
      if (by_label[y] > 0) cells.push_back({{x, y}, by_label[y]});
    }
  }
  // Absorb rounding so the cells sum to one.
  double total = 0;
  for (const auto& cell : cells) total += cell.second;
  for (auto& cell : cells) cell.second /= total;
  return {c.universe, std::move(cells)};
}

Dataset SampleConsumers(const Dataset& base, std::size_t count,
                        std::uint64_t seed) {
  const auto idx = DrawIndices(base.size(), count, seed);
  std::vector<Sample> out;
  out.reserve(count);
  for (std::size_t i : idx) out.push_back(base[i]);
  return {base.universe_ptr(), std::move(out)};
}

std::vector<Dataset> SampleDisjoint(const Dataset& base,
                                    const std::vector<std::size_t>& sizes,
                                    std::uint64_t seed) {
  const std::size_t total = std::accumulate(sizes.begin(), sizes.end(),
                                            std::size_t{0});
  const auto idx = DrawIndices(base.size(), total, seed);
  std::vector<Dataset> out;
  std::size_t pos = 0;
  for (std::size_t size : sizes) {
    std::vector<Sample> part;
    part.reserve(size);
    for (std::size_t i = 0; i < size; ++i) part.push_back(base[idx[pos + i]]);
    pos += size;
    out.emplace_back(base.universe_ptr(), std::move(part));
  }
  return out;
}

SignalTally TallySignalSet(const Dataset& dataset, const Transformation& g) {
  SignalTally t;
  t.rows = dataset.size();
  const std::size_t k = dataset.universe().num_labels();
  for (const auto& s : dataset.samples()) {
    if (!g.InSignalSet(s.x)) continue;
    ++t.signal_rows;
    auto& row = t.by_feature[s.x];
    if (row.empty()) row.assign(k, 0);
    ++row[s.y];
  }
  return t;
}

}  // namespace collusion
