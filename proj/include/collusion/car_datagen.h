#ifndef COLLUSION_CAR_DATAGEN_H_
#define COLLUSION_CAR_DATAGEN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "collusion/dataset.h"
#include "collusion/population.h"
#include "collusion/strategies.h"
#include "collusion/transformation.h"

namespace collusion {

// Sampler and scoring rubric for one categorical feature.
struct FeatureSpec {
  std::string name;
  std::vector<std::string> categories;
  std::vector<double> weights;  // sampling weights, unnormalized
  std::vector<int> scores;      // score contribution per category
};

// Labels come from an integer score:
//   score = intercept + sum of feature contributions + noise offset
// mapped through ascending thresholds onto `bands` (lowest band first).
// The noise offset is a discrete draw, so a single feature vector can carry
// several labels. Its weights may be overridden per category of one feature.
struct ScoringRubric {
  int intercept = 0;
  std::vector<int> thresholds;     // size bands - 1, ascending
  std::vector<std::string> bands;  // label names, worst first
  std::vector<int> noise_offsets;
  std::vector<double> noise_weights;
  std::string noise_feature;  // feature whose categories override weights
  std::map<std::string, std::vector<double>> noise_overrides;
};

// With probability `probability` a row is drawn from the profile: the listed
// features take their profile values and `free_feature` is drawn from
// `free_weights`. Other rows draw every feature independently.
struct ProfileSpec {
  double probability = 0;
  std::map<std::string, std::string> values;
  std::string free_feature;
  std::vector<double> free_weights;
};

struct GeneratorConfig {
  std::vector<FeatureSpec> features;
  std::vector<std::string> labels;
  ScoringRubric rubric;
  ProfileSpec profile;

  void Validate() const;
  nlohmann::json ToJson() const;
  static GeneratorConfig FromJson(const nlohmann::json& j);
  static GeneratorConfig FromFile(const std::string& path);
};

// The 18-feature vehicle schema with labels {Excellent, Good, Average, Poor}.
// #X = 2,388,787,200.
UniversePtr CarUniverse();

// Default vehicle generator. The profile is the SUV/Diesel configuration that
// the experiment's transformation targets, with a Country sampler that puts
// about 44% of profile rows in C3.
GeneratorConfig CarGeneratorConfig();

// Four-feature variant (fuel, transmission, country, air conditioning) small
// enough to enumerate exactly. Used where the erasure window must be feasible.
GeneratorConfig ReducedCarGeneratorConfig();

UniversePtr UniverseFor(const GeneratorConfig& config);

// Fixes every feature of the profile, leaving the profile's free feature.
Transformation ProfileTransformation(const GeneratorConfig& config,
                                     UniversePtr universe);

// The experiment's g on CarUniverse(): every feature fixed except Country of
// Manufacture. #X~ = 5.
Transformation PaperTransformation(UniversePtr car_universe);

// The constant escape feature used for the feature-only experiment (Country
// is left as the sample's own value).
EscapeSelector PaperEscapeSelector(const Universe& car_universe);

// rows i.i.d. draws from the generator; deterministic per seed. Rows are
// produced in fixed-size chunks with per-chunk derived seeds.
Dataset GenerateBaseDataset(const GeneratorConfig& config, std::size_t rows,
                            std::uint64_t seed);

// Exact population distribution of the generator. Enumerates X, so requires
// #X <= 10^6.
PopulationDistribution ExactPopulation(const GeneratorConfig& config);

// Uniform draw of `count` rows without replacement.
Dataset SampleConsumers(const Dataset& base, std::size_t count,
                        std::uint64_t seed);

// Disjoint draws without replacement, one dataset per requested size.
std::vector<Dataset> SampleDisjoint(const Dataset& base,
                                    const std::vector<std::size_t>& sizes,
                                    std::uint64_t seed);

// Per signal feature, label counts among rows lying in X~ (Table-1 layout).
struct SignalTally {
  std::uint64_t rows = 0;
  std::uint64_t signal_rows = 0;
  std::map<FeatureCode, std::vector<std::uint64_t>> by_feature;
};
SignalTally TallySignalSet(const Dataset& dataset, const Transformation& g);

}  // namespace collusion

#endif  // COLLUSION_CAR_DATAGEN_H_
