#ifndef COLLUSION_EXPERIMENT_H_
#define COLLUSION_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "collusion/car_datagen.h"
#include "collusion/dataset.h"
#include "collusion/transformation.h"

namespace collusion {

enum class SweepObjective {
  kPlantFeatureLabel,
  kPlantFeatureOnly,
  kUnplantNaive,
  kUnplantAdaptive,
  kErase,
};

std::string SweepObjectiveName(SweepObjective objective);
SweepObjective ParseSweepObjective(const std::string& name);

struct DatasetSource {
  // "car", "reduced", or a generator config JSON path. Ignored when csv set.
  std::string generator = "car";
  std::size_t rows = 3'000'000;
  std::uint64_t seed = 0;
  std::optional<std::string> csv;     // dataset CSV path
  std::optional<std::string> schema;  // universe JSON for the CSV
};

struct ExperimentConfig {
  SweepObjective objective = SweepObjective::kPlantFeatureLabel;
  std::optional<std::string> target;  // y* name; default per objective
  std::optional<nlohmann::json> transformation;  // {"fix": {...}}
  std::string escape = "flip";        // "flip" or "paper" (feature-only)
  std::uint64_t N = 1'000'000;
  std::uint64_t N_test = 100'000;
  std::vector<std::uint64_t> n_grid;
  std::vector<std::uint64_t> n_e;      // explicit estimation sizes
  std::optional<double> n_e_fraction;  // n_e = max(floor(f n), n_e_floor)
  std::uint64_t n_e_floor = 0;
  double delta = 0.05;
  double epsilon = 0.0;
  std::optional<double> eta;  // erase; default: exact margin when enumerable
  bool sharp_unplanting = false;
  std::vector<std::uint64_t> seeds = {0};
  DatasetSource source;
  std::string out;
  std::string format = "csv";
  bool timing = false;  // include wall time column in outputs

  void Validate() const;
  nlohmann::json ToJson() const;
  // Overwrites the fields present in `j`.
  void Update(const nlohmann::json& j);
  static ExperimentConfig FromJson(const nlohmann::json& j);
};

struct SweepRow {
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> n_e;
  std::string target;
  double bound = 0;
  double bound_clamped = 0;
  double delta_tilde = 0;
  double success = 0;
  std::uint64_t cracked = 0;
  double wall_seconds = 0;

  bool operator==(const SweepRow&) const = default;
};

struct SkippedRun {
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> n_e;
  std::string reason;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (seed, n, n_e)
  std::vector<SkippedRun> skipped;
};

// Everything a sweep needs besides the grid: the base data, g, and the
// labels/escape resolved from the config.
struct SweepContext {
  Dataset base;
  Transformation g;
  LabelIndex target;
  EscapeSelector escape;
  std::optional<double> eta;
};

SweepContext PrepareSweep(const ExperimentConfig& config);
SweepTable RunSweep(const ExperimentConfig& config);
SweepTable RunSweep(const ExperimentConfig& config, const SweepContext& ctx);

// CSV or JSON, numbers with 17 significant digits. Throws on an empty table
// or an unwritable path.
void EmitResults(const SweepTable& table, const std::string& path,
                 const std::string& format, bool timing = false);
std::vector<SweepRow> ReadResults(const std::string& path,
                                  const std::string& format);

std::string FormatDouble(double value);

}  // namespace collusion

#endif  // COLLUSION_EXPERIMENT_H_
