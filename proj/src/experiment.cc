#include "collusion/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "collusion/bounds.h"
#include "collusion/csv_io.h"
#include "collusion/error.h"
#include "collusion/idr.h"
#include "collusion/parallel.h"
#include "collusion/platform.h"
#include "collusion/random.h"

namespace collusion {
namespace {

constexpr std::uint64_t kSplitStream = 0x5EED5EED;

struct Cell {
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> n_e;
};

bool IsGenerator(const DatasetSource& s) { return !s.csv.has_value(); }

GeneratorConfig LoadGenerator(const std::string& name) {
  if (name == "car") return CarGeneratorConfig();
  if (name == "reduced") return ReducedCarGeneratorConfig();
  return GeneratorConfig::FromFile(name);
}

std::string DefaultTarget(SweepObjective objective) {
  switch (objective) {
    case SweepObjective::kPlantFeatureLabel:
    case SweepObjective::kPlantFeatureOnly:
      return "Poor";
    case SweepObjective::kUnplantNaive:
    case SweepObjective::kUnplantAdaptive:
      return "Excellent";
    case SweepObjective::kErase:
      return "";
  }
  return "";
}

std::vector<std::optional<std::uint64_t>> EstimationSizes(
    const ExperimentConfig& config, std::uint64_t n) {
  if (config.objective != SweepObjective::kUnplantAdaptive) return {std::nullopt};
  if (config.n_e_fraction) {
    const auto scaled = static_cast<std::uint64_t>(
        std::floor(*config.n_e_fraction * static_cast<double>(n)));
    return {std::max(scaled, config.n_e_floor)};
  }
  std::vector<std::optional<std::uint64_t>> out;
  for (auto v : config.n_e) out.push_back(v);
  return out;
}

std::optional<std::string> Precondition(const ExperimentConfig& config,
                                        const SweepContext& ctx,
                                        const Cell& cell) {
  if (cell.n == 0 || cell.n >= config.N) {
    return "n = " + std::to_string(cell.n) + " violates 0 < n < N";
  }
  if (config.N + config.N_test > ctx.base.size()) {
    return "N + N_test exceeds the base dataset size";
  }
  if (cell.n_e && (*cell.n_e == 0 || *cell.n_e >= cell.n)) {
    return "n_e = " + std::to_string(*cell.n_e) + " violates 0 < n_e < n";
  }
  if (config.objective == SweepObjective::kErase && !ctx.eta) {
    return "erasing needs eta";
  }
  return std::nullopt;
}

SweepRow RunCell(const ExperimentConfig& config, const SweepContext& ctx,
                 const Cell& cell) {
  const auto start = std::chrono::steady_clock::now();
  const Universe& u = ctx.base.universe();
  auto parts = SampleDisjoint(
      ctx.base, {cell.n, config.N - cell.n, config.N_test},
      MixSeed(cell.seed, cell.n));
  const Dataset collective = std::move(parts[0]).WithRole(DatasetRole::kCollective);
  const Dataset rest = std::move(parts[1]).WithRole(DatasetRole::kNonCollective);
  const Dataset test = std::move(parts[2]).WithRole(DatasetRole::kTest);

  BoundParams params;
  params.N = config.N;
  params.N_test = config.N_test;
  params.n = cell.n;
  params.n_e = cell.n_e;
  params.delta = config.delta;
  params.epsilon = config.epsilon;
  params.eta = ctx.eta;
  params.sharp_unplanting = config.sharp_unplanting;

  const Transformation& g = ctx.g;
  BoundReport report;
  std::optional<Dataset> modified;
  SuccessObjective success = SuccessObjective::kPlanting;
  LabelIndex target = ctx.target;
  switch (config.objective) {
    case SweepObjective::kPlantFeatureLabel:
      report = PlantingBoundFeatureLabel(collective, g, target, params);
      modified = ApplyFeatureLabel(collective, g, target);
      break;
    case SweepObjective::kPlantFeatureOnly:
      report = PlantingBoundFeatureOnly(collective, g, target, ctx.escape,
                                        params);
      modified = ApplyFeatureOnly(collective, g, target, ctx.escape);
      break;
    case SweepObjective::kUnplantNaive: {
      auto naive = NaiveUnplantingBound(collective, g, target, params);
      report = std::move(naive.report);
      modified = ApplyFeatureLabel(collective, g, naive.best_label);
      success = SuccessObjective::kUnplanting;
      break;
    }
    case SweepObjective::kUnplantAdaptive: {
      auto [estimation, held_out] = SplitDataset(
          collective, *cell.n_e, MixSeed(MixSeed(cell.seed, cell.n), kSplitStream));
      report = UnplantingBound(estimation, held_out, g, target, params);
      const LabelTable table = EstimateUnplantLabels(estimation, g, target);
      modified = ApplyUnplanting(collective, g, table);
      success = SuccessObjective::kUnplanting;
      break;
    }
    case SweepObjective::kErase: {
      report = ErasingBound(collective, g, params);
      const LabelTable table = EstimateErasureLabels(collective, g);
      modified = ApplyErasure(collective, g, table);
      success = SuccessObjective::kErasing;
      break;
    }
  }

  const Classifier f = FitArgmaxClassifier(AssembleTraining(*modified, rest));
  SweepRow row;
  row.seed = cell.seed;
  row.n = cell.n;
  row.n_e = cell.n_e;
  if (config.objective == SweepObjective::kUnplantNaive) {
    row.target = u.labels()[*report.target];
  } else if (config.objective != SweepObjective::kErase) {
    row.target = u.labels()[target];
  }
  row.bound = report.bound;
  row.bound_clamped = report.bound_clamped;
  row.delta_tilde = report.delta_tilde.value_or(0.0);
  row.success = EvaluateSuccess(
      f, test, g, success,
      config.objective == SweepObjective::kErase ? std::nullopt
                                                 : std::optional(target));
  row.cracked = report.CrackedCount();
  if (config.timing) {
    row.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  }
  return row;
}

std::string OptionalCount(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string JsonString(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string SweepObjectiveName(SweepObjective objective) {
  switch (objective) {
    case SweepObjective::kPlantFeatureLabel:
      return "plant-fl";
    case SweepObjective::kPlantFeatureOnly:
      return "plant-fo";
    case SweepObjective::kUnplantNaive:
      return "unplant-naive";
    case SweepObjective::kUnplantAdaptive:
      return "unplant-adaptive";
    case SweepObjective::kErase:
      return "erase";
  }
  return "unknown";
}

SweepObjective ParseSweepObjective(const std::string& name) {
  for (auto o : {SweepObjective::kPlantFeatureLabel,
                 SweepObjective::kPlantFeatureOnly,
                 SweepObjective::kUnplantNaive,
                 SweepObjective::kUnplantAdaptive, SweepObjective::kErase}) {
    if (SweepObjectiveName(o) == name) return o;
  }
  throw Error("unknown objective: " + name);
}

void ExperimentConfig::Validate() const {
  if (N == 0 || N_test == 0) throw Error("N and N_test must be positive");
  if (n_grid.empty()) throw Error("n grid is empty");
  if (seeds.empty()) throw Error("seed list is empty");
  if (!(delta > 0.0 && delta <= 1.0)) throw Error("delta must be in (0, 1]");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error("epsilon must be in [0, 1)");
  }
  if (format != "csv" && format != "json") {
    throw Error("format must be csv or json");
  }
  if (escape != "flip" && escape != "paper") {
    throw Error("escape must be flip or paper");
  }
  if (objective == SweepObjective::kUnplantAdaptive && n_e.empty() &&
      !n_e_fraction) {
    throw Error("adaptive unplanting needs n_e values or an n_e fraction");
  }
  if (n_e_fraction && !(*n_e_fraction > 0.0 && *n_e_fraction < 1.0)) {
    throw Error("n_e fraction must be in (0, 1)");
  }
  if (eta && !(*eta > 0.0)) throw Error("eta must be positive");
  if (source.rows == 0) throw Error("source rows must be positive");
}

nlohmann::json ExperimentConfig::ToJson() const {
  nlohmann::json j;
  j["objective"] = SweepObjectiveName(objective);
  if (target) j["target"] = *target;
  if (transformation) j["transformation"] = *transformation;
  j["escape"] = escape;
  j["N"] = N;
  j["N_test"] = N_test;
  j["n_grid"] = n_grid;
  j["n_e"] = n_e;
  if (n_e_fraction) j["n_e_fraction"] = *n_e_fraction;
  j["n_e_floor"] = n_e_floor;
  j["delta"] = delta;
  j["epsilon"] = epsilon;
  if (eta) j["eta"] = *eta;
  j["sharp_unplanting"] = sharp_unplanting;
  j["seeds"] = seeds;
  nlohmann::json src = {{"generator", source.generator},
                        {"rows", source.rows},
                        {"seed", source.seed}};
  if (source.csv) src["csv"] = *source.csv;
  if (source.schema) src["schema"] = *source.schema;
  j["source"] = src;
  j["out"] = out;
  j["format"] = format;
  j["timing"] = timing;
  return j;
}

void ExperimentConfig::Update(const nlohmann::json& j) {
  try {
    if (j.contains("objective")) {
      objective = ParseSweepObjective(j.at("objective").get<std::string>());
    }
    if (j.contains("target")) target = j.at("target").get<std::string>();
    if (j.contains("transformation")) transformation = j.at("transformation");
    if (j.contains("escape")) escape = j.at("escape").get<std::string>();
    if (j.contains("N")) N = j.at("N").get<std::uint64_t>();
    if (j.contains("N_test")) N_test = j.at("N_test").get<std::uint64_t>();
    if (j.contains("n_grid")) {
      n_grid = j.at("n_grid").get<std::vector<std::uint64_t>>();
    }
    if (j.contains("n_e")) n_e = j.at("n_e").get<std::vector<std::uint64_t>>();
    if (j.contains("n_e_fraction")) {
      n_e_fraction = j.at("n_e_fraction").get<double>();
    }
    if (j.contains("n_e_floor")) {
      n_e_floor = j.at("n_e_floor").get<std::uint64_t>();
    }
    if (j.contains("delta")) delta = j.at("delta").get<double>();
    if (j.contains("epsilon")) epsilon = j.at("epsilon").get<double>();
    if (j.contains("eta")) eta = j.at("eta").get<double>();
    if (j.contains("sharp_unplanting")) {
      sharp_unplanting = j.at("sharp_unplanting").get<bool>();
    }
    if (j.contains("seeds")) {
      seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    }
    if (j.contains("source")) {
      const auto& s = j.at("source");
      if (s.contains("generator")) {
        source.generator = s.at("generator").get<std::string>();
      }
      if (s.contains("rows")) source.rows = s.at("rows").get<std::size_t>();
      if (s.contains("seed")) source.seed = s.at("seed").get<std::uint64_t>();
      if (s.contains("csv")) source.csv = s.at("csv").get<std::string>();
      if (s.contains("schema")) {
        source.schema = s.at("schema").get<std::string>();
      }
    }
    if (j.contains("out")) out = j.at("out").get<std::string>();
    if (j.contains("format")) format = j.at("format").get<std::string>();
    if (j.contains("timing")) timing = j.at("timing").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid experiment config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::FromJson(const nlohmann::json& j) {
  ExperimentConfig c;
  c.Update(j);
  return c;
}

SweepContext PrepareSweep(const ExperimentConfig& config) {
  config.Validate();
  std::optional<GeneratorConfig> generator;
  std::optional<Dataset> base;
  if (IsGenerator(config.source)) {
    generator = LoadGenerator(config.source.generator);
    base = GenerateBaseDataset(*generator, config.source.rows,
                               config.source.seed);
  } else if (config.source.schema) {
    std::ifstream in(*config.source.schema);
    if (!in) throw Error("cannot open " + *config.source.schema);
    auto universe = std::make_shared<const Universe>(
        Universe::FromJson(nlohmann::json::parse(in)));
    base = ReadDatasetCsv(*config.source.csv, std::move(universe));
  } else {
    base = ReadDatasetCsvInferred(*config.source.csv);
  }
  const UniversePtr& universe = base->universe_ptr();

  std::optional<Transformation> g;
  if (config.transformation) {
    g = Transformation::FromJson(*config.transformation, universe);
  } else if (generator) {
    g = ProfileTransformation(*generator, universe);
  } else {
    throw Error("a transformation is required for CSV sources");
  }

  LabelIndex target = 0;
  if (config.objective != SweepObjective::kErase) {
    target = universe->LabelOrThrow(
        config.target.value_or(DefaultTarget(config.objective)));
  }

  EscapeSelector escape = EscapeSelector::FlipFirstFixed();
  if (config.objective == SweepObjective::kPlantFeatureOnly) {
    if (config.escape == "paper") escape = PaperEscapeSelector(*universe);
    escape.Validate(*g);
  }

  std::optional<double> eta = config.eta;
  if (config.objective == SweepObjective::kErase && !eta && generator &&
      universe->feature_cardinality() <= 1'000'000) {
    const double margin = ErasureMargin(ExactPopulation(*generator), *g);
    if (margin > 0) eta = margin;
  }
  return {std::move(*base), std::move(*g), target, std::move(escape), eta};
}

SweepTable RunSweep(const ExperimentConfig& config) {
  return RunSweep(config, PrepareSweep(config));
}

SweepTable RunSweep(const ExperimentConfig& config, const SweepContext& ctx) {
  config.Validate();
  SweepTable table;
  std::vector<Cell> cells;
  for (auto seed : config.seeds) {
    for (auto n : config.n_grid) {
      for (auto n_e : EstimationSizes(config, n)) {
        Cell cell{seed, n, n_e};
        if (auto reason = Precondition(config, ctx, cell)) {
          table.skipped.push_back({seed, n, n_e, *reason});
        } else {
          cells.push_back(cell);
        }
      }
    }
  }

  std::vector<std::optional<SweepRow>> rows(cells.size());
  std::vector<std::string> errors(cells.size());
  ParallelFor(cells.size(), [&](std::size_t i) {
    try {
      rows[i] = RunCell(config, ctx, cells[i]);
    } catch (const ErasureWindowError& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (rows[i]) {
      table.rows.push_back(std::move(*rows[i]));
    } else {
      table.skipped.push_back(
          {cells[i].seed, cells[i].n, cells[i].n_e, errors[i]});
    }
  }
  auto key = [](const auto& r) { return std::tuple(r.seed, r.n, r.n_e); };
  std::sort(table.rows.begin(), table.rows.end(),
            [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::sort(table.skipped.begin(), table.skipped.end(),
            [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return table;
}

std::string FormatDouble(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void EmitResults(const SweepTable& table, const std::string& path,
                 const std::string& format, bool timing) {
  if (table.rows.empty()) throw Error("no results to write");
  if (format != "csv" && format != "json") {
    throw Error("format must be csv or json");
  }
  std::ostringstream out;
  if (format == "csv") {
    out << "seed,n,n_e,target,bound,bound_clamped,delta_tilde,success,cracked";
    if (timing) out << ",wall_seconds";
    out << '\n';
    for (const auto& r : table.rows) {
      out << r.seed << ',' << r.n << ',' << OptionalCount(r.n_e) << ','
          << QuoteCsvField(r.target) << ',' << FormatDouble(r.bound) << ','
          << FormatDouble(r.bound_clamped) << ','
          << FormatDouble(r.delta_tilde) << ',' << FormatDouble(r.success)
          << ',' << r.cracked;
      if (timing) out << ',' << FormatDouble(r.wall_seconds);
      out << '\n';
    }
  } else {
    out << "[\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto& r = table.rows[i];
      out << "  {\"seed\": " << r.seed << ", \"n\": " << r.n
          << ", \"n_e\": " << (r.n_e ? std::to_string(*r.n_e) : "null")
          << ", \"target\": " << JsonString(r.target)
          << ", \"bound\": " << FormatDouble(r.bound)
          << ", \"bound_clamped\": " << FormatDouble(r.bound_clamped)
          << ", \"delta_tilde\": " << FormatDouble(r.delta_tilde)
          << ", \"success\": " << FormatDouble(r.success)
          << ", \"cracked\": " << r.cracked;
      if (timing) out << ", \"wall_seconds\": " << FormatDouble(r.wall_seconds);
      out << '}' << (i + 1 < table.rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  file << out.str();
  if (!file) throw Error("write failed: " + path);
}

std::vector<SweepRow> ReadResults(const std::string& path,
                                  const std::string& format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<SweepRow> rows;
  if (format == "json") {
    for (const auto& o : nlohmann::json::parse(in)) {
      SweepRow r;
      r.seed = o.at("seed").get<std::uint64_t>();
      r.n = o.at("n").get<std::uint64_t>();
      if (!o.at("n_e").is_null()) r.n_e = o.at("n_e").get<std::uint64_t>();
      r.target = o.at("target").get<std::string>();
      r.bound = o.at("bound").get<double>();
      r.bound_clamped = o.at("bound_clamped").get<double>();
      r.delta_tilde = o.at("delta_tilde").get<double>();
      r.success = o.at("success").get<double>();
      r.cracked = o.at("cracked").get<std::uint64_t>();
      r.wall_seconds = o.value("wall_seconds", 0.0);
      rows.push_back(std::move(r));
    }
    return rows;
  }
  if (format != "csv") throw Error("format must be csv or json");
  std::string line;
  if (!std::getline(in, line)) throw Error("results file is empty");
  const bool timing = SplitCsvLine(line).size() == 10;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != (timing ? 10u : 9u)) throw Error("malformed results row");
    SweepRow r;
    r.seed = std::stoull(f[0]);
    r.n = std::stoull(f[1]);
    if (!f[2].empty()) r.n_e = std::stoull(f[2]);
    r.target = f[3];
    r.bound = std::strtod(f[4].c_str(), nullptr);
    r.bound_clamped = std::strtod(f[5].c_str(), nullptr);
    r.delta_tilde = std::strtod(f[6].c_str(), nullptr);
    r.success = std::strtod(f[7].c_str(), nullptr);
    r.cracked = std::stoull(f[8]);
    if (timing) r.wall_seconds = std::strtod(f[9].c_str(), nullptr);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace collusion
