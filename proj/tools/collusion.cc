#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "collusion/bounds.h"
#include "collusion/car_datagen.h"
#include "collusion/csv_io.h"
#include "collusion/error.h"
#include "collusion/experiment.h"
#include "collusion/idr.h"
#include "collusion/joint_counts.h"

namespace {

using collusion::Error;

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid JSON in " + path + ": " + e.what());
  }
}

// Inline JSON object or a path to a JSON file.
nlohmann::json JsonArg(const std::string& value) {
  const auto first = value.find_first_not_of(" \t\n");
  if (first == std::string::npos || value[first] != '{') return ReadJson(value);
  try {
    return nlohmann::json::parse(value);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON argument: ") + e.what());
  }
}

// "1,2,5" or "0-39" or a mix such as "0-3,10".
std::vector<std::uint64_t> ParseCounts(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw Error("bad range: " + item);
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw Error("not a count list: " + text);
    }
  }
  return out;
}

collusion::GeneratorConfig LoadGenerator(const std::string& name) {
  if (name == "car") return collusion::CarGeneratorConfig();
  if (name == "reduced") return collusion::ReducedCarGeneratorConfig();
  return collusion::GeneratorConfig::FromFile(name);
}

collusion::UniversePtr LoadUniverse(const std::string& path) {
  return std::make_shared<const collusion::Universe>(
      collusion::Universe::FromJson(ReadJson(path)));
}

// A CSV whose header is the vehicle schema is read against it; otherwise the
// schema is inferred.
collusion::Dataset LoadDataset(const std::string& csv,
                               const std::string& schema) {
  if (!schema.empty()) return collusion::ReadDatasetCsv(csv, LoadUniverse(schema));
  const auto header = collusion::ReadCsvHeader(csv);
  const auto car = collusion::CarUniverse();
  bool is_car = header.size() == car->num_features() + 1;
  for (std::size_t f = 0; is_car && f < car->num_features(); ++f) {
    is_car = header[f] == car->feature(f).name;
  }
  if (is_car) return collusion::ReadDatasetCsv(csv, car);
  return collusion::ReadDatasetCsvInferred(csv);
}

void WithOutput(const std::string& path,
                const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write(out);
}

struct GenerateArgs {
  std::string generator = "car";
  std::size_t rows = 3'000'000;
  std::uint64_t seed = 0;
  std::string out;
  std::string schema_out;
  std::string config_out;
};

int RunGenerate(const GenerateArgs& a) {
  const auto config = LoadGenerator(a.generator);
  const auto data = collusion::GenerateBaseDataset(config, a.rows, a.seed);
  WithOutput(a.out, [&](std::ostream& out) {
    collusion::WriteDatasetCsv(out, data);
  });
  if (!a.schema_out.empty()) {
    WithOutput(a.schema_out, [&](std::ostream& out) {
      out << data.universe().ToJson().dump(2) << '\n';
    });
  }
  if (!a.config_out.empty()) {
    WithOutput(a.config_out, [&](std::ostream& out) {
      out << config.ToJson().dump(2) << '\n';
    });
  }
  std::cerr << "generated " << data.size() << " rows\n";
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string objective;
  std::optional<std::uint64_t> N, N_test;
  std::string n_grid, n_e, seeds;
  std::optional<double> n_e_fraction, delta, epsilon, eta;
  std::optional<std::uint64_t> n_e_floor;
  std::string target, transformation, escape;
  bool sharp = false;
  std::string generator, csv, schema;
  std::optional<std::size_t> rows;
  std::optional<std::uint64_t> data_seed;
  std::string out, format;
  bool timing = false;
};

int RunSweepCommand(const SweepArgs& a) {
  collusion::ExperimentConfig c;
  if (!a.objective.empty()) c.objective = collusion::ParseSweepObjective(a.objective);
  if (a.N) c.N = *a.N;
  if (a.N_test) c.N_test = *a.N_test;
  if (!a.n_grid.empty()) c.n_grid = ParseCounts(a.n_grid);
  if (!a.n_e.empty()) c.n_e = ParseCounts(a.n_e);
  if (!a.seeds.empty()) c.seeds = ParseCounts(a.seeds);
  if (a.n_e_fraction) c.n_e_fraction = a.n_e_fraction;
  if (a.n_e_floor) c.n_e_floor = *a.n_e_floor;
  if (a.delta) c.delta = *a.delta;
  if (a.epsilon) c.epsilon = *a.epsilon;
  if (a.eta) c.eta = a.eta;
  if (!a.target.empty()) c.target = a.target;
  if (!a.transformation.empty()) c.transformation = JsonArg(a.transformation);
  if (!a.escape.empty()) c.escape = a.escape;
  if (a.sharp) c.sharp_unplanting = true;
  if (!a.generator.empty()) c.source.generator = a.generator;
  if (!a.csv.empty()) c.source.csv = a.csv;
  if (!a.schema.empty()) c.source.schema = a.schema;
  if (a.rows) c.source.rows = *a.rows;
  if (a.data_seed) c.source.seed = *a.data_seed;
  if (!a.out.empty()) c.out = a.out;
  if (!a.format.empty()) c.format = a.format;
  if (a.timing) c.timing = true;
  if (!a.config.empty()) c.Update(ReadJson(a.config));
  if (c.out.empty()) throw Error("an output path is required (--out)");

  std::cerr << "preparing " << collusion::SweepObjectiveName(c.objective)
            << " sweep\n";
  const auto ctx = collusion::PrepareSweep(c);
  if (ctx.eta) std::cerr << "eta = " << collusion::FormatDouble(*ctx.eta) << '\n';
  const auto table = collusion::RunSweep(c, ctx);
  for (const auto& s : table.skipped) {
    std::cerr << "skipped seed=" << s.seed << " n=" << s.n;
    if (s.n_e) std::cerr << " n_e=" << *s.n_e;
    std::cerr << ": " << s.reason << '\n';
  }
  collusion::EmitResults(table, c.out, c.format, c.timing);
  std::cerr << table.rows.size() << " rows written to " << c.out << '\n';
  return 0;
}

struct BoundsArgs {
  std::string data, schema, objective = "plant-fl", target, transformation;
  std::string escape = "flip";
  std::uint64_t N = 1'000'000, N_test = 100'000;
  std::optional<std::uint64_t> n_e;
  double delta = 0.05, epsilon = 0.0;
  std::optional<double> eta;
  bool sharp = false;
  std::uint64_t seed = 0;
  std::string format = "json", out;
};

int RunBounds(const BoundsArgs& a) {
  using namespace collusion;
  const Dataset collective =
      LoadDataset(a.data, a.schema).WithRole(DatasetRole::kCollective);
  const auto& universe = collective.universe_ptr();
  Transformation g =
      !a.transformation.empty()
          ? Transformation::FromJson(JsonArg(a.transformation), universe)
      : *universe == *CarUniverse()
          ? PaperTransformation(universe)
          : throw Error("--transformation is required for this schema");

  BoundParams p;
  p.N = a.N;
  p.N_test = a.N_test;
  p.n = collective.size();
  p.n_e = a.n_e;
  p.delta = a.delta;
  p.epsilon = a.epsilon;
  p.eta = a.eta;
  p.sharp_unplanting = a.sharp;

  const SweepObjective objective = ParseSweepObjective(a.objective);
  auto target = [&](const char* fallback) {
    return universe->LabelOrThrow(a.target.empty() ? fallback : a.target);
  };
  BoundReport report;
  switch (objective) {
    case SweepObjective::kPlantFeatureLabel:
      report = PlantingBoundFeatureLabel(collective, g, target("Poor"), p);
      break;
    case SweepObjective::kPlantFeatureOnly: {
      const EscapeSelector escape = a.escape == "paper"
                                        ? PaperEscapeSelector(*universe)
                                        : EscapeSelector::FlipFirstFixed();
      report = PlantingBoundFeatureOnly(collective, g, target("Poor"), escape, p);
      break;
    }
    case SweepObjective::kUnplantNaive:
      report = NaiveUnplantingBound(collective, g, target("Excellent"), p).report;
      break;
    case SweepObjective::kUnplantAdaptive: {
      if (!a.n_e) throw Error("adaptive unplanting needs --ne");
      auto [est, rest] = SplitDataset(collective, *a.n_e, a.seed);
      report = UnplantingBound(est, rest, g, target("Excellent"), p);
      break;
    }
    case SweepObjective::kErase:
      report = ErasingBound(collective, g, p);
      break;
  }
  WithOutput(a.out, [&](std::ostream& out) {
    if (a.format == "csv") {
      out << BoundCsvHeader() << '\n' << BoundCsvRow(p.n, report) << '\n';
    } else {
      out << ToJson(report, *universe).dump(2) << '\n';
    }
  });
  return 0;
}

struct CompareArgs {
  std::string generator = "car", data, schema, target = "Poor", transformation;
  std::size_t rows = 3'000'000;
  std::uint64_t seed = 0;
  std::size_t points = 99;
  std::string out;
};

int RunCompare(const CompareArgs& a) {
  using namespace collusion;
  std::optional<PopulationDistribution> dist;
  std::optional<GeneratorConfig> gen;
  if (!a.data.empty()) {
    dist = PopulationDistribution::FromCounts(
        EmpiricalJoint(LoadDataset(a.data, a.schema)));
  } else {
    gen = LoadGenerator(a.generator);
    if (UniverseFor(*gen)->feature_cardinality() <= 1'000'000) {
      dist = ExactPopulation(*gen);
    } else {
      dist = PopulationDistribution::FromCounts(
          EmpiricalJoint(GenerateBaseDataset(*gen, a.rows, a.seed)));
    }
  }
  const auto& universe = dist->universe_ptr();
  std::optional<Transformation> g;
  if (!a.transformation.empty()) {
    g = Transformation::FromJson(JsonArg(a.transformation), universe);
  } else if (gen) {
    g = ProfileTransformation(*gen, universe);
  } else if (*universe == *CarUniverse()) {
    g = PaperTransformation(universe);
  } else {
    throw Error("--transformation is required for this schema");
  }
  const LabelIndex y = universe->LabelOrThrow(a.target);
  WithOutput(a.out, [&](std::ostream& out) {
    out << "alpha,idr_fl,idr_fo,prior_fl,cracked_fl\n";
    for (std::size_t i = 1; i <= a.points; ++i) {
      const double alpha =
          static_cast<double>(i) / static_cast<double>(a.points + 1);
      const auto fl =
          IdrBound(*dist, *g, Objective::kPlantingFeatureLabel, y, alpha);
      const auto fo =
          IdrBound(*dist, *g, Objective::kPlantingFeatureOnly, y, alpha);
      out << FormatDouble(alpha) << ',' << FormatDouble(fl.bound) << ','
          << FormatDouble(fo.bound) << ','
          << FormatDouble(PriorBoundPlanting(*dist, *g, y, alpha)) << ','
          << fl.CrackedCount() << '\n';
    }
  });
  return 0;
}

struct DescribeArgs {
  std::string generator = "car";
  std::size_t rows = 3'000'000;
  std::uint64_t seed = 0;
  std::string data, schema;
};

int RunDescribe(const DescribeArgs& a) {
  using namespace collusion;
  std::optional<Dataset> data;
  std::optional<Transformation> g;
  if (!a.data.empty()) {
    data = LoadDataset(a.data, a.schema);
    if (data->universe() == *CarUniverse()) {
      g = PaperTransformation(data->universe_ptr());
    }
  } else {
    const auto gen = LoadGenerator(a.generator);
    data = GenerateBaseDataset(gen, a.rows, a.seed);
    g = ProfileTransformation(gen, data->universe_ptr());
  }
  const Universe& u = data->universe();
  std::cout << "features: " << u.num_features() << '\n'
            << "#X: " << u.feature_cardinality() << '\n'
            << "#Y: " << u.num_labels() << '\n'
            << "rows: " << data->size() << '\n';
  if (!g) return 0;
  const auto tally = TallySignalSet(*data, *g);
  std::cout << "#X~: " << g->SignalSetSize() << '\n'
            << "signal rows: " << tally.signal_rows << " ("
            << 100.0 * static_cast<double>(tally.signal_rows) /
                   static_cast<double>(tally.rows)
            << "%)\n";
  std::vector<std::uint64_t> totals(u.num_labels(), 0);
  for (const auto& [x, counts] : tally.by_feature) {
    std::cout << u.Describe(x) << '\n';
    for (LabelIndex y = 0; y < u.num_labels(); ++y) {
      std::printf("  %-10s %llu\n", u.labels()[y].c_str(),
                  static_cast<unsigned long long>(counts[y]));
      std::fflush(stdout);
      totals[y] += counts[y];
    }
  }
  std::cout << "Total\n";
  for (LabelIndex y = 0; y < u.num_labels(); ++y) {
    std::printf("  %-10s %llu\n", u.labels()[y].c_str(),
                static_cast<unsigned long long>(totals[y]));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-sample collective action bounds and simulator"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a base dataset CSV");
  generate->add_option("--config,--generator", gen.generator,
                       "car, reduced, or a generator config JSON");
  generate->add_option("--rows", gen.rows);
  generate->add_option("--seed", gen.seed);
  generate->add_option("--out", gen.out, "CSV path, - for stdout")->required();
  generate->add_option("--schema-out", gen.schema_out, "Write the schema JSON");
  generate->add_option("--config-out", gen.config_out,
                       "Write the generator config JSON");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep");
  sweep->add_option("--config", sw.config, "Experiment JSON; overrides flags");
  sweep->add_option("--objective", sw.objective)
      ->check(CLI::IsMember({"plant-fl", "plant-fo", "unplant-naive",
                             "unplant-adaptive", "erase"}));
  sweep->add_option("--N", sw.N);
  sweep->add_option("--Ntest", sw.N_test);
  sweep->add_option("--n-grid", sw.n_grid, "e.g. 1000,2000,5000");
  sweep->add_option("--ne", sw.n_e);
  sweep->add_option("--ne-fraction", sw.n_e_fraction);
  sweep->add_option("--ne-floor", sw.n_e_floor);
  sweep->add_option("--delta", sw.delta);
  sweep->add_option("--epsilon", sw.epsilon);
  sweep->add_option("--eta", sw.eta);
  sweep->add_option("--seeds", sw.seeds, "e.g. 0-39");
  sweep->add_option("--target", sw.target);
  sweep->add_option("--transformation", sw.transformation,
                    "g as inline JSON or a JSON file");
  sweep->add_option("--escape", sw.escape)->check(CLI::IsMember({"flip", "paper"}));
  sweep->add_flag("--sharp", sw.sharp);
  sweep->add_option("--generator", sw.generator);
  sweep->add_option("--rows", sw.rows);
  sweep->add_option("--data-seed", sw.data_seed);
  sweep->add_option("--csv", sw.csv);
  sweep->add_option("--schema", sw.schema);
  sweep->add_option("--out", sw.out);
  sweep->add_option("--format", sw.format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_flag("--timing", sw.timing);

  BoundsArgs bd;
  auto* bounds = app.add_subcommand("bounds", "Bound report for a collective CSV");
  bounds->add_option("--data", bd.data, "Collective dataset CSV")->required();
  bounds->add_option("--schema", bd.schema);
  bounds->add_option("--objective", bd.objective)
      ->check(CLI::IsMember({"plant-fl", "plant-fo", "unplant-naive",
                             "unplant-adaptive", "erase"}));
  bounds->add_option("--target", bd.target);
  bounds->add_option("--transformation", bd.transformation,
                     "g as inline JSON or a JSON file");
  bounds->add_option("--escape", bd.escape)->check(CLI::IsMember({"flip", "paper"}));
  bounds->add_option("--N", bd.N);
  bounds->add_option("--Ntest", bd.N_test);
  bounds->add_option("--ne", bd.n_e);
  bounds->add_option("--delta", bd.delta);
  bounds->add_option("--epsilon", bd.epsilon);
  bounds->add_option("--eta", bd.eta);
  bounds->add_flag("--sharp", bd.sharp);
  bounds->add_option("--seed", bd.seed, "Seed of the estimation split");
  bounds->add_option("--format", bd.format)->check(CLI::IsMember({"csv", "json"}));
  bounds->add_option("--out", bd.out);

  CompareArgs cmp;
  auto* compare = app.add_subcommand(
      "compare-idr", "Infinite-data bounds against the earlier planting bound");
  compare->add_option("--generator", cmp.generator);
  compare->add_option("--data", cmp.data);
  compare->add_option("--schema", cmp.schema);
  compare->add_option("--target", cmp.target);
  compare->add_option("--transformation", cmp.transformation,
                      "g as inline JSON or a JSON file");
  compare->add_option("--rows", cmp.rows);
  compare->add_option("--seed", cmp.seed);
  compare->add_option("--points", cmp.points, "Interior alpha grid size");
  compare->add_option("--out", cmp.out);

  DescribeArgs ds;
  auto* describe = app.add_subcommand(
      "describe", "Cardinalities and signal-set label tallies");
  describe->add_option("--generator", ds.generator);
  describe->add_option("--rows", ds.rows);
  describe->add_option("--seed", ds.seed);
  describe->add_option("--data", ds.data);
  describe->add_option("--schema", ds.schema);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*generate) return RunGenerate(gen);
    if (*sweep) return RunSweepCommand(sw);
    if (*bounds) return RunBounds(bd);
    if (*compare) return RunCompare(cmp);
    if (*describe) return RunDescribe(ds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
