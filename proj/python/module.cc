#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "collusion/bounds.h"
#include "collusion/car_datagen.h"
#include "collusion/concentration.h"
#include "collusion/csv_io.h"
#include "collusion/experiment.h"
#include "collusion/idr.h"
#include "collusion/joint_counts.h"

namespace py = pybind11;

namespace collusion {
namespace {

py::object ToPython(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Objective ParseObjective(const std::string& name) {
  for (auto o : {Objective::kPlantingFeatureLabel, Objective::kPlantingFeatureOnly,
                 Objective::kUnplanting, Objective::kErasing}) {
    if (ObjectiveName(o) == name) return o;
  }
  throw Error("unknown objective: " + name);
}

BoundParams MakeParams(std::uint64_t n, std::uint64_t N, std::uint64_t N_test,
                       double delta, double epsilon) {
  BoundParams p;
  p.n = n;
  p.N = N;
  p.N_test = N_test;
  p.delta = delta;
  p.epsilon = epsilon;
  return p;
}

EscapeSelector MakeEscape(const Universe& u,
                          const std::optional<std::map<std::string, std::string>>& overwrite) {
  if (!overwrite) return EscapeSelector::FlipFirstFixed();
  std::map<std::size_t, CategoryIndex> values;
  for (const auto& [feature, category] : *overwrite) {
    const auto f = u.FindFeature(feature);
    if (!f) throw Error("unknown feature: " + feature);
    const auto c = u.FindCategory(*f, category);
    if (!c) throw Error("unknown category: " + category);
    values[*f] = *c;
  }
  return EscapeSelector::Overwrite(std::move(values));
}

py::object Report(const BoundReport& r, const Universe& u) { return ToPython(ToJson(r, u)); }

}  // namespace
}  // namespace collusion

PYBIND11_MODULE(_core, m) {
  using namespace collusion;
  m.doc() = "Lower bounds on collective success against empirical classifiers.";

  auto& error = py::register_exception<Error>(m, "CollusionError", PyExc_ValueError);
  py::register_exception<ErasureWindowError>(m, "ErasureWindowError", error.ptr());

  py::class_<Universe, std::shared_ptr<Universe>>(m, "Universe")
      .def(py::init([](const std::vector<std::pair<std::string, std::vector<std::string>>>& features,
                       const std::vector<std::string>& labels) {
             std::vector<Feature> fs;
             for (const auto& [name, categories] : features) fs.push_back({name, categories});
             return std::make_shared<Universe>(std::move(fs), labels);
           }),
           py::arg("features"), py::arg("labels"))
      .def_property_readonly("feature_names",
                             [](const Universe& u) {
                               std::vector<std::string> names;
                               for (const auto& f : u.features()) names.push_back(f.name);
                               return names;
                             })
      .def_property_readonly("labels", &Universe::labels)
      .def_property_readonly("cardinality", &Universe::feature_cardinality)
      .def("categories", [](const Universe& u, std::size_t f) { return u.feature(f).categories; })
      .def("encode", [](const Universe& u, const std::vector<CategoryIndex>& x) { return u.Encode(x); })
      .def("decode", &Universe::Decode)
      .def("describe", &Universe::Describe)
      .def("to_json", [](const Universe& u) { return ToPython(u.ToJson()); });

  // Universes are shared as const; expose the non-const holder for Python.
  auto as_ptr = [](const std::shared_ptr<Universe>& u) -> UniversePtr { return u; };
  auto as_mutable = [](const UniversePtr& u) {
    return std::const_pointer_cast<Universe>(u);
  };

  m.def("car_universe", [as_mutable] { return as_mutable(CarUniverse()); });

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([as_ptr](const std::shared_ptr<Universe>& u,
                             const std::vector<std::pair<FeatureCode, LabelIndex>>& rows) {
             std::vector<Sample> samples;
             samples.reserve(rows.size());
             for (const auto& [x, y] : rows) samples.push_back({x, y});
             return Dataset(as_ptr(u), std::move(samples));
           }),
           py::arg("universe"), py::arg("rows"))
      .def("__len__", &Dataset::size)
      .def_property_readonly("universe",
                             [as_mutable](const Dataset& d) { return as_mutable(d.universe_ptr()); })
      .def_property_readonly("role", [](const Dataset& d) { return std::string(RoleName(d.role())); })
      .def("rows",
           [](const Dataset& d) {
             std::vector<std::pair<FeatureCode, LabelIndex>> out;
             out.reserve(d.size());
             for (const auto& s : d.samples()) out.emplace_back(s.x, s.y);
             return out;
           })
      .def("label_counts",
           [](const Dataset& d) {
             std::vector<std::uint64_t> counts(d.universe().num_labels(), 0);
             for (const auto& s : d.samples()) ++counts[s.y];
             return counts;
           })
      .def("write_csv", [](const Dataset& d, const std::string& path) { WriteDatasetCsv(path, d); });

  m.def(
      "read_csv",
      [as_ptr](const std::string& path, std::optional<std::shared_ptr<Universe>> u) {
        return u ? ReadDatasetCsv(path, as_ptr(*u)) : ReadDatasetCsvInferred(path);
      },
      py::arg("path"), py::arg("universe") = py::none());
  m.def("split_dataset", &SplitDataset, py::arg("dataset"), py::arg("k"), py::arg("seed"));

  py::class_<Transformation>(m, "Transformation")
      .def(py::init([as_ptr](const std::shared_ptr<Universe>& u,
                             const std::map<std::string, std::string>& fix) {
             nlohmann::json j;
             j["fix"] = fix;
             return Transformation::FromJson(j, as_ptr(u));
           }),
           py::arg("universe"), py::arg("fix"))
      .def("apply", &Transformation::Apply)
      .def("in_signal_set", &Transformation::InSignalSet)
      .def("signal_set", [](const Transformation& g) { return SignalSet(g); })
      .def_property_readonly("signal_set_size", &Transformation::SignalSetSize)
      .def("to_json", [](const Transformation& g) { return ToPython(g.ToJson()); });
  m.def("paper_transformation", [as_ptr](const std::shared_ptr<Universe>& u) {
    return PaperTransformation(as_ptr(u));
  });

  m.def(
      "generate_car_dataset",
      [](std::size_t rows, std::uint64_t seed, bool reduced) {
        return GenerateBaseDataset(reduced ? ReducedCarGeneratorConfig() : CarGeneratorConfig(),
                                   rows, seed);
      },
      py::arg("rows"), py::arg("seed") = 0, py::arg("reduced") = false);
  m.def(
      "profile_transformation",
      [](const Dataset& d, bool reduced) {
        return ProfileTransformation(reduced ? ReducedCarGeneratorConfig() : CarGeneratorConfig(),
                                     d.universe_ptr());
      },
      py::arg("dataset"), py::arg("reduced") = false);
  m.def(
      "sample_disjoint",
      [](const Dataset& base, const std::vector<std::size_t>& sizes, std::uint64_t seed) {
        return SampleDisjoint(base, sizes, seed);
      },
      py::arg("base"), py::arg("sizes"), py::arg("seed"));

  m.def("hoeffding_term", &HoeffdingTerm, py::arg("delta_tilde"), py::arg("k"));
  m.def(
      "union_delta",
      [](double delta, const std::string& objective, double signal, double labels,
         double features) {
        return UnionDelta({delta, ParseObjective(objective), signal, labels, features});
      },
      py::arg("delta"), py::arg("objective"), py::arg("signal_set_size"),
      py::arg("num_labels"), py::arg("feature_space_size") = 1.0);
  m.def(
      "erasure_sample_window",
      [](double delta_tilde, double eta, std::uint64_t N) {
        const auto w = ErasureSampleWindow(delta_tilde, eta, N);
        return std::make_tuple(w.n_min, w.n_max, w.threshold);
      },
      py::arg("delta_tilde"), py::arg("eta"), py::arg("N"));

  m.def(
      "planting_bound",
      [](const Dataset& d, const Transformation& g, const std::string& target, std::uint64_t N,
         std::uint64_t N_test, double delta, double epsilon, bool feature_only,
         std::optional<std::map<std::string, std::string>> escape) {
        const auto& u = d.universe();
        const auto p = MakeParams(d.size(), N, N_test, delta, epsilon);
        const LabelIndex y = u.LabelOrThrow(target);
        return Report(feature_only
                          ? PlantingBoundFeatureOnly(d, g, y, MakeEscape(u, escape), p)
                          : PlantingBoundFeatureLabel(d, g, y, p),
                      u);
      },
      py::arg("collective"), py::arg("g"), py::arg("target"), py::arg("N"),
      py::arg("N_test"), py::arg("delta") = 0.05, py::arg("epsilon") = 0.0,
      py::arg("feature_only") = false, py::arg("escape") = py::none());
  m.def(
      "unplanting_bound",
      [](const Dataset& estimation, const Dataset& rest, const Transformation& g,
         const std::string& target, std::uint64_t N, std::uint64_t N_test, double delta,
         double epsilon, bool sharp) {
        auto p = MakeParams(estimation.size() + rest.size(), N, N_test, delta, epsilon);
        p.n_e = estimation.size();
        p.sharp_unplanting = sharp;
        const auto& u = estimation.universe();
        return Report(UnplantingBound(estimation, rest, g, u.LabelOrThrow(target), p), u);
      },
      py::arg("estimation"), py::arg("rest"), py::arg("g"), py::arg("target"), py::arg("N"),
      py::arg("N_test"), py::arg("delta") = 0.05, py::arg("epsilon") = 0.0,
      py::arg("sharp") = false);
  m.def(
      "naive_unplanting_bound",
      [](const Dataset& d, const Transformation& g, const std::string& target, std::uint64_t N,
         std::uint64_t N_test, double delta, double epsilon) {
        const auto& u = d.universe();
        const auto r = NaiveUnplantingBound(d, g, u.LabelOrThrow(target),
                                            MakeParams(d.size(), N, N_test, delta, epsilon));
        py::dict candidates;
        for (const auto& [y, report] : r.candidates) {
          candidates[py::str(u.labels()[y])] = Report(report, u);
        }
        return py::make_tuple(u.labels()[r.best_label], Report(r.report, u), candidates);
      },
      py::arg("collective"), py::arg("g"), py::arg("target"), py::arg("N"), py::arg("N_test"),
      py::arg("delta") = 0.05, py::arg("epsilon") = 0.0);
  m.def(
      "erasing_bound",
      [](const Dataset& d, const Transformation& g, std::uint64_t N, std::uint64_t N_test,
         double eta, double delta, double epsilon) {
        auto p = MakeParams(d.size(), N, N_test, delta, epsilon);
        p.eta = eta;
        return Report(ErasingBound(d, g, p), d.universe());
      },
      py::arg("collective"), py::arg("g"), py::arg("N"), py::arg("N_test"), py::arg("eta"),
      py::arg("delta") = 0.05, py::arg("epsilon") = 0.0);

  py::class_<PopulationDistribution>(m, "Population")
      .def(py::init([as_ptr](const std::shared_ptr<Universe>& u,
                             const std::vector<std::tuple<FeatureCode, LabelIndex, double>>& cells) {
             std::vector<std::pair<Sample, double>> c;
             for (const auto& [x, y, p] : cells) c.push_back({{x, y}, p});
             return PopulationDistribution(as_ptr(u), std::move(c));
           }),
           py::arg("universe"), py::arg("cells"))
      .def_static("empirical",
                  [](const Dataset& d) {
                    return PopulationDistribution::FromCounts(EmpiricalJoint(d));
                  })
      .def("pair_prob", &PopulationDistribution::PairProb)
      .def("marginal_prob", &PopulationDistribution::MarginalProb);
  m.def(
      "idr_bound",
      [](const PopulationDistribution& d, const Transformation& g, const std::string& objective,
         std::optional<std::string> target, double alpha, double epsilon) {
        std::optional<LabelIndex> y;
        if (target) y = d.universe().LabelOrThrow(*target);
        return Report(IdrBound(d, g, ParseObjective(objective), y, alpha, epsilon),
                      d.universe());
      },
      py::arg("population"), py::arg("g"), py::arg("objective"),
      py::arg("target") = py::none(), py::arg("alpha"), py::arg("epsilon") = 0.0);
  m.def(
      "prior_bound_planting",
      [](const PopulationDistribution& d, const Transformation& g, const std::string& target,
         double alpha) {
        return PriorBoundPlanting(d, g, d.universe().LabelOrThrow(target), alpha);
      },
      py::arg("population"), py::arg("g"), py::arg("target"), py::arg("alpha"));
  m.def("erasure_margin", &ErasureMargin, py::arg("population"), py::arg("g"));

  m.def(
      "run_sweep",
      [](const std::string& config_json) {
        const auto config = ExperimentConfig::FromJson(nlohmann::json::parse(config_json));
        SweepTable table;
        {
          py::gil_scoped_release release;
          table = RunSweep(config);
        }
        py::list rows;
        for (const auto& r : table.rows) {
          py::dict row;
          row["seed"] = r.seed;
          row["n"] = r.n;
          row["n_e"] = r.n_e ? py::object(py::int_(*r.n_e)) : py::object(py::none());
          row["target"] = r.target;
          row["bound"] = r.bound;
          row["bound_clamped"] = r.bound_clamped;
          row["delta_tilde"] = r.delta_tilde;
          row["success"] = r.success;
          row["cracked"] = r.cracked;
          rows.append(row);
        }
        py::list skipped;
        for (const auto& s : table.skipped) {
          skipped.append(py::make_tuple(s.seed, s.n, s.reason));
        }
        return py::make_tuple(rows, skipped);
      },
      py::arg("config_json"));
}
