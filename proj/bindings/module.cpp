// Python bindings for the core operations: dataset loading, synthetic data,
// splits, task assembly, metrics and the consistency score.

#include <optional>
#include <utility>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ddishift/baseline.hpp"
#include "ddishift/consistency.hpp"
#include "ddishift/dataio.hpp"
#include "ddishift/metrics.hpp"
#include "ddishift/similarity.hpp"
#include "ddishift/split.hpp"
#include "ddishift/synth.hpp"
#include "ddishift/tasks.hpp"

namespace py = pybind11;
using namespace ddishift;

namespace {

Dataset py_load_dataset(const std::filesystem::path& triplets,
                        std::optional<std::filesystem::path> fingerprints,
                        std::optional<std::filesystem::path> approval,
                        const std::string& mode,
                        const std::string& column_order) {
  FileManifest m;
  m.triplets = triplets;
  m.fingerprints = std::move(fingerprints);
  m.approval = std::move(approval);
  m.mode = mode_from_string(mode);
  m.column_order = column_order;
  return load_dataset(m);
}

DrugSplit py_make_split(const Dataset& ds, const std::string& strategy,
                        std::uint64_t seed, double new_fraction,
                        std::optional<double> gamma0,
                        std::optional<int> threshold_year, double tolerance) {
  SplitRequest req;
  req.strategy = strategy_from_string(strategy);
  req.seed = seed;
  req.new_fraction = new_fraction;
  req.gamma0 = gamma0;
  req.threshold_year = threshold_year;
  req.fraction_tolerance = tolerance;
  if (req.strategy == SplitStrategy::cluster) {
    const SimilarityMatrix sim = pairwise_similarity(ds.fingerprints);
    return cluster_split(ds, sim, req);
  }
  return make_split(ds, nullptr, req);
}

py::list triplets_to_list(const std::vector<DdiTriplet>& triplets) {
  py::list out;
  for (const auto& t : triplets) {
    out.append(py::make_tuple(t.head, t.tail, t.relation,
                              t.label ? py::cast(*t.label) : py::none()));
  }
  return out;
}

py::dict consistency_to_dict(const ConsistencyResult& res) {
  py::dict schemes;
  for (const auto& [name, score] : res.schemes) {
    py::dict row;
    row["penalty"] = score.penalty;
    row["index"] = score.perfect() ? py::none().cast<py::object>()
                                   : py::cast(*score.index);
    schemes[py::str(name)] = row;
  }
  py::dict out;
  out["threshold_year"] = res.threshold_year;
  out["evaluated_drugs"] = res.evaluated_drugs;
  out["schemes"] = schemes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "distribution-shift benchmark toolkit for drug interactions";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "Error");

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly(
          "drugs", [](const Dataset& ds) { return ds.drugs; })
      .def_property_readonly(
          "relations", [](const Dataset& ds) { return ds.relations; })
      .def_property_readonly(
          "triplets",
          [](const Dataset& ds) { return triplets_to_list(ds.triplets); })
      .def_property_readonly(
          "approval_years",
          [](const Dataset& ds) { return ds.approval_years; })
      .def_property_readonly(
          "mode", [](const Dataset& ds) { return to_string(ds.mode); })
      .def("stats",
           [](const Dataset& ds) {
             const DatasetStats st = dataset_stats(ds);
             py::dict out;
             out["drugs"] = st.drug_count;
             out["relation_types"] = st.relation_count;
             out["vocabulary"] = st.vocabulary_size;
             out["triplets"] = st.triplet_count;
             out["relation_frequency"] = st.relation_frequency;
             return out;
           })
      .def("__repr__", [](const Dataset& ds) {
        return "<Dataset drugs=" + std::to_string(ds.drugs.size()) +
               " triplets=" + std::to_string(ds.triplets.size()) + ">";
      });

  py::class_<DrugSplit>(m, "DrugSplit")
      .def_readonly("known", &DrugSplit::known)
      .def_readonly("new", &DrugSplit::new_drugs)
      .def_readonly("excluded", &DrugSplit::excluded)
      .def_readonly("seed", &DrugSplit::seed)
      .def_readonly("rng", &DrugSplit::rng)
      .def_readonly("gamma0", &DrugSplit::gamma0)
      .def_readonly("normalized_gamma0", &DrugSplit::normalized_gamma0)
      .def_readonly("achieved_gamma", &DrugSplit::achieved_gamma)
      .def_readonly("cluster_count", &DrugSplit::cluster_count)
      .def_readonly("threshold_year", &DrugSplit::threshold_year)
      .def_property_readonly(
          "strategy",
          [](const DrugSplit& s) { return std::string(to_string(s.strategy)); })
      .def("__repr__", [](const DrugSplit& s) {
        return "<DrugSplit " + std::string(to_string(s.strategy)) +
               " known=" + std::to_string(s.known.size()) +
               " new=" + std::to_string(s.new_drugs.size()) + ">";
      });

  py::class_<TaskSplit>(m, "TaskSplit")
      .def_property_readonly(
          "train", [](const TaskSplit& t) { return triplets_to_list(t.train); })
      .def_property_readonly(
          "s1_test",
          [](const TaskSplit& t) { return triplets_to_list(t.s1_test); })
      .def_property_readonly(
          "s2_test",
          [](const TaskSplit& t) { return triplets_to_list(t.s2_test); })
      .def_readonly("dropped", &TaskSplit::dropped)
      .def_readonly("drug_split", &TaskSplit::drug_split);

  m.def("load_dataset", &py_load_dataset, py::arg("triplets"),
        py::arg("fingerprints") = py::none(), py::arg("approval") = py::none(),
        py::arg("mode") = "multiclass", py::arg("column_order") = "htr");

  m.def(
      "generate_synthetic",
      [](std::size_t drugs, std::size_t clusters, std::size_t epochs,
         std::uint32_t width, std::uint64_t seed) {
        SynthConfig cfg;
        cfg.drug_count = drugs;
        cfg.cluster_count = clusters;
        cfg.epoch_count = epochs;
        cfg.width = width;
        cfg.seed = seed;
        return generate_synthetic(cfg);
      },
      py::arg("drugs") = 150, py::arg("clusters") = 5, py::arg("epochs") = 5,
      py::arg("width") = 512, py::arg("seed") = 42);

  m.def("make_split", &py_make_split, py::arg("dataset"), py::arg("strategy"),
        py::arg("seed") = 42, py::arg("new_fraction") = 0.2,
        py::arg("gamma0") = py::none(), py::arg("threshold_year") = py::none(),
        py::arg("tolerance") = 0.05);

  m.def("assemble_tasks", &assemble_tasks, py::arg("dataset"),
        py::arg("split"));

  m.def("write_drug_split", &write_drug_split, py::arg("path"),
        py::arg("split"));
  m.def("load_drug_split", &load_drug_split, py::arg("path"));
  m.def(
      "write_task_split",
      [](const std::filesystem::path& dir, const TaskSplit& tasks,
         const Dataset& ds) { write_task_split(dir, tasks, ds.relations, ds.mode); },
      py::arg("dir"), py::arg("tasks"), py::arg("dataset"));

  m.def(
      "tanimoto",
      [](const std::string& hex_a, const std::string& hex_b) {
        return tanimoto(fingerprint_from_hex(hex_a),
                        fingerprint_from_hex(hex_b));
      },
      py::arg("hex_a"), py::arg("hex_b"),
      "Tanimoto similarity of two hex-encoded fingerprints");

  m.def("macro_f1", &macro_f1, py::arg("gold"), py::arg("pred"));
  m.def("accuracy", &accuracy, py::arg("gold"), py::arg("pred"));
  m.def("cohen_kappa", &cohen_kappa, py::arg("gold"), py::arg("pred"));
  m.def("roc_auc", &roc_auc, py::arg("scores"), py::arg("labels"));
  m.def("pr_auc", &pr_auc, py::arg("scores"), py::arg("labels"));

  m.def(
      "consistency_index",
      [](const std::vector<std::pair<std::string, DrugSplit>>& schemes,
         const std::map<DrugId, int>& years, int threshold_year) {
        return consistency_to_dict(
            consistency_index(schemes, years, threshold_year));
      },
      py::arg("schemes"), py::arg("years"), py::arg("threshold_year"));

  m.def(
      "run_benchmark",
      [](const Dataset& ds, const std::vector<std::string>& strategies,
         const std::vector<std::uint64_t>& seeds, double new_fraction,
         double gamma0, int threshold_year) {
        BenchOptions opts;
        opts.seeds = seeds;
        opts.new_fraction = new_fraction;
        opts.gamma0 = gamma0;
        opts.threshold_year = threshold_year;
        std::vector<SplitStrategy> parsed;
        for (const auto& s : strategies)
          parsed.push_back(strategy_from_string(s));
        py::list out;
        for (const auto& row : run_benchmark(ds, parsed, opts)) {
          py::dict d;
          d["strategy"] = row.strategy;
          d["seed"] = row.seed;
          d["task"] = row.task;
          d["metric"] = row.metric;
          d["value"] = row.value;
          out.append(d);
        }
        return out;
      },
      py::arg("dataset"), py::arg("strategies"),
      py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3},
      py::arg("new_fraction") = 0.2, py::arg("gamma0") = 0.5,
      py::arg("threshold_year") = 2000);
}
