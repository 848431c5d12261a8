// ddishift command line: dataset validation, similarity, distribution-shift
// splits, task assembly, consistency scoring, evaluation and the frequency
// baseline benchmark.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddishift/baseline.hpp"
#include "ddishift/consistency.hpp"
#include "ddishift/dataio.hpp"
#include "ddishift/metrics.hpp"
#include "ddishift/similarity.hpp"
#include "ddishift/split.hpp"
#include "ddishift/synth.hpp"
#include "ddishift/tasks.hpp"

namespace fs = std::filesystem;
using namespace ddishift;

namespace {

struct CommonData {
  std::string triplets;
  std::string fingerprints;
  std::string approval;
  std::string mode = "multiclass";
  std::string column_order = "htr";
};

void add_data_options(CLI::App* cmd, CommonData& d, bool need_triplets) {
  auto* t = cmd->add_option("--triplets", d.triplets, "interaction TSV")
                ->check(CLI::ExistingFile);
  if (need_triplets) t->required();
  cmd->add_option("--fingerprints", d.fingerprints, "fingerprint TSV")
      ->check(CLI::ExistingFile);
  cmd->add_option("--approval", d.approval, "approval year TSV")
      ->check(CLI::ExistingFile);
  cmd->add_option("--mode", d.mode, "multiclass or multilabel")
      ->check(CLI::IsMember({"multiclass", "multilabel"}));
  cmd->add_option("--column-order", d.column_order,
                  "triplet column permutation over h, t, r");
}

Dataset load_common(const CommonData& d, LoadReport* report = nullptr) {
  FileManifest m;
  m.triplets = d.triplets;
  if (!d.fingerprints.empty()) m.fingerprints = d.fingerprints;
  if (!d.approval.empty()) m.approval = d.approval;
  m.mode = mode_from_string(d.mode);
  m.column_order = d.column_order;
  return load_dataset(m, report);
}

std::ofstream open_or_die(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(errc::io_failure, "cannot write " + path);
  return out;
}

// sim --cache reuse: a cache file only stores the float32 triangle, so a
// cache hit loses the exact integer counts. Splitting from a cache keeps the
// documented float32 semantics.
SimilarityMatrix matrix_for(const std::map<DrugId, Fingerprint>& prints,
                            const std::string& cache, unsigned workers,
                            bool quiet) {
  if (!cache.empty() && fs::exists(cache)) {
    SimilarityMatrix m = SimilarityMatrix::load(cache);
    std::vector<DrugId> ids;
    ids.reserve(prints.size());
    for (const auto& [id, fp] : prints) ids.push_back(id);
    m.attach_ids(std::move(ids));
    if (!quiet)
      std::cerr << "loaded similarity cache " << cache
                << " (float32 values, no exact counts)\n";
    return m;
  }
  SimilarityMatrix m = pairwise_similarity(prints, workers);
  if (m.zero_pairs() > 0 && !quiet)
    std::cerr << "warning: " << m.zero_pairs()
              << " all-zero fingerprint pairs scored 0.0\n";
  if (!cache.empty()) {
    m.save(cache);
    if (!quiet) std::cerr << "wrote similarity cache " << cache << "\n";
  }
  return m;
}

std::vector<SplitStrategy> parse_strategies(const std::vector<std::string>& names) {
  std::vector<SplitStrategy> out;
  for (const auto& n : names) out.push_back(strategy_from_string(n));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"distribution-shift benchmark toolkit for drug interactions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress output on stderr");

  // validate
  auto* c_validate = app.add_subcommand("validate", "check dataset files");
  CommonData v_data;
  add_data_options(c_validate, v_data, true);

  // sim
  auto* c_sim = app.add_subcommand("sim", "pairwise similarity matrix");
  std::string s_fingerprints, s_cache;
  unsigned s_workers = 0;
  c_sim->add_option("--fingerprints", s_fingerprints, "fingerprint TSV")
      ->required()
      ->check(CLI::ExistingFile);
  c_sim->add_option("--cache", s_cache, "binary cache path (reused if present)");
  c_sim->add_option("--workers", s_workers, "worker threads, 0 = all cores");

  // split
  auto* c_split = app.add_subcommand("split", "partition drugs into known/new");
  CommonData sp_data;
  add_data_options(c_split, sp_data, true);
  std::string sp_strategy, sp_out, sp_cache;
  std::uint64_t sp_seed = 42;
  double sp_fraction = 0.2, sp_tolerance = 0.05;
  std::optional<double> sp_gamma;
  std::optional<int> sp_year;
  c_split->add_option("--strategy", sp_strategy, "random|frequency|time|cluster")
      ->required()
      ->check(CLI::IsMember({"random", "frequency", "time", "cluster"}));
  c_split->add_option("--out", sp_out, "split JSON path")->required();
  c_split->add_option("--seed", sp_seed, "random seed");
  c_split->add_option("--new-fraction", sp_fraction, "share of new drugs");
  c_split->add_option("--tolerance", sp_tolerance,
                      "allowed |actual - target| / n for cluster splits");
  c_split->add_option("--gamma0", sp_gamma, "similarity ceiling for cluster");
  c_split->add_option("--threshold-year", sp_year, "cutoff for time splits");
  c_split->add_option("--cache", sp_cache, "similarity cache path");

  // tasks
  auto* c_tasks = app.add_subcommand("tasks", "assemble train/s1/s2 files");
  CommonData t_data;
  add_data_options(c_tasks, t_data, true);
  std::string t_split, t_out;
  double t_val_fraction = 0.0;
  std::uint64_t t_val_seed = 42;
  c_tasks->add_option("--split", t_split, "split JSON from the split command")
      ->required()
      ->check(CLI::ExistingFile);
  c_tasks->add_option("--out", t_out, "output directory")->required();
  c_tasks->add_option("--val-fraction", t_val_fraction,
                      "carve this share of train into validation.tsv");
  c_tasks->add_option("--val-seed", t_val_seed, "validation carve seed");

  // consistency
  auto* c_cons = app.add_subcommand("consistency",
                                    "score split schemes against approval years");
  std::string cn_approval, cn_out;
  std::vector<std::string> cn_splits;
  std::optional<int> cn_threshold;
  std::optional<int> cn_from, cn_to;
  int cn_step = 5;
  c_cons->add_option("--approval", cn_approval, "approval year TSV")
      ->required()
      ->check(CLI::ExistingFile);
  c_cons->add_option("--split", cn_splits, "name=split.json, repeatable")
      ->required()
      ->expected(-1);
  c_cons->add_option("--threshold", cn_threshold, "single threshold year");
  c_cons->add_option("--from", cn_from, "sweep start year");
  c_cons->add_option("--to", cn_to, "sweep end year, inclusive");
  c_cons->add_option("--step", cn_step, "sweep step");
  c_cons->add_option("--out", cn_out, "CSV path (default stdout)");

  // eval
  auto* c_eval = app.add_subcommand("eval", "score a prediction file");
  std::string e_mode = "multiclass", e_pred, e_gold, e_json, e_csv;
  std::string e_column_order = "htr";
  double e_threshold = 0.5;
  c_eval->add_option("--mode", e_mode, "multiclass or multilabel")
      ->check(CLI::IsMember({"multiclass", "multilabel"}));
  c_eval->add_option("--predictions", e_pred, "prediction TSV")
      ->required()
      ->check(CLI::ExistingFile);
  c_eval->add_option("--gold", e_gold, "gold triplet TSV (multiclass)")
      ->check(CLI::ExistingFile);
  c_eval->add_option("--column-order", e_column_order,
                     "gold triplet column permutation");
  c_eval->add_option("--threshold", e_threshold,
                     "multilabel decision threshold");
  c_eval->add_option("--out-json", e_json, "report JSON path");
  c_eval->add_option("--out-csv", e_csv, "report CSV path");

  // bench
  auto* c_bench = app.add_subcommand("bench", "frequency baseline benchmark");
  CommonData b_data;
  add_data_options(c_bench, b_data, true);
  std::vector<std::string> b_strategies{"cluster", "random"};
  std::vector<std::uint64_t> b_seeds{1, 2, 3};
  BenchOptions b_opts;
  std::string b_out;
  c_bench->add_option("--strategies", b_strategies, "strategies to compare")
      ->delimiter(',');
  c_bench->add_option("--seeds", b_seeds, "seeds to average over")
      ->delimiter(',');
  c_bench->add_option("--gamma0", b_opts.gamma0, "cluster similarity ceiling");
  c_bench->add_option("--new-fraction", b_opts.new_fraction, "share of new drugs");
  c_bench->add_option("--threshold-year", b_opts.threshold_year,
                      "cutoff for the time strategy");
  c_bench->add_option("--ratio", b_opts.negatives_per_positive,
                      "negatives per positive (multilabel)");
  c_bench->add_option("--threshold", b_opts.threshold,
                      "multilabel decision threshold");
  c_bench->add_option("--out", b_out, "CSV path")->required();

  // sweep
  auto* c_sweep = app.add_subcommand("sweep", "cluster benchmark over gammas");
  CommonData w_data;
  add_data_options(c_sweep, w_data, true);
  std::vector<double> w_gammas{0.9, 0.7, 0.5, 0.3};
  std::vector<std::uint64_t> w_seeds{1, 2, 3};
  BenchOptions w_opts;
  std::string w_out;
  c_sweep->add_option("--gammas", w_gammas, "gamma grid")->delimiter(',');
  c_sweep->add_option("--seeds", w_seeds, "seeds to average over")
      ->delimiter(',');
  c_sweep->add_option("--new-fraction", w_opts.new_fraction, "share of new drugs");
  c_sweep->add_option("--ratio", w_opts.negatives_per_positive,
                      "negatives per positive (multilabel)");
  c_sweep->add_option("--threshold", w_opts.threshold,
                      "multilabel decision threshold");
  c_sweep->add_option("--out", w_out, "CSV path")->required();

  // synth
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic dataset");
  SynthConfig g_cfg;
  std::string g_out;
  c_synth->add_option("--out", g_out, "output directory")->required();
  c_synth->add_option("--drugs", g_cfg.drug_count, "drug count");
  c_synth->add_option("--clusters", g_cfg.cluster_count, "centroid families");
  c_synth->add_option("--epochs", g_cfg.epoch_count, "approval epochs");
  c_synth->add_option("--width", g_cfg.width, "fingerprint bits");
  c_synth->add_option("--seed", g_cfg.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (*c_validate) {
    LoadReport report;
    const Dataset ds = load_common(v_data, &report);
    const ValidationSummary sum = validate_dataset(ds);
    std::cout << "drugs: " << sum.drug_count << "\n"
              << "relation types: " << sum.relation_count << "\n"
              << "triplets: " << sum.triplet_count << "\n"
              << "duplicates dropped: " << report.duplicate_triplets << "\n";
    if (report.foreign_approval_rows > 0)
      std::cout << "approval rows outside universe: "
                << report.foreign_approval_rows << "\n";
    if (sum.ok()) {
      std::cout << "issues: none\n";
      return 0;
    }
    for (const auto& issue : sum.issues)
      std::cout << "issue [" << issue.code << "]: " << issue.detail << "\n";
    return 2;
  }

  if (*c_sim) {
    const auto prints = load_fingerprints(s_fingerprints);
    const SimilarityMatrix m = matrix_for(prints, s_cache, s_workers, quiet);
    std::cout << "drugs: " << m.size() << "\n"
              << "width: " << m.width() << "\n"
              << "max similarity: " << format_fixed6(m.max_value()) << "\n";
    return 0;
  }

  if (*c_split) {
    const Dataset ds = load_common(sp_data);
    SplitRequest req;
    req.strategy = strategy_from_string(sp_strategy);
    req.seed = sp_seed;
    req.new_fraction = sp_fraction;
    req.fraction_tolerance = sp_tolerance;
    req.gamma0 = sp_gamma;
    req.threshold_year = sp_year;

    std::optional<SimilarityMatrix> sim;
    if (req.strategy == SplitStrategy::cluster) {
      if (ds.fingerprints.empty())
        throw Error(errc::missing_fingerprint,
                    "cluster splits need --fingerprints");
      sim = matrix_for(ds.fingerprints, sp_cache, 0, quiet);
    }
    const DrugSplit split = make_split(ds, sim ? &*sim : nullptr, req);
    write_drug_split(sp_out, split);
    std::cout << "known: " << split.known.size() << "\n"
              << "new: " << split.new_drugs.size() << "\n"
              << "excluded: " << split.excluded.size() << "\n";
    if (split.cluster_count)
      std::cout << "clusters: " << *split.cluster_count << "\n";
    if (split.achieved_gamma)
      std::cout << "achieved gamma: " << format_fixed6(*split.achieved_gamma)
                << "\n";
    std::cout << "wrote " << sp_out << "\n";
    return 0;
  }

  if (*c_tasks) {
    const Dataset ds = load_common(t_data);
    const DrugSplit split = load_drug_split(t_split);
    TaskSplit tasks = assemble_tasks(ds, split);
    std::vector<DdiTriplet> validation;
    if (t_val_fraction > 0.0) {
      auto [train, val] = carve_validation(tasks.train, t_val_fraction, t_val_seed);
      tasks.train = std::move(train);
      validation = std::move(val);
    }
    write_task_split(t_out, tasks, ds.relations, ds.mode);
    if (!validation.empty())
      write_triplets(fs::path(t_out) / "validation.tsv", validation,
                     ds.relations, ds.mode);
    std::cout << "train: " << tasks.train.size() << "\n"
              << "s1_test: " << tasks.s1_test.size() << "\n"
              << "s2_test: " << tasks.s2_test.size() << "\n"
              << "validation: " << validation.size() << "\n"
              << "dropped: " << tasks.dropped << "\n"
              << "wrote " << t_out << "\n";
    return 0;
  }

  if (*c_cons) {
    const auto years = load_approval_years(cn_approval);
    std::vector<NamedSplit> schemes;
    for (const auto& entry : cn_splits) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
        throw Error(errc::bad_argument,
                    "--split expects name=path, got '" + entry + "'");
      schemes.emplace_back(entry.substr(0, eq),
                           load_drug_split(entry.substr(eq + 1)));
    }
    std::vector<ConsistencyResult> results;
    if (cn_threshold) {
      results.push_back(consistency_index(schemes, years, *cn_threshold));
    } else if (cn_from && cn_to) {
      results = consistency_sweep(schemes, years, {*cn_from, *cn_to, cn_step});
    } else {
      throw Error(errc::bad_argument,
                  "need --threshold or --from/--to for consistency");
    }
    if (cn_out.empty()) {
      write_consistency_csv(std::cout, results);
    } else {
      auto out = open_or_die(cn_out);
      write_consistency_csv(out, results);
      std::cout << "wrote " << cn_out << "\n";
    }
    return 0;
  }

  if (*c_eval) {
    const Mode mode = mode_from_string(e_mode);
    EvalReport report;
    std::vector<std::string> relations;
    if (mode == Mode::multiclass) {
      if (e_gold.empty())
        throw Error(errc::bad_argument, "multiclass eval needs --gold");
      TripletFile gold = load_triplets(e_gold, mode, e_column_order);
      relations = gold.relations;
      const auto preds = load_predictions(e_pred, mode, relations);
      report = multiclass_report(preds, gold.triplets);
    } else {
      const auto preds = load_predictions(e_pred, mode, relations);
      report = multilabel_report(preds, e_threshold);
    }
    if (!e_json.empty()) {
      auto out = open_or_die(e_json);
      out << report_to_json(report, relations);
    }
    if (!e_csv.empty()) {
      auto out = open_or_die(e_csv);
      write_report_csv(out, report, relations);
    }
    for (const auto& [metric, value] : report.aggregate)
      std::cout << metric << ": " << format_fixed6(value) << "\n";
    for (const auto& skip : report.skipped)
      std::cout << "skipped type "
                << (static_cast<std::size_t>(skip.relation) < relations.size()
                        ? relations[static_cast<std::size_t>(skip.relation)]
                        : std::to_string(skip.relation))
                << ": " << skip.reason << "\n";
    return 0;
  }

  if (*c_bench) {
    const Dataset ds = load_common(b_data);
    b_opts.seeds = b_seeds;
    const auto rows = run_benchmark(ds, parse_strategies(b_strategies), b_opts);
    {
      auto out = open_or_die(b_out);
      write_bench_csv(out, rows);
    }
    for (const auto& r : rows)
      if (r.seed == "mean")
        std::cout << r.strategy << " " << r.task << " " << r.metric << ": "
                  << format_fixed6(r.value) << "\n";
    std::cout << "wrote " << b_out << "\n";
    return 0;
  }

  if (*c_sweep) {
    const Dataset ds = load_common(w_data);
    w_opts.seeds = w_seeds;
    const SweepResult sweep = gamma_sweep(ds, w_gammas, w_opts);
    {
      auto out = open_or_die(w_out);
      write_sweep_csv(out, sweep);
    }
    for (const auto& s : sweep.skipped)
      std::cerr << "skipped gamma " << format_fixed6(s.gamma0) << ": "
                << s.reason << "\n";
    std::cout << "rows: " << sweep.rows.size() << "\n"
              << "wrote " << w_out << "\n";
    return 0;
  }

  if (*c_synth) {
    const Dataset ds = generate_synthetic(g_cfg);
    fs::create_directories(g_out);
    write_triplets(fs::path(g_out) / "triplets.tsv", ds.triplets, ds.relations,
                   ds.mode);
    write_fingerprints(fs::path(g_out) / "fingerprints.tsv", ds.fingerprints);
    write_approval_years(fs::path(g_out) / "approval.tsv", ds.approval_years);
    std::cout << "drugs: " << ds.drugs.size() << "\n"
              << "relation types: " << ds.relations.size() << "\n"
              << "triplets: " << ds.triplets.size() << "\n"
              << "wrote " << g_out << "\n";
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    if (e.code() == errc::unsatisfiable_fraction ||
        e.code() == errc::degenerate_split)
      return 3;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
