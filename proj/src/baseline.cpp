#include "ddishift/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ddishift/dataio.hpp"
#include "ddishift/metrics.hpp"
#include "ddishift/tasks.hpp"

namespace ddishift {

namespace {

// smallest id among the most frequent entries
RelationId argmax(const std::map<RelationId, std::uint64_t>& hist) {
  RelationId best = hist.begin()->first;
  std::uint64_t best_count = hist.begin()->second;
  for (const auto& [rel, count] : hist)
    if (count > best_count) {
      best = rel;
      best_count = count;
    }
  return best;
}

}  // namespace

FrequencyModel FrequencyModel::fit(const std::vector<DdiTriplet>& train) {
  FrequencyModel m;
  for (const auto& t : train) {
    if (t.label && *t.label == 0) continue;  // explicit negatives are not evidence
    ++m.pair_table_[{t.head, t.tail}][t.relation];
    ++m.head_table_[t.head][t.relation];
    ++m.global_[t.relation];
  }
  if (m.global_.empty())
    throw Error(errc::empty_train, "no positive train triplets to fit on");
  m.global_majority_ = argmax(m.global_);
  return m;
}

DrugId FrequencyModel::resolve(const DrugId& drug, const SimilarityMatrix& sim,
                               const DrugSplit& split) const {
  if (split.is_known(drug) || split.known.empty()) return drug;
  // unseen endpoint: stand in its most similar known drug
  const std::size_t d = sim.index_of(drug);
  if (sim.exact()) {
    DrugId best = split.known.front();
    PairCounts best_c = sim.counts(d, sim.index_of(best));
    for (const auto& k : split.known) {
      const PairCounts c = sim.counts(d, sim.index_of(k));
      if (compare_ratios(c.intersection, c.union_, best_c.intersection,
                         best_c.union_) > 0) {
        best = k;
        best_c = c;
      }
    }
    return best;
  }
  DrugId best = split.known.front();
  float best_v = sim.value(d, sim.index_of(best));
  for (const auto& k : split.known) {
    const float v = sim.value(d, sim.index_of(k));
    if (v > best_v) {
      best = k;
      best_v = v;
    }
  }
  return best;
}

const FrequencyModel::Hist* FrequencyModel::lookup(const DrugId& head,
                                                   const DrugId& tail) const {
  if (const auto it = pair_table_.find({head, tail}); it != pair_table_.end())
    return &it->second;
  if (const auto it = head_table_.find(head); it != head_table_.end())
    return &it->second;
  return nullptr;
}

RelationId FrequencyModel::predict(const DrugId& head, const DrugId& tail,
                                   const SimilarityMatrix& sim,
                                   const DrugSplit& split) const {
  const DrugId h = resolve(head, sim, split);
  const DrugId t = resolve(tail, sim, split);
  if (const Hist* hist = lookup(h, t)) return argmax(*hist);
  return global_majority_;
}

double FrequencyModel::score(const DrugId& head, const DrugId& tail,
                             RelationId relation, const SimilarityMatrix& sim,
                             const DrugSplit& split) const {
  const DrugId h = resolve(head, sim, split);
  const DrugId t = resolve(tail, sim, split);
  const Hist* hist = lookup(h, t);
  if (!hist) hist = &global_;
  const auto it = hist->find(relation);
  if (it == hist->end()) return 0.0;
  std::uint64_t total = 0;
  for (const auto& [rel, count] : *hist) total += count;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

namespace {

std::map<std::string, double> score_task_multiclass(
    const FrequencyModel& model, const SimilarityMatrix& sim,
    const DrugSplit& split, const std::vector<DdiTriplet>& test) {
  std::set<std::pair<DrugId, DrugId>> pairs;
  for (const auto& t : test) pairs.emplace(t.head, t.tail);
  std::vector<PredictionRecord> preds;
  preds.reserve(pairs.size());
  for (const auto& [h, t] : pairs)
    preds.push_back({h, t, model.predict(h, t, sim, split), {}, {}});
  const EvalReport rep = multiclass_report(preds, test);
  return rep.aggregate;
}

std::map<std::string, double> score_task_multilabel(
    const Dataset& ds, const FrequencyModel& model, const SimilarityMatrix& sim,
    const DrugSplit& split, const std::vector<DdiTriplet>& test,
    const BenchOptions& opts, std::uint64_t seed) {
  std::vector<DdiTriplet> positives;
  std::vector<PredictionRecord> records;
  for (const auto& t : test) {
    const int gold = t.label.value_or(1);
    records.push_back({t.head, t.tail, t.relation,
                       model.score(t.head, t.tail, t.relation, sim, split),
                       gold});
    if (gold == 1) positives.push_back(t);
  }
  for (const auto& n : sample_negatives(ds, positives,
                                        opts.negatives_per_positive, seed,
                                        &split))
    records.push_back({n.head, n.tail, n.relation,
                       model.score(n.head, n.tail, n.relation, sim, split), 0});
  EvalReport rep = multilabel_report(records, opts.threshold);
  rep.aggregate.erase("evaluated_types");
  return rep.aggregate;
}

}  // namespace

std::vector<BenchRow> run_benchmark(const Dataset& ds,
                                    const std::vector<SplitStrategy>& strategies,
                                    const BenchOptions& opts) {
  if (strategies.empty())
    throw Error(errc::bad_argument, "no split strategies given");
  if (opts.seeds.empty()) throw Error(errc::bad_argument, "no seeds given");

  const SimilarityMatrix sim = pairwise_similarity(ds.fingerprints);
  std::vector<BenchRow> rows;

  for (const SplitStrategy strategy : strategies) {
    // (task, metric) -> per-seed values, in first-seen order
    std::vector<std::pair<std::string, std::string>> cell_order;
    std::map<std::pair<std::string, std::string>, std::vector<double>> cells;

    for (const std::uint64_t seed : opts.seeds) {
      SplitRequest req;
      req.strategy = strategy;
      req.seed = seed;
      req.new_fraction = opts.new_fraction;
      req.gamma0 = opts.gamma0;
      req.threshold_year = opts.threshold_year;
      const DrugSplit split = make_split(ds, &sim, req);
      const TaskSplit tasks = assemble_tasks(ds, split);
      const FrequencyModel model = FrequencyModel::fit(tasks.train);

      const std::pair<const char*, const std::vector<DdiTriplet>*> targets[] = {
          {"s1", &tasks.s1_test}, {"s2", &tasks.s2_test}};
      for (const auto& [task_name, test] : targets) {
        if (test->empty()) continue;  // nothing to score, no row
        const auto metrics =
            ds.mode == Mode::multiclass
                ? score_task_multiclass(model, sim, split, *test)
                : score_task_multilabel(ds, model, sim, split, *test, opts,
                                        seed);
        for (const auto& [metric, value] : metrics) {
          rows.push_back({to_string(strategy), std::to_string(seed), task_name,
                          metric, value});
          const auto key = std::make_pair(std::string(task_name), metric);
          if (!cells.count(key)) cell_order.push_back(key);
          cells[key].push_back(value);
        }
      }
    }

    for (const char* agg : {"mean", "stddev"}) {
      for (const auto& key : cell_order) {
        const auto& values = cells[key];
        const double n = static_cast<double>(values.size());
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= n;
        double out = mean;
        if (std::string(agg) == "stddev") {
          double var = 0.0;
          for (double v : values) var += (v - mean) * (v - mean);
          out = std::sqrt(var / n);
        }
        rows.push_back({to_string(strategy), agg, key.first, key.second, out});
      }
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "strategy,seed,task,metric,value\n";
  for (const auto& r : rows)
    out << r.strategy << ',' << r.seed << ',' << r.task << ',' << r.metric
        << ',' << format_fixed6(r.value) << '\n';
}

SweepResult gamma_sweep(const Dataset& ds, const std::vector<double>& gammas,
                        const BenchOptions& opts) {
  SweepResult result;
  for (const double gamma : gammas) {
    BenchOptions local = opts;
    local.gamma0 = gamma;
    std::vector<BenchRow> rows;
    try {
      rows = run_benchmark(ds, {SplitStrategy::cluster}, local);
    } catch (const Error& e) {
      if (e.code() == errc::unsatisfiable_fraction) {
        result.skipped.push_back({gamma, e.code()});
        continue;
      }
      throw;
    }
    // stitch mean and stddev rows into one sweep row per (task, metric)
    std::map<std::pair<std::string, std::string>, SweepRow> by_cell;
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& r : rows) {
      if (r.seed != "mean" && r.seed != "stddev") continue;
      const auto key = std::make_pair(r.task, r.metric);
      if (!by_cell.count(key)) {
        by_cell[key] = {gamma, r.task, r.metric, 0.0, 0.0};
        order.push_back(key);
      }
      (r.seed == "mean" ? by_cell[key].mean : by_cell[key].stddev) = r.value;
    }
    for (const auto& key : order) result.rows.push_back(by_cell[key]);
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "gamma,task,metric,mean,stddev\n";
  for (const auto& r : sweep.rows)
    out << format_fixed6(r.gamma0) << ',' << r.task << ',' << r.metric << ','
        << format_fixed6(r.mean) << ',' << format_fixed6(r.stddev) << '\n';
  for (const auto& s : sweep.skipped)
    out << "# skipped gamma=" << format_fixed6(s.gamma0)
        << " reason=" << s.reason << '\n';
}

}  // namespace ddishift
