#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ddishift/similarity.hpp"
#include "ddishift/split.hpp"
#include "ddishift/types.hpp"

namespace ddishift {

// Frequency lookup model. Prediction for a pair falls through three tables:
// exact ordered pair, then per-head-drug majority, then the global majority.
// Ties inside a table break toward the smaller relation id.
class FrequencyModel {
 public:
  static FrequencyModel fit(const std::vector<DdiTriplet>& train);

  // Most frequent relation for the ordered pair, with unseen drugs replaced
  // by their most similar known drug first (ties toward the smaller id).
  RelationId predict(const DrugId& head, const DrugId& tail,
                     const SimilarityMatrix& sim,
                     const DrugSplit& split) const;

  // Multilabel score: observed frequency share of `relation` among the
  // resolved table entry, 0 when the relation was never seen there.
  double score(const DrugId& head, const DrugId& tail, RelationId relation,
               const SimilarityMatrix& sim, const DrugSplit& split) const;

  RelationId global_majority() const noexcept { return global_majority_; }

 private:
  using Hist = std::map<RelationId, std::uint64_t>;

  const Hist* lookup(const DrugId& head, const DrugId& tail) const;
  DrugId resolve(const DrugId& drug, const SimilarityMatrix& sim,
                 const DrugSplit& split) const;

  std::map<std::pair<DrugId, DrugId>, Hist> pair_table_;
  std::map<DrugId, Hist> head_table_;
  Hist global_;
  RelationId global_majority_ = 0;
};

struct BenchRow {
  std::string strategy;
  std::string seed;  // seed value, or "mean"/"stddev" aggregate rows
  std::string task;  // "s1" or "s2"
  std::string metric;
  double value = 0.0;
};

struct BenchOptions {
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  double new_fraction = 0.2;
  double gamma0 = 0.5;          // cluster strategy
  int threshold_year = 2000;    // time strategy
  std::size_t negatives_per_positive = 1;  // multilabel mode
  double threshold = 0.5;                  // multilabel decision threshold
};

// Runs the frequency baseline over every (strategy, seed) cell: split,
// assemble tasks, fit on train, score s1 and s2. Multiclass datasets report
// macro_f1/accuracy/kappa through the pair-matched report; multilabel
// datasets sample negatives and report roc_auc/pr_auc/f1 means. Per-seed
// rows come first, then mean and population-stddev rows per strategy.
std::vector<BenchRow> run_benchmark(const Dataset& ds,
                                    const std::vector<SplitStrategy>& strategies,
                                    const BenchOptions& opts);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

struct SweepRow {
  double gamma0 = 0.0;
  std::string task;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
};

struct SweepSkip {
  double gamma0 = 0.0;
  std::string reason;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepSkip> skipped;  // gammas with no satisfiable split
};

// Cluster-strategy benchmark across a gamma grid, aggregated over seeds.
// A gamma where any seed raises unsatisfiable-fraction is skipped whole and
// recorded; partial means over surviving seeds would not be comparable.
SweepResult gamma_sweep(const Dataset& ds, const std::vector<double>& gammas,
                        const BenchOptions& opts);

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

}  // namespace ddishift
