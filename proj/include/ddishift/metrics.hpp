#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ddishift/types.hpp"

namespace ddishift {

// Label-list metrics. gold and pred must be equal-length and nonempty
// (length-mismatch otherwise).

// Unweighted mean of per-class F1 over the classes present in gold.
// A class with precision + recall == 0 contributes F1 = 0.
double macro_f1(const std::vector<RelationId>& gold,
                const std::vector<RelationId>& pred);

double accuracy(const std::vector<RelationId>& gold,
                const std::vector<RelationId>& pred);

// Cohen's kappa (observed - chance) / (1 - chance) with marginal-product
// chance agreement; degenerate chance == 1 returns 0.
double cohen_kappa(const std::vector<RelationId>& gold,
                   const std::vector<RelationId>& pred);

// Score-based binary metrics. labels are 0/1, scores same length
// (length-mismatch otherwise).

// Probability a positive outranks a negative, ties counted half
// (midrank form). single-class when only one label value occurs.
double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels);

// Area under the precision-recall steps: sum of precision-after-block times
// recall gained, equal scores handled as one block. no-positives when no
// label is 1.
double pr_auc(const std::vector<double>& scores,
              const std::vector<int>& labels);

struct TypeSkip {
  RelationId relation = 0;
  std::string reason;  // "no-positives" or "no-negatives"
};

struct EvalReport {
  Mode mode = Mode::multiclass;
  std::map<std::string, double> aggregate;
  std::map<RelationId, std::map<std::string, double>> per_type;
  std::map<RelationId, std::size_t> support;  // records per type
  std::vector<TypeSkip> skipped;
};

// Per-type ROC-AUC, PR-AUC, F1 at the score threshold, plus unweighted means
// over the evaluable types. Types with one-class gold are skipped and listed.
EvalReport multilabel_report(const std::vector<PredictionRecord>& records,
                             double threshold = 0.5);

// Matches predictions to gold pairs (head, tail); every gold pair needs
// exactly one prediction (missing-prediction / duplicate-prediction).
// Predictions for pairs absent from gold are ignored. Reports macro-F1,
// accuracy and kappa, plus per-type precision/recall/F1.
EvalReport multiclass_report(const std::vector<PredictionRecord>& predictions,
                             const std::vector<DdiTriplet>& gold);

// JSON text of a report (stable key order). CSV rows:
// scope,type,metric,value with aggregate rows first.
std::string report_to_json(const EvalReport& report,
                           const std::vector<std::string>& relations);
void write_report_csv(std::ostream& out, const EvalReport& report,
                      const std::vector<std::string>& relations);

}  // namespace ddishift
