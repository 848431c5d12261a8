#include "ddishift/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "ddishift/dataio.hpp"

namespace ddishift {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a == 0 || a != b)
    throw Error(errc::length_mismatch,
                "need equal nonempty lists, got " + std::to_string(a) +
                    " and " + std::to_string(b));
}

void check_binary_labels(const std::vector<int>& labels) {
  for (int l : labels)
    if (l != 0 && l != 1)
      throw Error(errc::bad_label,
                  "binary label must be 0 or 1, got " + std::to_string(l));
}

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

PRF prf_from_counts(double tp, double fp, double fn) {
  PRF r;
  r.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

// Scores only classes that carry gold mass; pred-only classes still feed
// false positives into the classes they were predicted against.
std::map<RelationId, PRF> per_class_prf(const std::vector<RelationId>& gold,
                                        const std::vector<RelationId>& pred) {
  std::map<RelationId, double> tp, fp, fn;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == pred[i]) {
      ++tp[gold[i]];
    } else {
      ++fn[gold[i]];
      ++fp[pred[i]];
    }
  }
  std::map<RelationId, PRF> out;
  const std::set<RelationId> gold_classes(gold.begin(), gold.end());
  for (RelationId c : gold_classes) {
    auto at = [c](const std::map<RelationId, double>& m) {
      const auto it = m.find(c);
      return it == m.end() ? 0.0 : it->second;
    };
    out[c] = prf_from_counts(at(tp), at(fp), at(fn));
  }
  return out;
}

}  // namespace

double macro_f1(const std::vector<RelationId>& gold,
                const std::vector<RelationId>& pred) {
  check_lengths(gold.size(), pred.size());
  const auto per_class = per_class_prf(gold, pred);
  double sum = 0.0;
  for (const auto& [c, r] : per_class) sum += r.f1;
  return sum / static_cast<double>(per_class.size());
}

double accuracy(const std::vector<RelationId>& gold,
                const std::vector<RelationId>& pred) {
  check_lengths(gold.size(), pred.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i)
    if (gold[i] == pred[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double cohen_kappa(const std::vector<RelationId>& gold,
                   const std::vector<RelationId>& pred) {
  check_lengths(gold.size(), pred.size());
  const double n = static_cast<double>(gold.size());
  std::map<RelationId, double> pg, pp;
  for (RelationId c : gold) ++pg[c];
  for (RelationId c : pred) ++pp[c];
  double chance = 0.0;
  for (const auto& [c, count] : pg) {
    const auto it = pp.find(c);
    if (it != pp.end()) chance += (count / n) * (it->second / n);
  }
  if (chance >= 1.0) return 0.0;  // degenerate marginals, agreement is forced
  return (accuracy(gold, pred) - chance) / (1.0 - chance);
}

double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels) {
  check_lengths(scores.size(), labels.size());
  check_binary_labels(labels);
  const auto pos =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0)
    throw Error(errc::single_class, "need both a positive and a negative");

  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&scores](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // midranks over tie groups, then the Mann-Whitney statistic
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (labels[idx[k]] == 1) rank_sum_pos += midrank;
    i = j;
  }
  const double p = static_cast<double>(pos);
  const double u = rank_sum_pos - p * (p + 1) / 2.0;
  return u / (p * static_cast<double>(neg));
}

double pr_auc(const std::vector<double>& scores,
              const std::vector<int>& labels) {
  check_lengths(scores.size(), labels.size());
  check_binary_labels(labels);
  const auto pos =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (pos == 0) throw Error(errc::no_positives, "no positive labels");

  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&scores](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  // average precision: equal scores form one block, precision measured
  // after the whole block so intra-tie order cannot matter
  double area = 0.0, tp = 0.0, fp = 0.0, prev_recall = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[idx[k]] == 1)
        ++tp;
      else
        ++fp;
    }
    const double recall = tp / static_cast<double>(pos);
    const double precision = tp / (tp + fp);
    area += precision * (recall - prev_recall);
    prev_recall = recall;
    i = j;
  }
  return area;
}

EvalReport multilabel_report(const std::vector<PredictionRecord>& records,
                             double threshold) {
  EvalReport report;
  report.mode = Mode::multilabel;

  std::map<RelationId, std::pair<std::vector<double>, std::vector<int>>> by_type;
  for (const auto& rec : records) {
    if (!rec.score)
      throw Error(errc::bad_score, "multilabel record without score");
    if (!rec.gold_label || (*rec.gold_label != 0 && *rec.gold_label != 1))
      throw Error(errc::bad_label, "multilabel record without 0/1 gold label");
    auto& [scores, labels] = by_type[rec.relation];
    scores.push_back(*rec.score);
    labels.push_back(*rec.gold_label);
  }
  if (by_type.empty())
    throw Error(errc::length_mismatch, "no prediction records");

  double sum_roc = 0.0, sum_pr = 0.0, sum_f1 = 0.0;
  std::size_t evaluated = 0;
  for (const auto& [rel, data] : by_type) {
    const auto& [scores, labels] = data;
    report.support[rel] = labels.size();
    const auto pos =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (pos == 0) {
      report.skipped.push_back({rel, "no-positives"});
      continue;
    }
    if (pos == labels.size()) {
      report.skipped.push_back({rel, "no-negatives"});
      continue;
    }
    const double roc = roc_auc(scores, labels);
    const double pr = pr_auc(scores, labels);
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const bool hit = scores[i] >= threshold;  // at-threshold counts positive
      if (hit && labels[i] == 1) ++tp;
      if (hit && labels[i] == 0) ++fp;
      if (!hit && labels[i] == 1) ++fn;
    }
    const PRF prf = prf_from_counts(tp, fp, fn);
    report.per_type[rel] = {{"roc_auc", roc}, {"pr_auc", pr}, {"f1", prf.f1}};
    sum_roc += roc;
    sum_pr += pr;
    sum_f1 += prf.f1;
    ++evaluated;
  }
  if (evaluated > 0) {
    const double n = static_cast<double>(evaluated);
    report.aggregate = {{"roc_auc", sum_roc / n},
                        {"pr_auc", sum_pr / n},
                        {"f1", sum_f1 / n},
                        {"evaluated_types", n}};
  }
  return report;
}

EvalReport multiclass_report(const std::vector<PredictionRecord>& predictions,
                             const std::vector<DdiTriplet>& gold) {
  if (gold.empty())
    throw Error(errc::length_mismatch, "no gold triplets to score");

  std::map<std::pair<DrugId, DrugId>, RelationId> by_pair;
  for (const auto& rec : predictions) {
    if (!by_pair.emplace(std::make_pair(rec.head, rec.tail), rec.relation)
             .second)
      throw Error(errc::duplicate_prediction,
                  "two predictions for pair " + rec.head + "/" + rec.tail);
  }

  std::vector<RelationId> g, p;
  g.reserve(gold.size());
  p.reserve(gold.size());
  for (const auto& t : gold) {
    const auto it = by_pair.find({t.head, t.tail});
    if (it == by_pair.end())
      throw Error(errc::missing_prediction,
                  "no prediction for pair " + t.head + "/" + t.tail);
    g.push_back(t.relation);
    p.push_back(it->second);
  }

  EvalReport report;
  report.mode = Mode::multiclass;
  report.aggregate = {{"macro_f1", macro_f1(g, p)},
                      {"accuracy", accuracy(g, p)},
                      {"kappa", cohen_kappa(g, p)}};
  for (const auto& [c, prf] : per_class_prf(g, p)) {
    report.per_type[c] = {{"precision", prf.precision},
                          {"recall", prf.recall},
                          {"f1", prf.f1}};
    report.support[c] =
        static_cast<std::size_t>(std::count(g.begin(), g.end(), c));
  }
  return report;
}

namespace {
std::string type_name(RelationId rel, const std::vector<std::string>& relations) {
  const auto i = static_cast<std::size_t>(rel);
  return i < relations.size() ? relations[i] : std::to_string(rel);
}
}  // namespace

std::string report_to_json(const EvalReport& report,
                           const std::vector<std::string>& relations) {
  nlohmann::json j;
  j["mode"] = to_string(report.mode);
  j["aggregate"] = report.aggregate;
  j["per_type"] = nlohmann::json::object();
  for (const auto& [rel, metrics] : report.per_type)
    j["per_type"][type_name(rel, relations)] = metrics;
  j["support"] = nlohmann::json::object();
  for (const auto& [rel, n] : report.support)
    j["support"][type_name(rel, relations)] = n;
  j["skipped"] = nlohmann::json::array();
  for (const auto& skip : report.skipped)
    j["skipped"].push_back({{"type", type_name(skip.relation, relations)},
                            {"reason", skip.reason}});
  return j.dump(2) + "\n";
}

void write_report_csv(std::ostream& out, const EvalReport& report,
                      const std::vector<std::string>& relations) {
  out << "scope,type,metric,value\n";
  for (const auto& [metric, value] : report.aggregate)
    out << "aggregate,," << metric << ',' << format_fixed6(value) << '\n';
  for (const auto& [rel, metrics] : report.per_type)
    for (const auto& [metric, value] : metrics)
      out << "type," << type_name(rel, relations) << ',' << metric << ','
          << format_fixed6(value) << '\n';
}

}  // namespace ddishift
