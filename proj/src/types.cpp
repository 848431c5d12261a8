#include "ddishift/types.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace ddishift {

const char* to_string(Mode mode) {
  return mode == Mode::multiclass ? "multiclass" : "multilabel";
}

Mode mode_from_string(const std::string& text) {
  if (text == "multiclass") return Mode::multiclass;
  if (text == "multilabel") return Mode::multilabel;
  throw Error(errc::bad_argument, "unknown mode '" + text + "'");
}

const char* to_string(SplitStrategy s) {
  switch (s) {
    case SplitStrategy::random: return "random";
    case SplitStrategy::frequency: return "frequency";
    case SplitStrategy::time: return "time";
    case SplitStrategy::cluster: return "cluster";
  }
  return "random";
}

SplitStrategy strategy_from_string(const std::string& text) {
  if (text == "random") return SplitStrategy::random;
  if (text == "frequency") return SplitStrategy::frequency;
  if (text == "time") return SplitStrategy::time;
  if (text == "cluster") return SplitStrategy::cluster;
  throw Error(errc::bad_argument, "unknown split strategy '" + text + "'");
}

namespace {
bool contains_sorted(const std::vector<DrugId>& v, const DrugId& id) {
  return std::binary_search(v.begin(), v.end(), id);
}
}  // namespace

bool Dataset::has_drug(const DrugId& id) const {
  return contains_sorted(drugs, id);
}

bool DrugSplit::is_known(const DrugId& id) const {
  return contains_sorted(known, id);
}
bool DrugSplit::is_new(const DrugId& id) const {
  return contains_sorted(new_drugs, id);
}
bool DrugSplit::is_excluded(const DrugId& id) const {
  return contains_sorted(excluded, id);
}

ValidationSummary validate_dataset(const Dataset& ds) {
  ValidationSummary out;
  out.drug_count = ds.drugs.size();
  out.triplet_count = ds.triplets.size();

  auto issue = [&out](const char* code, std::string detail) {
    out.issues.push_back({code, std::move(detail)});
  };

  if (!std::is_sorted(ds.drugs.begin(), ds.drugs.end()))
    issue(errc::bad_argument, "drug list is not sorted");
  if (std::adjacent_find(ds.drugs.begin(), ds.drugs.end()) != ds.drugs.end())
    issue(errc::duplicate_drug, "drug list has duplicates");

  const auto vocab = static_cast<RelationId>(ds.relations.size());
  std::set<RelationId> used;
  std::set<std::tuple<DrugId, DrugId, RelationId, int>> seen;
  for (const auto& t : ds.triplets) {
    used.insert(t.relation);
    if (!ds.has_drug(t.head))
      issue(errc::unknown_drug, "triplet head '" + t.head + "' not in universe");
    if (!ds.has_drug(t.tail))
      issue(errc::unknown_drug, "triplet tail '" + t.tail + "' not in universe");
    if (t.head == t.tail)
      issue(errc::self_loop, "self interaction on '" + t.head + "'");
    if (t.relation < 0 || (vocab > 0 && t.relation >= vocab))
      issue(errc::bad_relation,
            "relation id " + std::to_string(t.relation) + " outside vocabulary");
    if (ds.mode == Mode::multilabel) {
      if (!t.label || (*t.label != 0 && *t.label != 1))
        issue(errc::bad_label, "multilabel triplet without 0/1 label");
    } else if (t.label) {
      issue(errc::bad_label, "multiclass triplet carries a label");
    }
    auto key = std::make_tuple(t.head, t.tail, t.relation, t.label.value_or(-1));
    if (!seen.insert(key).second)
      issue(errc::duplicate_triplet,
            "duplicate triplet " + t.head + "/" + t.tail);
  }
  out.relation_count = used.size();

  for (const auto& [id, fp] : ds.fingerprints) {
    if (!ds.has_drug(id))
      issue(errc::unknown_drug, "fingerprint for unknown drug '" + id + "'");
    if (!ds.fingerprints.empty() &&
        fp.width() != ds.fingerprints.begin()->second.width())
      issue(errc::width_mismatch, "fingerprint width differs for '" + id + "'");
  }

  for (const auto& [id, year] : ds.approval_years) {
    if (!ds.has_drug(id))
      issue(errc::unknown_drug, "approval year for unknown drug '" + id + "'");
    if (year < 1800 || year > 2200)
      issue(errc::bad_year,
            "implausible approval year " + std::to_string(year) + " for '" + id + "'");
  }

  return out;
}

}  // namespace ddishift
