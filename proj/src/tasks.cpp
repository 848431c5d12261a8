#include "ddishift/tasks.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "ddishift/rng.hpp"
#include "ddishift/split.hpp"

namespace ddishift {

TaskSplit assemble_tasks(const Dataset& ds, const DrugSplit& split) {
  TaskSplit out;
  out.drug_split = split;

  auto side = [&split](const DrugId& id) -> int {
    // 0 known, 1 new, 2 excluded
    if (split.is_known(id)) return 0;
    if (split.is_new(id)) return 1;
    if (split.is_excluded(id)) return 2;
    throw Error(errc::unknown_drug,
                "drug '" + id + "' is not covered by the split");
  };

  for (const auto& t : ds.triplets) {
    const int h = side(t.head);
    const int l = side(t.tail);
    if (h == 2 || l == 2) {
      ++out.dropped;
      continue;
    }
    const int new_ends = h + l;
    if (new_ends == 0)
      out.train.push_back(t);
    else if (new_ends == 1)
      out.s1_test.push_back(t);
    else
      out.s2_test.push_back(t);
  }
  if (out.train.empty())
    throw Error(errc::empty_train, "no triplet has both endpoints known");
  return out;
}

std::pair<std::vector<DdiTriplet>, std::vector<DdiTriplet>> carve_validation(
    const std::vector<DdiTriplet>& train, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw Error(errc::bad_argument,
                "validation fraction must lie strictly between 0 and 1");
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t take =
      round_half_even(fraction * static_cast<double>(train.size()));
  std::vector<char> to_val(train.size(), 0);
  for (std::size_t i = 0; i < take; ++i) to_val[order[i]] = 1;

  std::pair<std::vector<DdiTriplet>, std::vector<DdiTriplet>> out;
  for (std::size_t i = 0; i < train.size(); ++i)
    (to_val[i] ? out.second : out.first).push_back(train[i]);
  return out;  // both halves keep the original triplet order
}

std::vector<DdiTriplet> sample_negatives(const Dataset& ds,
                                         const std::vector<DdiTriplet>& positives,
                                         std::size_t per_positive,
                                         std::uint64_t seed,
                                         const DrugSplit* split) {
  // every positive of the dataset blocks a collision, not just the batch,
  // and a pair blocks in both orientations
  std::set<std::tuple<DrugId, DrugId, RelationId>> blocked;
  for (const auto& t : ds.triplets) {
    if (t.label && *t.label == 0) continue;
    blocked.emplace(t.head, t.tail, t.relation);
    blocked.emplace(t.tail, t.head, t.relation);
  }

  std::vector<DrugId> known_pool, new_pool;
  if (split) {
    known_pool = split->known;
    new_pool = split->new_drugs;
  }
  const std::vector<DrugId>& all_pool = ds.drugs;
  if (all_pool.empty())
    throw Error(errc::bad_argument, "dataset has no drugs to sample from");

  auto pool_for = [&](const DrugId& original) -> const std::vector<DrugId>& {
    if (split && split->is_known(original) && !known_pool.empty())
      return known_pool;
    if (split && split->is_new(original) && !new_pool.empty()) return new_pool;
    return all_pool;
  };

  Rng rng(seed);
  std::vector<DdiTriplet> negatives;
  negatives.reserve(positives.size() * per_positive);
  constexpr int kMaxAttempts = 1000;

  for (const auto& pos : positives) {
    for (std::size_t k = 0; k < per_positive; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
        const bool corrupt_head = rng.below(2) == 0;
        const DrugId& original = corrupt_head ? pos.head : pos.tail;
        const auto& pool = pool_for(original);
        const DrugId& candidate = pool[rng.below(pool.size())];
        DdiTriplet neg = pos;
        (corrupt_head ? neg.head : neg.tail) = candidate;
        neg.label = 0;
        if (neg.head == neg.tail) continue;
        if (blocked.count({neg.head, neg.tail, neg.relation})) continue;
        negatives.push_back(std::move(neg));
        placed = true;
      }
      if (!placed)
        throw Error(errc::sampling_exhausted,
                    "could not corrupt " + pos.head + "/" + pos.tail +
                        " after " + std::to_string(kMaxAttempts) + " draws");
    }
  }
  return negatives;
}

std::size_t DatasetStats::types_within(std::size_t lo, std::size_t hi) const {
  std::size_t n = 0;
  for (const auto& [rel, count] : relation_frequency)
    if (count >= lo && count <= hi) ++n;
  return n;
}

DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats st;
  st.drug_count = ds.drugs.size();
  st.vocabulary_size = ds.relations.size();
  st.triplet_count = ds.triplets.size();
  for (const auto& t : ds.triplets) ++st.relation_frequency[t.relation];
  st.relation_count = st.relation_frequency.size();
  return st;
}

Dataset filter_type_frequency(const Dataset& ds, std::size_t lo,
                              std::size_t hi) {
  const DatasetStats st = dataset_stats(ds);
  Dataset out;
  out.mode = ds.mode;
  out.relations = ds.relations;  // ids stay stable

  std::set<DrugId> survivors;
  for (const auto& t : ds.triplets) {
    const std::size_t f = st.relation_frequency.at(t.relation);
    if (f < lo || f > hi) continue;
    out.triplets.push_back(t);
    survivors.insert(t.head);
    survivors.insert(t.tail);
  }
  out.drugs.assign(survivors.begin(), survivors.end());
  for (const auto& d : out.drugs) {
    if (auto it = ds.fingerprints.find(d); it != ds.fingerprints.end())
      out.fingerprints.emplace(*it);
    if (auto it = ds.approval_years.find(d); it != ds.approval_years.end())
      out.approval_years.emplace(*it);
  }
  return out;
}

}  // namespace ddishift
