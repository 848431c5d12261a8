#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "ddishift/tasks.hpp"
#include "oracles.hpp"

using namespace ddishift;

namespace {

DrugSplit simple_split(std::vector<DrugId> known, std::vector<DrugId> fresh,
                       std::vector<DrugId> excluded = {}) {
  DrugSplit s;
  s.known = std::move(known);
  s.new_drugs = std::move(fresh);
  s.excluded = std::move(excluded);
  std::sort(s.known.begin(), s.known.end());
  std::sort(s.new_drugs.begin(), s.new_drugs.end());
  std::sort(s.excluded.begin(), s.excluded.end());
  return s;
}

}  // namespace

TEST_CASE("triplets route by how many endpoints are new") {
  const Dataset ds = oracle::make_dataset(
      Mode::multiclass, {"r"},
      {{"a", "b", 0, {}}, {"a", "c", 0, {}}, {"c", "d", 0, {}}});
  const TaskSplit tasks = assemble_tasks(ds, simple_split({"a", "b"}, {"c", "d"}));
  CHECK(tasks.train == std::vector<DdiTriplet>{{"a", "b", 0, {}}});
  CHECK(tasks.s1_test == std::vector<DdiTriplet>{{"a", "c", 0, {}}});
  CHECK(tasks.s2_test == std::vector<DdiTriplet>{{"c", "d", 0, {}}});
  CHECK(tasks.dropped == 0);
}

TEST_CASE("excluded endpoints drop the triplet with a count") {
  const Dataset ds = oracle::make_dataset(
      Mode::multiclass, {"r"},
      {{"a", "b", 0, {}}, {"a", "x", 0, {}}, {"x", "c", 0, {}}});
  const TaskSplit tasks =
      assemble_tasks(ds, simple_split({"a", "b"}, {"c"}, {"x"}));
  CHECK(tasks.train.size() == 1);
  CHECK(tasks.s1_test.empty());
  CHECK(tasks.s2_test.empty());
  CHECK(tasks.dropped == 2);
}

TEST_CASE("assemble failure modes") {
  const Dataset ds = oracle::make_dataset(Mode::multiclass, {"r"},
                                          {{"a", "b", 0, {}}});
  CHECK(oracle::error_code_of([&] {
          assemble_tasks(ds, simple_split({"a"}, {"b"}));
        }) == errc::empty_train);
  CHECK(oracle::error_code_of([&] {
          assemble_tasks(ds, simple_split({"a"}, {"z"}));
        }) == errc::unknown_drug);
}

TEST_CASE("every retained triplet lands in exactly one task") {
  std::mt19937 gen(37);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + gen() % 25;
    std::vector<DrugId> drugs;
    for (int i = 0; i < n; ++i) {
      char id[8];
      std::snprintf(id, sizeof id, "d%02d", i);
      drugs.push_back(id);
    }

    std::vector<DdiTriplet> triplets;
    const int rows = 10 + gen() % 60;
    for (int k = 0; k < rows; ++k) {
      const int i = gen() % n, j = gen() % n;
      if (i == j) continue;
      triplets.push_back({drugs[i], drugs[j],
                          static_cast<RelationId>(gen() % 3), {}});
    }

    // random three-way assignment; first two drugs pin both sides non-empty
    std::vector<DrugId> known{drugs[0]}, fresh{drugs[1]}, excluded;
    for (int i = 2; i < n; ++i) {
      switch (gen() % 3) {
        case 0: known.push_back(drugs[i]); break;
        case 1: fresh.push_back(drugs[i]); break;
        default: excluded.push_back(drugs[i]); break;
      }
    }
    // guarantee one trainable triplet
    triplets.push_back({drugs[0], known.size() > 1 ? known[1] : drugs[0], 0, {}});
    if (triplets.back().head == triplets.back().tail) {
      triplets.back().tail = drugs[1];  // fall back to an s1 row
      triplets.push_back({drugs[0], drugs[1], 1, {}});
      known.push_back("extra");
      triplets.push_back({drugs[0], "extra", 0, {}});
    }

    const Dataset ds =
        oracle::make_dataset(Mode::multiclass, {"r0", "r1", "r2"}, triplets);
    const DrugSplit split = simple_split(known, fresh, excluded);

    TaskSplit tasks;
    try {
      tasks = assemble_tasks(ds, split);
    } catch (const Error& e) {
      CHECK(std::string(e.code()) == errc::empty_train);
      continue;
    }

    CHECK(tasks.train.size() + tasks.s1_test.size() + tasks.s2_test.size() +
              tasks.dropped ==
          ds.triplets.size());
    for (const auto& t : tasks.train) {
      CHECK(split.is_known(t.head));
      CHECK(split.is_known(t.tail));
    }
    for (const auto& t : tasks.s1_test)
      CHECK((split.is_new(t.head) ^ split.is_new(t.tail)) == 1);
    for (const auto& t : tasks.s2_test) {
      CHECK(split.is_new(t.head));
      CHECK(split.is_new(t.tail));
    }
  }
}

TEST_CASE("validation carve takes a rounded seeded share") {
  std::vector<DdiTriplet> train;
  for (int i = 0; i < 1000; ++i)
    train.push_back({"h" + std::to_string(i), "t" + std::to_string(i), 0, {}});

  const auto [reduced, validation] = carve_validation(train, 0.1, 7);
  CHECK(validation.size() == 100);
  CHECK(reduced.size() == 900);

  // the two halves are the original multiset
  auto key = [](const DdiTriplet& t) { return std::tie(t.head, t.tail); };
  std::vector<DdiTriplet> merged = reduced;
  merged.insert(merged.end(), validation.begin(), validation.end());
  std::sort(merged.begin(), merged.end(),
            [&](const DdiTriplet& a, const DdiTriplet& b) { return key(a) < key(b); });
  std::vector<DdiTriplet> expect = train;
  std::sort(expect.begin(), expect.end(),
            [&](const DdiTriplet& a, const DdiTriplet& b) { return key(a) < key(b); });
  CHECK(merged == expect);

  const auto again = carve_validation(train, 0.1, 7);
  CHECK(again.first == reduced);
  CHECK(again.second == validation);
  CHECK(carve_validation(train, 0.1, 8).second != validation);
}

TEST_CASE("validation carve rounds half to even and checks the domain") {
  std::vector<DdiTriplet> five;
  for (int i = 0; i < 5; ++i)
    five.push_back({"h" + std::to_string(i), "t" + std::to_string(i), 0, {}});
  CHECK(carve_validation(five, 0.5, 1).second.size() == 2);  // 2.5 rounds down

  CHECK(oracle::error_code_of([&] { carve_validation(five, 0.0, 1); }) ==
        errc::bad_argument);
  CHECK(oracle::error_code_of([&] { carve_validation(five, 1.0, 1); }) ==
        errc::bad_argument);
}

TEST_CASE("negative sampling corrupts one endpoint") {
  const Dataset ds = oracle::make_dataset(Mode::multilabel, {"r"},
                                          {{"a", "b", 0, 1},
                                           {"b", "c", 0, 1}});
  const std::vector<DdiTriplet> positives = {{"a", "b", 0, 1}};
  const auto negatives = sample_negatives(ds, positives, 1, 3);
  REQUIRE(negatives.size() == 1);
  const DdiTriplet& neg = negatives[0];
  CHECK(neg.label == 0);
  CHECK(neg.head != neg.tail);
  CHECK((neg.head == "a" || neg.tail == "b"));  // one endpoint survives
  // not a positive in either orientation
  CHECK_FALSE((neg.head == "a" && neg.tail == "b"));
  CHECK_FALSE((neg.head == "b" && neg.tail == "a"));
  CHECK_FALSE((neg.head == "b" && neg.tail == "c"));
  CHECK_FALSE((neg.head == "c" && neg.tail == "b"));
}

TEST_CASE("negative sampling exhausts when every pair is positive") {
  std::vector<DdiTriplet> triplets;
  const std::vector<DrugId> drugs = {"a", "b", "c"};
  for (const auto& h : drugs)
    for (const auto& t : drugs)
      if (h < t) triplets.push_back({h, t, 0, 1});
  const Dataset ds = oracle::make_dataset(Mode::multilabel, {"r"}, triplets);
  CHECK(oracle::error_code_of([&] {
          sample_negatives(ds, ds.triplets, 1, 5);
        }) == errc::sampling_exhausted);
}

TEST_CASE("a thousand negatives avoid the positive set") {
  std::mt19937 gen(41);
  std::vector<DdiTriplet> triplets;
  std::set<std::pair<int, int>> used;
  while (triplets.size() < 1000) {
    int i = gen() % 80, j = gen() % 80;
    if (i == j) continue;
    if (!used.insert({std::min(i, j), std::max(i, j)}).second) continue;
    triplets.push_back({"d" + std::to_string(i), "d" + std::to_string(j),
                        static_cast<RelationId>(gen() % 4), 1});
  }
  const Dataset ds =
      oracle::make_dataset(Mode::multilabel, {"r0", "r1", "r2", "r3"}, triplets);

  const auto negatives = sample_negatives(ds, ds.triplets, 1, 99);
  CHECK(negatives.size() == 1000);

  std::set<std::tuple<DrugId, DrugId, RelationId>> positive;
  for (const auto& t : ds.triplets) {
    positive.emplace(t.head, t.tail, t.relation);
    positive.emplace(t.tail, t.head, t.relation);
  }
  for (const auto& n : negatives) {
    CHECK(positive.count({n.head, n.tail, n.relation}) == 0);
    CHECK(n.label == 0);
  }

  CHECK(sample_negatives(ds, ds.triplets, 1, 99) == negatives);  // seeded
  CHECK(sample_negatives(ds, ds.triplets, 2, 99).size() == 2000);
}

TEST_CASE("negatives respect the split side of the corrupted endpoint") {
  std::vector<DdiTriplet> triplets;
  std::vector<DrugId> known, fresh;
  for (int i = 0; i < 10; ++i) known.push_back("k" + std::to_string(i));
  for (int i = 0; i < 10; ++i) fresh.push_back("n" + std::to_string(i));
  std::mt19937 gen(43);
  for (int r = 0; r < 60; ++r) {
    const DrugId& h = known[gen() % known.size()];
    const DrugId& t = fresh[gen() % fresh.size()];
    triplets.push_back({h, t, 0, 1});
  }
  Dataset ds = oracle::make_dataset(Mode::multilabel, {"r"}, triplets);
  const DrugSplit split = simple_split(known, fresh);

  std::vector<DdiTriplet> positives(ds.triplets.begin(), ds.triplets.begin() + 20);
  const auto negatives = sample_negatives(ds, positives, 3, 11, &split);
  CHECK(negatives.size() == 60);
  for (const auto& n : negatives) {
    // one endpoint per side, as in the s1 positives they derive from
    CHECK(split.is_known(n.head));
    CHECK(split.is_new(n.tail));
  }
}

TEST_CASE("dataset statistics count drugs, types and rows") {
  const Dataset ds = oracle::make_dataset(
      Mode::multiclass, {"r0", "r1", "r2"},
      {{"a", "b", 0, {}}, {"a", "c", 0, {}}, {"b", "c", 2, {}}});
  const DatasetStats st = dataset_stats(ds);
  CHECK(st.drug_count == 3);
  CHECK(st.vocabulary_size == 3);
  CHECK(st.relation_count == 2);  // r1 never appears in a triplet
  CHECK(st.triplet_count == 3);
  CHECK(st.relation_frequency.at(0) == 2);
  CHECK(st.relation_frequency.at(2) == 1);
  CHECK(st.types_within(1, 1) == 1);
  CHECK(st.types_within(1, 2) == 2);
  CHECK(st.types_within(3, 9) == 0);

  const DatasetStats empty = dataset_stats(Dataset{});
  CHECK(empty.drug_count == 0);
  CHECK(empty.relation_count == 0);
  CHECK(empty.triplet_count == 0);
}

TEST_CASE("type frequency filter keeps the vocabulary stable") {
  Dataset ds = oracle::make_dataset(
      Mode::multiclass, {"r0", "r1", "r2"},
      {{"a", "b", 0, {}}, {"a", "c", 0, {}}, {"b", "c", 1, {}},
       {"c", "d", 1, {}}, {"d", "e", 1, {}}, {"a", "e", 2, {}}});
  ds.fingerprints["a"] = oracle::fp_bits(8, {0});
  ds.approval_years["e"] = 1999;

  const Dataset kept = filter_type_frequency(ds, 2, 2);  // r0 only
  CHECK(kept.relations == ds.relations);
  CHECK(kept.triplets.size() == 2);
  CHECK(kept.drugs == std::vector<DrugId>{"a", "b", "c"});
  CHECK(kept.fingerprints.count("a") == 1);
  CHECK(kept.approval_years.empty());  // drug e fell out

  const Dataset band = filter_type_frequency(ds, 2, 3);  // r0 and r1
  CHECK(band.triplets.size() == 5);
  CHECK(dataset_stats(band).relation_count == 2);
}
