#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "ddishift/rng.hpp"
#include "ddishift/similarity.hpp"
#include "ddishift/split.hpp"
#include "oracles.hpp"

using namespace ddishift;

TEST_CASE("round half to even") {
  CHECK(round_half_even(0.0) == 0);
  CHECK(round_half_even(0.5) == 0);
  CHECK(round_half_even(1.5) == 2);
  CHECK(round_half_even(2.5) == 2);
  CHECK(round_half_even(3.5) == 4);
  CHECK(round_half_even(2.3) == 2);
  CHECK(round_half_even(2.7) == 3);
  CHECK(round_half_even(7.0) == 7);
}

namespace {

std::map<DrugId, Fingerprint> padded_prints(
    const std::vector<std::set<int>>& bit_sets, std::uint32_t width = 64) {
  std::map<DrugId, Fingerprint> out;
  for (std::size_t i = 0; i < bit_sets.size(); ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "d%03zu", i);
    out.emplace(id, oracle::fp_bits(width, bit_sets[i]));
  }
  return out;
}

Dataset print_only_dataset(std::map<DrugId, Fingerprint> prints) {
  return oracle::make_dataset(Mode::multiclass, {"r"}, {}, std::move(prints));
}

std::set<int> bit_range(int lo, int hi) {  // inclusive bounds
  std::set<int> s;
  for (int b = lo; b <= hi; ++b) s.insert(b);
  return s;
}

// Partition of matrix ids under exact rational edges, via the BFS oracle.
std::vector<std::vector<DrugId>> oracle_clusters(const SimilarityMatrix& sim,
                                                 double gamma0) {
  auto comps = oracle::bfs_components(
      sim.size(), [&](std::size_t i, std::size_t j) {
        const PairCounts c = sim.counts(std::min(i, j), std::max(i, j));
        return oracle::ratio_exceeds(c.intersection, c.union_, gamma0);
      });
  std::vector<std::vector<DrugId>> named;
  for (const auto& comp : comps) {
    std::vector<DrugId> members;
    for (std::size_t i : comp) members.push_back(sim.ids()[i]);
    std::sort(members.begin(), members.end());
    named.push_back(std::move(members));
  }
  std::sort(named.begin(), named.end());
  return named;
}

}  // namespace

TEST_CASE("clusters from designed similarity values") {
  SUBCASE("two tight pairs stay apart at a mid threshold") {
    // S(a,b) = 9/10, S(c,d) = 8/10, all cross pairs disjoint
    const auto prints = padded_prints({bit_range(0, 9), bit_range(0, 8),
                                       bit_range(20, 29), bit_range(20, 27)});
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);
    const ClusterSet cs = build_clusters(sim, 0.5);
    REQUIRE(cs.clusters.size() == 2);
    CHECK(cs.clusters[0] == std::vector<DrugId>{"d000", "d001"});
    CHECK(cs.clusters[1] == std::vector<DrugId>{"d002", "d003"});
    CHECK(cs.gamma0 == 0.5);
  }
  SUBCASE("threshold at or above the maximum gives singletons") {
    const auto prints = padded_prints({bit_range(0, 9), bit_range(0, 8),
                                       bit_range(20, 29), bit_range(20, 27)});
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);
    CHECK(build_clusters(sim, 0.9).clusters.size() == 4);  // strict: 0.9 > 0.9 fails
    CHECK(build_clusters(sim, 1.0).clusters.size() == 4);
  }
  SUBCASE("zero threshold with any overlap welds everything") {
    const auto prints = padded_prints(
        {bit_range(0, 4), bit_range(4, 8), bit_range(8, 12)});
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);
    CHECK(build_clusters(sim, 0.0).clusters.size() == 1);
  }
  SUBCASE("chains merge without a direct edge") {
    // S(a,b) = 9/11, S(b,c) = 9/12, S(a,c) = 8/12; only the first two
    // exceed 0.7, yet one component contains all three
    const auto prints = padded_prints({bit_range(0, 9),
                                       [] {
                                         auto s = bit_range(0, 8);
                                         s.insert(10);
                                         return s;
                                       }(),
                                       [] {
                                         auto s = bit_range(0, 7);
                                         s.insert(10);
                                         s.insert(11);
                                         return s;
                                       }()});
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);
    CHECK_FALSE(oracle::ratio_exceeds(8, 12, 0.7));  // no a-c edge
    const ClusterSet cs = build_clusters(sim, 0.7);
    REQUIRE(cs.clusters.size() == 1);
    CHECK(cs.clusters[0].size() == 3);
  }
}

TEST_CASE("cluster edges use exact counts, not the stored float32") {
  // similarity exactly 1/3; float32 rounds it up across 0.333333335
  std::map<DrugId, Fingerprint> prints;
  prints["a"] = oracle::fp_bits(64, {0});
  prints["b"] = oracle::fp_bits(64, {0, 1, 2});
  const SimilarityMatrix fresh = pairwise_similarity(prints, 1);
  const double gamma0 = 0.333333335;

  CHECK(build_clusters(fresh, gamma0).clusters.size() == 2);

  oracle::TempDir tmp;
  fresh.save(tmp.file("sim.bin"));
  SimilarityMatrix loaded = SimilarityMatrix::load(tmp.file("sim.bin"));
  loaded.attach_ids(fresh.ids());
  CHECK(static_cast<double>(loaded.value(0, 1)) > gamma0);
  CHECK(build_clusters(loaded, gamma0).clusters.size() == 1);
}

TEST_CASE("clusters match the reachability oracle on random instances") {
  std::mt19937 gen(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + gen() % 30;
    std::map<DrugId, Fingerprint> prints;
    for (std::size_t i = 0; i < n; ++i) {
      char id[8];
      std::snprintf(id, sizeof id, "d%03zu", i);
      prints.emplace(id, oracle::random_fp(gen, 48, 0.3));
    }
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);

    double gamma0;
    if (trial % 3 == 0 && sim.size() >= 2) {
      // a stored quotient itself, the boundary the strict rule must exclude
      const PairCounts c = sim.counts(0, 1);
      gamma0 = c.union_ ? double(c.intersection) / double(c.union_) : 0.25;
    } else {
      gamma0 = double(gen() % 11) / 10.0;
    }

    const ClusterSet cs = build_clusters(sim, gamma0);
    std::vector<std::vector<DrugId>> got = cs.clusters;
    std::sort(got.begin(), got.end());
    CHECK(got == oracle_clusters(sim, gamma0));

    std::size_t total = 0;
    for (const auto& c : cs.clusters) total += c.size();
    CHECK(total == n);  // clusters partition the universe
  }
}

TEST_CASE("cluster split honors the ceiling and keeps clusters whole") {
  std::mt19937 gen(57);
  int successes = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 10 + gen() % 30;
    std::map<DrugId, Fingerprint> prints;
    for (std::size_t i = 0; i < n; ++i) {
      char id[8];
      std::snprintf(id, sizeof id, "d%03zu", i);
      prints.emplace(id, oracle::random_fp(gen, 64, 0.15 + 0.05 * (trial % 5)));
    }
    const Dataset ds = print_only_dataset(prints);
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);

    SplitRequest req;
    req.strategy = SplitStrategy::cluster;
    req.seed = trial;
    req.gamma0 = 0.2 + 0.1 * (trial % 8);

    DrugSplit split;
    try {
      split = cluster_split(ds, sim, req);
    } catch (const Error& e) {
      CHECK(std::string(e.code()) == errc::unsatisfiable_fraction);
      continue;
    }
    ++successes;

    // exact ceiling on every cross pair
    for (const auto& u : split.known)
      for (const auto& v : split.new_drugs) {
        const oracle::Counts c = oracle::pair_counts(prints.at(u), prints.at(v));
        CHECK(oracle::ratio_at_most(c.inter, c.uni, *req.gamma0));
      }

    // no cluster straddles the boundary
    for (const auto& cluster : build_clusters(sim, *req.gamma0).clusters) {
      const bool first_new = split.is_new(cluster.front());
      for (const auto& member : cluster) CHECK(split.is_new(member) == first_new);
    }

    // target hit within tolerance
    const double target = double(round_half_even(req.new_fraction * double(n)));
    CHECK(std::abs(double(split.new_drugs.size()) - target) <=
          req.fraction_tolerance * double(n));

    CHECK(split.known.size() + split.new_drugs.size() == n);
    CHECK(split.excluded.empty());
    CHECK(split.gamma0 == *req.gamma0);
    CHECK(split.cluster_count.has_value());
    CHECK(split.achieved_gamma.has_value());
    CHECK(*split.achieved_gamma <= *req.gamma0);
    CHECK(split.rng == kRngName);

    CHECK(cluster_split(ds, sim, req) == split);  // deterministic
  }
  CHECK(successes >= 10);
}

TEST_CASE("cluster split failure modes") {
  SUBCASE("single giant component") {
    const auto prints = padded_prints(
        {bit_range(0, 9), bit_range(0, 9), bit_range(0, 9)});
    const Dataset ds = print_only_dataset(prints);
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);
    SplitRequest req;
    req.strategy = SplitStrategy::cluster;
    req.gamma0 = 0.5;
    CHECK(oracle::error_code_of([&] { cluster_split(ds, sim, req); }) ==
          errc::unsatisfiable_fraction);
  }
  SUBCASE("two tight families cannot meet a small fraction") {
    std::vector<std::set<int>> families;
    for (int i = 0; i < 10; ++i) families.push_back(bit_range(0, 9));
    for (int i = 0; i < 10; ++i) families.push_back(bit_range(30, 39));
    const auto prints = padded_prints(families);
    const Dataset ds = print_only_dataset(prints);
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);
    SplitRequest req;
    req.strategy = SplitStrategy::cluster;
    req.gamma0 = 0.5;  // components of 10 and 10; target 4, tolerance 1
    CHECK(oracle::error_code_of([&] { cluster_split(ds, sim, req); }) ==
          errc::unsatisfiable_fraction);
  }
  SUBCASE("missing gamma0") {
    const auto prints = padded_prints({bit_range(0, 3), bit_range(10, 13)});
    const Dataset ds = print_only_dataset(prints);
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);
    SplitRequest req;
    req.strategy = SplitStrategy::cluster;
    CHECK(oracle::error_code_of([&] { cluster_split(ds, sim, req); }) ==
          errc::bad_argument);
  }
  SUBCASE("drug without a fingerprint") {
    const auto prints = padded_prints({bit_range(0, 3), bit_range(10, 13)});
    Dataset ds = print_only_dataset(prints);
    ds.drugs.push_back("zzz");
    const SimilarityMatrix sim = pairwise_similarity(prints, 1);
    SplitRequest req;
    req.strategy = SplitStrategy::cluster;
    req.gamma0 = 0.5;
    CHECK(oracle::error_code_of([&] { cluster_split(ds, sim, req); }) ==
          errc::missing_fingerprint);
  }
}

static Dataset n_drug_dataset(std::size_t n) {
  std::map<DrugId, Fingerprint> prints;
  for (std::size_t i = 0; i < n; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "d%03zu", i);
    prints.emplace(id, oracle::fp_bits(32, {int(i % 32)}));
  }
  return print_only_dataset(std::move(prints));
}

TEST_CASE("random split takes an exact rounded share") {
  const Dataset ds = n_drug_dataset(10);
  SplitRequest req;
  req.strategy = SplitStrategy::random;
  req.seed = 5;
  req.new_fraction = 0.2;

  const DrugSplit a = random_split(ds, req);
  CHECK(a.new_drugs.size() == 2);
  CHECK(a.known.size() == 8);
  CHECK(random_split(ds, req) == a);

  req.new_fraction = 0.25;  // 2.5 drugs rounds half to even
  CHECK(random_split(ds, req).new_drugs.size() == 2);
  req.new_fraction = 0.35;  // 3.5 rounds to 4
  CHECK(random_split(ds, req).new_drugs.size() == 4);
}

TEST_CASE("random split partitions and varies with the seed") {
  const Dataset ds = n_drug_dataset(100);
  SplitRequest req;
  req.strategy = SplitStrategy::random;

  std::set<DrugId> universe(ds.drugs.begin(), ds.drugs.end());
  int distinct = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    req.seed = seed;
    const DrugSplit a = random_split(ds, req);
    req.seed = seed + 100;
    const DrugSplit b = random_split(ds, req);
    if (a.new_drugs != b.new_drugs) ++distinct;

    std::set<DrugId> seen(a.known.begin(), a.known.end());
    seen.insert(a.new_drugs.begin(), a.new_drugs.end());
    CHECK(seen == universe);
    CHECK(a.known.size() + a.new_drugs.size() == 100);
    CHECK(std::is_sorted(a.new_drugs.begin(), a.new_drugs.end()));
  }
  CHECK(distinct == 100);  // collisions have probability ~ 1 / C(100,20)
}

TEST_CASE("degenerate shares are rejected") {
  const Dataset ds = n_drug_dataset(2);
  SplitRequest req;
  req.strategy = SplitStrategy::random;
  req.new_fraction = 0.999;
  CHECK(oracle::error_code_of([&] { random_split(ds, req); }) ==
        errc::degenerate_split);
  req.new_fraction = 0.001;
  CHECK(oracle::error_code_of([&] { random_split(ds, req); }) ==
        errc::degenerate_split);
  req.new_fraction = 1.5;
  CHECK(oracle::error_code_of([&] { random_split(ds, req); }) ==
        errc::bad_argument);
}

TEST_CASE("frequency split takes the rarest drugs") {
  // participation: a=3, b=2, c=2, d=1, zero for the print-only drug z
  std::vector<DdiTriplet> triplets = {
      {"a", "b", 0, {}}, {"a", "c", 0, {}}, {"a", "d", 0, {}}, {"b", "c", 0, {}}};
  std::map<DrugId, Fingerprint> prints;
  prints["z"] = oracle::fp_bits(8, {0});
  Dataset ds = oracle::make_dataset(Mode::multiclass, {"r"}, triplets, prints);

  SplitRequest req;
  req.strategy = SplitStrategy::frequency;
  req.new_fraction = 0.4;  // 2 of 5
  const DrugSplit s = frequency_split(ds, req);
  CHECK(s.new_drugs == std::vector<DrugId>{"d", "z"});
  CHECK(s.known == std::vector<DrugId>{"a", "b", "c"});

  // ties broken by id: b and c tie at 2; taking three pulls in b
  req.new_fraction = 0.6;
  CHECK(frequency_split(ds, req).new_drugs == std::vector<DrugId>{"b", "d", "z"});
}

TEST_CASE("frequency split matches a recount on a 20-drug instance") {
  std::mt19937 gen(71);
  std::vector<DdiTriplet> triplets;
  std::set<std::pair<int, int>> used;
  auto add_pair = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    if (!used.insert({i, j}).second) return;
    char h[8], t[8];
    std::snprintf(h, sizeof h, "d%02d", i);
    std::snprintf(t, sizeof t, "d%02d", j);
    triplets.push_back({h, t, 0, {}});
  };
  // ring over all 20 ids so every drug occurs as an endpoint
  for (int i = 0; i < 20; ++i) add_pair(i, (i + 1) % 20);
  while (triplets.size() < 40) {
    int i = gen() % 20, j = gen() % 20;
    if (i == j) continue;
    add_pair(i, j);
  }
  const Dataset ds = oracle::make_dataset(Mode::multiclass, {"r"}, triplets);
  REQUIRE(ds.drugs.size() == 20);

  SplitRequest req;
  req.strategy = SplitStrategy::frequency;
  req.new_fraction = 0.2;
  const DrugSplit s = frequency_split(ds, req);
  REQUIRE(s.new_drugs.size() == 4);

  std::map<DrugId, std::size_t> count;
  for (const auto& d : ds.drugs) count[d] = 0;
  for (const auto& t : ds.triplets) {
    ++count[t.head];
    ++count[t.tail];
  }
  std::vector<std::pair<std::size_t, DrugId>> ranked;
  for (const auto& [id, c] : count) ranked.push_back({c, id});
  std::sort(ranked.begin(), ranked.end());
  std::vector<DrugId> expect;
  for (int i = 0; i < 4; ++i) expect.push_back(ranked[i].second);
  std::sort(expect.begin(), expect.end());
  CHECK(s.new_drugs == expect);
}

TEST_CASE("time split separates on the threshold year") {
  Dataset ds = n_drug_dataset(4);  // d000..d003
  ds.approval_years = {{"d000", 1980}, {"d001", 2015}, {"d002", 2000}};

  SplitRequest req;
  req.strategy = SplitStrategy::time;
  req.threshold_year = 2000;
  const DrugSplit s = time_split(ds, req);
  CHECK(s.known == std::vector<DrugId>{"d000"});
  // the boundary year itself counts as new
  CHECK(s.new_drugs == std::vector<DrugId>{"d001", "d002"});
  CHECK(s.excluded == std::vector<DrugId>{"d003"});
  CHECK(s.threshold_year == 2000);

  SUBCASE("no years at all") {
    ds.approval_years.clear();
    CHECK(oracle::error_code_of([&] { time_split(ds, req); }) ==
          errc::no_approval_data);
  }
  SUBCASE("threshold below every year empties the known side") {
    req.threshold_year = 1900;
    CHECK(oracle::error_code_of([&] { time_split(ds, req); }) ==
          errc::degenerate_split);
  }
  SUBCASE("missing threshold") {
    req.threshold_year.reset();
    CHECK(oracle::error_code_of([&] { time_split(ds, req); }) ==
          errc::bad_argument);
  }
}

TEST_CASE("make_split dispatches and checks prerequisites") {
  const Dataset ds = n_drug_dataset(10);
  SplitRequest req;
  req.strategy = SplitStrategy::random;
  CHECK(make_split(ds, nullptr, req).strategy == SplitStrategy::random);

  req.strategy = SplitStrategy::cluster;
  req.gamma0 = 0.5;
  CHECK(oracle::error_code_of([&] { make_split(ds, nullptr, req); }) ==
        errc::bad_argument);

  const SimilarityMatrix sim = pairwise_similarity(ds.fingerprints, 1);
  const DrugSplit s = make_split(ds, &sim, req);
  CHECK(s.strategy == SplitStrategy::cluster);
}
