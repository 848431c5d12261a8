#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "ddishift/split.hpp"
#include "ddishift/synth.hpp"
#include "oracles.hpp"

using namespace ddishift;

namespace {

std::size_t index_of_id(const DrugId& id) {
  return static_cast<std::size_t>(std::stoul(id.substr(1)));
}

std::vector<std::size_t> component_sizes(const ClusterSet& cs) {
  std::vector<std::size_t> sizes;
  for (const auto& c : cs.clusters) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace

TEST_CASE("generated datasets have complete pair coverage") {
  SynthConfig cfg;
  cfg.drug_count = 30;
  cfg.cluster_count = 3;
  cfg.epoch_count = 3;
  cfg.width = 64;
  cfg.seed = 5;
  const Dataset ds = generate_synthetic(cfg);

  CHECK(ds.mode == Mode::multiclass);
  REQUIRE(ds.drugs.size() == 30);
  CHECK(ds.drugs.front() == "D00");
  CHECK(ds.drugs.back() == "D29");
  CHECK(std::is_sorted(ds.drugs.begin(), ds.drugs.end()));

  REQUIRE(ds.relations.size() == 9);
  CHECK(ds.relations.front() == "R0");
  CHECK(ds.relations.back() == "R8");

  // one triplet per unordered pair, no labels in multiclass mode
  REQUIRE(ds.triplets.size() == 30 * 29 / 2);
  std::set<std::pair<DrugId, DrugId>> pairs;
  for (const auto& t : ds.triplets) {
    CHECK(!t.label.has_value());
    pairs.emplace(std::min(t.head, t.tail), std::max(t.head, t.tail));
  }
  CHECK(pairs.size() == ds.triplets.size());

  for (const auto& d : ds.drugs) {
    REQUIRE(ds.fingerprints.count(d) == 1);
    CHECK(ds.fingerprints.at(d).width() == 64);
    REQUIRE(ds.approval_years.count(d) == 1);
  }
  CHECK(validate_dataset(ds).issues.empty());
}

TEST_CASE("drug ids are zero padded to the population width") {
  SynthConfig cfg;
  cfg.drug_count = 120;
  const Dataset ds = generate_synthetic(cfg);
  CHECK(ds.drugs.front() == "D000");
  CHECK(ds.drugs.back() == "D119");
  CHECK(ds.relations.front() == "R00");
  CHECK(ds.relations.back() == "R14");
}

TEST_CASE("generation is deterministic in the seed") {
  SynthConfig cfg;
  cfg.drug_count = 24;
  cfg.cluster_count = 3;
  cfg.width = 64;
  const Dataset a = generate_synthetic(cfg);
  const Dataset b = generate_synthetic(cfg);

  CHECK(a.drugs == b.drugs);
  CHECK(a.relations == b.relations);
  CHECK(a.approval_years == b.approval_years);
  REQUIRE(a.triplets.size() == b.triplets.size());
  for (std::size_t i = 0; i < a.triplets.size(); ++i) {
    CHECK(a.triplets[i].head == b.triplets[i].head);
    CHECK(a.triplets[i].tail == b.triplets[i].tail);
    CHECK(a.triplets[i].relation == b.triplets[i].relation);
  }
  for (const auto& d : a.drugs)
    CHECK(a.fingerprints.at(d) == b.fingerprints.at(d));

  cfg.seed = 43;
  const Dataset c = generate_synthetic(cfg);
  bool differs = false;
  for (const auto& d : a.drugs)
    if (!(a.fingerprints.at(d) == c.fingerprints.at(d))) differs = true;
  CHECK(differs);
}

TEST_CASE("approval years track the family epoch") {
  SynthConfig cfg;
  cfg.drug_count = 120;  // families of 24, one per epoch
  const Dataset ds = generate_synthetic(cfg);
  for (const auto& d : ds.drugs) {
    const std::size_t family = index_of_id(d) * cfg.cluster_count /
                               cfg.drug_count;
    const int center = cfg.start_year + static_cast<int>(family) *
                                            cfg.year_step;
    const int year = ds.approval_years.at(d);
    CHECK(year >= center - cfg.year_jitter);
    CHECK(year <= center + cfg.year_jitter);
  }
}

TEST_CASE("without label noise the relation encodes the head family") {
  SynthConfig cfg;
  cfg.drug_count = 30;
  cfg.cluster_count = 3;
  cfg.epoch_count = 3;
  cfg.width = 64;
  cfg.seed = 5;
  cfg.label_noise = 0.0;
  const Dataset ds = generate_synthetic(cfg);
  for (const auto& t : ds.triplets) {
    const std::size_t family = index_of_id(t.head) * cfg.cluster_count /
                               cfg.drug_count;
    CHECK(t.relation >= 3 * family);
    CHECK(t.relation <= 3 * family + 2);
  }
}

TEST_CASE("early families weld into one mid-threshold component") {
  SynthConfig cfg;
  cfg.drug_count = 120;
  const Dataset ds = generate_synthetic(cfg);
  const SimilarityMatrix sim = pairwise_similarity(ds.fingerprints, 1);

  // the first three families share a base scaffold; the last two are novel
  const ClusterSet mid = build_clusters(sim, 0.5);
  CHECK(component_sizes(mid) == std::vector<std::size_t>{24, 24, 72});
  for (const auto& cluster : mid.clusters) {
    if (cluster.size() != 72) continue;
    for (std::size_t i = 0; i < 72; ++i)
      CHECK(cluster[i] == ds.drugs[i]);
  }

  // a threshold nothing exceeds leaves every drug alone
  CHECK(build_clusters(sim, 1.0).clusters.size() == 120);

  // lowering the threshold only ever merges components
  std::size_t previous = 0;
  bool first = true;
  for (const double gamma : {1.0, 0.9, 0.7, 0.5, 0.3, 0.0}) {
    const std::size_t count = build_clusters(sim, gamma).clusters.size();
    if (!first) CHECK(count <= previous);
    previous = count;
    first = false;
  }
  CHECK(build_clusters(sim, 0.0).clusters.size() == 1);
}

TEST_CASE("single epoch generations stay near the start year") {
  SynthConfig cfg;
  cfg.drug_count = 10;
  cfg.cluster_count = 2;
  cfg.epoch_count = 1;
  cfg.width = 64;
  const Dataset ds = generate_synthetic(cfg);
  CHECK(validate_dataset(ds).issues.empty());
  for (const auto& d : ds.drugs) {
    CHECK(ds.approval_years.at(d) >= cfg.start_year - cfg.year_jitter);
    CHECK(ds.approval_years.at(d) <= cfg.start_year + cfg.year_jitter);
  }
}

TEST_CASE("degenerate generator configurations are rejected") {
  const auto fails = [](auto mutate) {
    SynthConfig cfg;
    cfg.drug_count = 10;
    cfg.width = 64;
    mutate(cfg);
    return oracle::error_code_of([&] { generate_synthetic(cfg); });
  };
  CHECK(fails([](SynthConfig& c) { c.drug_count = 1; }) == errc::bad_argument);
  CHECK(fails([](SynthConfig& c) { c.cluster_count = 0; }) ==
        errc::bad_argument);
  CHECK(fails([](SynthConfig& c) { c.epoch_count = 0; }) ==
        errc::bad_argument);
  CHECK(fails([](SynthConfig& c) { c.width = 0; }) == errc::bad_argument);
  CHECK(fails([](SynthConfig& c) { c.year_jitter = -1; }) ==
        errc::bad_argument);
  CHECK(fails([](SynthConfig& c) { c.cluster_count = 11; }) ==
        errc::bad_argument);
}
