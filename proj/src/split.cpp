#include "ddishift/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ddishift/rng.hpp"

namespace ddishift {

std::size_t round_half_even(double x) {
  const double fl = std::floor(x);
  const double diff = x - fl;
  const auto f = static_cast<std::size_t>(fl);
  if (diff > 0.5) return f + 1;
  if (diff < 0.5) return f;
  return f % 2 == 0 ? f : f + 1;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Components of the S > gamma0 graph over the given matrix indices.
// Members keep ascending index order; components are ordered by their
// smallest index, so output is deterministic.
std::vector<std::vector<std::size_t>> components_over(
    const SimilarityMatrix& sim, const std::vector<std::size_t>& indices,
    double gamma0) {
  UnionFind uf(indices.size());
  const bool exact = sim.exact();
  for (std::size_t a = 0; a + 1 < indices.size(); ++a)
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      bool edge;
      if (exact) {
        const PairCounts c = sim.counts(indices[a], indices[b]);
        edge = ratio_exceeds(c.intersection, c.union_, gamma0);
      } else {
        edge = static_cast<double>(sim.value(indices[a], indices[b])) > gamma0;
      }
      if (edge) uf.unite(a, b);
    }

  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t a = 0; a < indices.size(); ++a)
    by_root[uf.find(a)].push_back(indices[a]);

  std::vector<std::vector<std::size_t>> out;
  out.reserve(by_root.size());
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  return out;
}

std::vector<std::size_t> matrix_indices(const SimilarityMatrix& sim,
                                        const std::vector<DrugId>& drugs) {
  std::vector<std::size_t> idx;
  idx.reserve(drugs.size());
  for (const auto& d : drugs) {
    try {
      idx.push_back(sim.index_of(d));
    } catch (const Error&) {
      throw Error(errc::missing_fingerprint,
                  "no fingerprint for drug '" + d + "'");
    }
  }
  return idx;
}

double max_pair_similarity(const SimilarityMatrix& sim,
                           const std::vector<std::size_t>& indices) {
  if (sim.exact()) {
    PairCounts best{0, 1};
    for (std::size_t a = 0; a + 1 < indices.size(); ++a)
      for (std::size_t b = a + 1; b < indices.size(); ++b) {
        const PairCounts c = sim.counts(indices[a], indices[b]);
        if (compare_ratios(c.intersection, c.union_, best.intersection,
                           best.union_) > 0)
          best = c;
      }
    return best.union_ == 0 ? 0.0
                            : static_cast<double>(best.intersection) /
                                  static_cast<double>(best.union_);
  }
  double best = 0.0;
  for (std::size_t a = 0; a + 1 < indices.size(); ++a)
    for (std::size_t b = a + 1; b < indices.size(); ++b)
      best = std::max(best, static_cast<double>(sim.value(indices[a], indices[b])));
  return best;
}

void check_fraction(const SplitRequest& req) {
  if (!(req.new_fraction >= 0.0 && req.new_fraction <= 1.0))
    throw Error(errc::bad_argument, "new_fraction must lie in [0, 1]");
}

DrugSplit base_split(const Dataset&, const SplitRequest& req) {
  DrugSplit s;
  s.strategy = req.strategy;
  s.seed = req.seed;
  s.rng = std::string(kRngName);
  return s;
}

void require_both_sides(const DrugSplit& s) {
  if (s.known.empty() || s.new_drugs.empty())
    throw Error(errc::degenerate_split,
                "split leaves the " +
                    std::string(s.known.empty() ? "known" : "new") +
                    " side empty");
}

}  // namespace

ClusterSet build_clusters(const SimilarityMatrix& sim, double gamma0) {
  std::vector<std::size_t> all(sim.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  ClusterSet cs;
  cs.gamma0 = gamma0;
  for (const auto& comp : components_over(sim, all, gamma0)) {
    std::vector<DrugId> members;
    members.reserve(comp.size());
    for (std::size_t i : comp) members.push_back(sim.ids()[i]);
    cs.clusters.push_back(std::move(members));
  }
  return cs;
}

DrugSplit random_split(const Dataset& ds, const SplitRequest& req) {
  check_fraction(req);
  DrugSplit s = base_split(ds, req);
  std::vector<DrugId> order = ds.drugs;
  Rng rng(req.seed);
  rng.shuffle(order);
  const std::size_t target =
      round_half_even(req.new_fraction * static_cast<double>(order.size()));
  s.new_drugs.assign(order.begin(), order.begin() + target);
  s.known.assign(order.begin() + target, order.end());
  std::sort(s.new_drugs.begin(), s.new_drugs.end());
  std::sort(s.known.begin(), s.known.end());
  require_both_sides(s);
  return s;
}

DrugSplit frequency_split(const Dataset& ds, const SplitRequest& req) {
  check_fraction(req);
  DrugSplit s = base_split(ds, req);

  std::map<DrugId, std::size_t> freq;
  for (const auto& d : ds.drugs) freq[d] = 0;
  for (const auto& t : ds.triplets) {
    ++freq[t.head];
    ++freq[t.tail];
  }

  std::vector<DrugId> order = ds.drugs;
  std::stable_sort(order.begin(), order.end(),
                   [&freq](const DrugId& a, const DrugId& b) {
                     return freq[a] != freq[b] ? freq[a] < freq[b] : a < b;
                   });
  const std::size_t target =
      round_half_even(req.new_fraction * static_cast<double>(order.size()));
  s.new_drugs.assign(order.begin(), order.begin() + target);
  s.known.assign(order.begin() + target, order.end());
  std::sort(s.new_drugs.begin(), s.new_drugs.end());
  std::sort(s.known.begin(), s.known.end());
  require_both_sides(s);
  return s;
}

DrugSplit time_split(const Dataset& ds, const SplitRequest& req) {
  if (!req.threshold_year)
    throw Error(errc::bad_argument, "time split needs a threshold year");
  DrugSplit s = base_split(ds, req);
  s.threshold_year = req.threshold_year;

  bool any_year = false;
  for (const auto& d : ds.drugs) {
    auto it = ds.approval_years.find(d);
    if (it == ds.approval_years.end()) {
      s.excluded.push_back(d);
      continue;
    }
    any_year = true;
    if (it->second < *req.threshold_year)
      s.known.push_back(d);
    else
      s.new_drugs.push_back(d);
  }
  if (!any_year)
    throw Error(errc::no_approval_data, "no drug has an approval year");
  if (s.known.empty() || s.new_drugs.empty())
    throw Error(errc::degenerate_split,
                "threshold year " + std::to_string(*req.threshold_year) +
                    " leaves one side empty");
  return s;  // vectors were filled in sorted drug order
}

DrugSplit cluster_split(const Dataset& ds, const SimilarityMatrix& sim,
                        const SplitRequest& req) {
  check_fraction(req);
  if (!req.gamma0)
    throw Error(errc::bad_argument, "cluster split needs gamma0");

  const std::vector<std::size_t> indices = matrix_indices(sim, ds.drugs);
  const auto clusters = components_over(sim, indices, *req.gamma0);

  const double n = static_cast<double>(ds.drugs.size());
  const double target = static_cast<double>(round_half_even(req.new_fraction * n));
  const double tol = req.fraction_tolerance * n;

  Rng rng(req.seed);
  std::vector<std::size_t> order(clusters.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  constexpr int kMaxAttempts = 32;
  std::vector<std::size_t> chosen;
  bool satisfied = false;
  for (int attempt = 0; attempt < kMaxAttempts && !satisfied; ++attempt) {
    rng.shuffle(order);
    chosen.clear();
    double count = 0;
    for (std::size_t c : order) {
      if (count >= target) break;
      const double size = static_cast<double>(clusters[c].size());
      if (count + size <= target + tol) {
        chosen.push_back(c);
        count += size;
      }
    }
    satisfied = std::abs(count - target) <= tol;
  }
  if (!satisfied)
    throw Error(errc::unsatisfiable_fraction,
                "no whole-cluster assignment reaches " +
                    std::to_string(req.new_fraction) + " within tolerance " +
                    std::to_string(req.fraction_tolerance));

  std::vector<char> is_new(sim.size(), 0);
  for (std::size_t c : chosen)
    for (std::size_t i : clusters[c]) is_new[i] = 1;

  DrugSplit s = base_split(ds, req);
  for (std::size_t i : indices) {
    if (is_new[i])
      s.new_drugs.push_back(sim.ids()[i]);
    else
      s.known.push_back(sim.ids()[i]);
  }
  std::sort(s.new_drugs.begin(), s.new_drugs.end());
  std::sort(s.known.begin(), s.known.end());
  require_both_sides(s);

  s.gamma0 = *req.gamma0;
  s.cluster_count = clusters.size();
  s.achieved_gamma = max_cross_similarity(sim, s.known, s.new_drugs);
  const double max_sim = max_pair_similarity(sim, indices);
  if (max_sim > 0.0) s.normalized_gamma0 = *req.gamma0 / max_sim;
  return s;
}

DrugSplit make_split(const Dataset& ds, const SimilarityMatrix* sim,
                     const SplitRequest& req) {
  switch (req.strategy) {
    case SplitStrategy::random: return random_split(ds, req);
    case SplitStrategy::frequency: return frequency_split(ds, req);
    case SplitStrategy::time: return time_split(ds, req);
    case SplitStrategy::cluster:
      if (!sim)
        throw Error(errc::bad_argument,
                    "cluster split needs a similarity matrix");
      return cluster_split(ds, *sim, req);
  }
  throw Error(errc::bad_argument, "unknown split strategy");
}

}  // namespace ddishift
