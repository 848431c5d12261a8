#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ddishift/similarity.hpp"
#include "ddishift/types.hpp"

namespace ddishift {

struct SplitRequest {
  SplitStrategy strategy = SplitStrategy::random;
  std::uint64_t seed = 42;
  double new_fraction = 0.2;
  double fraction_tolerance = 0.05;     // cluster strategy: |actual - target| / n
  std::optional<double> gamma0;         // required for cluster
  std::optional<int> threshold_year;    // required for time
};

struct ClusterSet {
  std::vector<std::vector<DrugId>> clusters;  // members sorted; clusters by first member
  double gamma0 = 0.0;
};

// Connected components of the similarity graph with edges S > gamma0
// (strictly greater). Exact integer threshold tests when the matrix carries
// fingerprints. Any two drugs in different clusters have similarity <= gamma0.
ClusterSet build_clusters(const SimilarityMatrix& sim, double gamma0);

// Whole clusters are dealt to the new side until the target size is reached;
// clusters that would overshoot are skipped. Up to 32 reshuffles before the
// request is declared unsatisfiable-fraction. Guarantees
// max cross-set similarity <= gamma0.
DrugSplit cluster_split(const Dataset& ds, const SimilarityMatrix& sim,
                        const SplitRequest& req);

// Seeded shuffle; exactly round-half-even(new_fraction * n) drugs become new.
DrugSplit random_split(const Dataset& ds, const SplitRequest& req);

// Drugs with the lowest triplet participation become new, ties broken by id.
// Deterministic; the seed is recorded but unused.
DrugSplit frequency_split(const Dataset& ds, const SplitRequest& req);

// Approval year < threshold_year goes to known, >= threshold_year to new.
// Drugs without a year are excluded and listed. Errors: no-approval-data
// when no drug has a year, degenerate-split when either side ends up empty.
DrugSplit time_split(const Dataset& ds, const SplitRequest& req);

// Dispatch on req.strategy. sim may be null for every strategy but cluster.
DrugSplit make_split(const Dataset& ds, const SimilarityMatrix* sim,
                     const SplitRequest& req);

// Round-half-to-even of a nonnegative value; shared by every fractional
// set-size computation in the toolkit.
std::size_t round_half_even(double x);

}  // namespace ddishift
