#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ddishift/types.hpp"

namespace ddishift {

// Routes every triplet by its endpoints: both known -> train, exactly one
// new -> s1_test, both new -> s2_test. Triplets touching an excluded drug
// are dropped and counted. Endpoints outside the split raise unknown-drug;
// an empty train set raises empty-train.
TaskSplit assemble_tasks(const Dataset& ds, const DrugSplit& split);

// Moves a seeded round-half-even share of train into a validation list.
// Returns (reduced train, validation).
std::pair<std::vector<DdiTriplet>, std::vector<DdiTriplet>> carve_validation(
    const std::vector<DdiTriplet>& train, double fraction, std::uint64_t seed);

// Corrupts one endpoint per negative, uniformly head or tail. When a split
// is given the replacement is drawn from the corrupted endpoint's own side
// (known stays known, new stays new) so negatives do not leak across the
// boundary. Candidates colliding with any positive of the same relation, or
// forming a self-loop, are rejected; 1000 failed draws for one negative
// raise sampling-exhausted. Negatives carry label 0.
std::vector<DdiTriplet> sample_negatives(const Dataset& ds,
                                         const std::vector<DdiTriplet>& positives,
                                         std::size_t per_positive,
                                         std::uint64_t seed,
                                         const DrugSplit* split = nullptr);

struct DatasetStats {
  std::size_t drug_count = 0;
  std::size_t relation_count = 0;   // distinct ids used by triplets
  std::size_t vocabulary_size = 0;  // full vocabulary
  std::size_t triplet_count = 0;
  std::map<RelationId, std::size_t> relation_frequency;

  std::size_t types_within(std::size_t lo, std::size_t hi) const;
};

DatasetStats dataset_stats(const Dataset& ds);

// Keeps triplets whose relation frequency lies in [lo, hi]; the drug
// universe, fingerprints and approval years shrink to the surviving
// endpoints. Relation ids stay stable (the vocabulary is untouched).
Dataset filter_type_frequency(const Dataset& ds, std::size_t lo,
                              std::size_t hi);

}  // namespace ddishift
