#pragma once

#include <cstdint>

#include "ddishift/types.hpp"

namespace ddishift {

// Synthetic dataset with the structure the real corpora show: chemistry
// arrives in epochs, early scaffolds are all related to each other, the
// newest ones are not. Centroid fingerprints define families; the families
// of the first epochs - 2 epochs are variations of one shared base pattern
// (so they weld into a single component at mid thresholds), the last two
// epochs are independent. Drugs perturb their centroid, approval years sit
// near the epoch year, and the relation of a pair is the head's family id
// mixed with two per-drug quirk bits, plus label noise.
struct SynthConfig {
  std::size_t drug_count = 150;
  std::size_t cluster_count = 5;  // centroid families
  std::size_t epoch_count = 5;
  std::uint32_t width = 512;
  std::uint64_t seed = 42;

  double bit_density = 0.3;   // P(bit set) in base/novel centroids
  double core_flip = 0.07;    // base -> old-core centroid flip rate
  double drug_flip = 0.03;    // centroid -> drug flip rate
  double quirk_prob = 0.25;   // P(drug quirk bit)
  double label_noise = 0.1;   // P(relation replaced uniformly)

  int start_year = 1980;
  int year_step = 10;
  int year_jitter = 2;        // uniform in [-jitter, +jitter]
};

// Multiclass dataset over all unordered drug pairs with seeded orientation.
// Fingerprints and approval years cover every drug.
Dataset generate_synthetic(const SynthConfig& cfg);

}  // namespace ddishift
