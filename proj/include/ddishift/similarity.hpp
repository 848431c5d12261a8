#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "ddishift/types.hpp"

namespace ddishift {

struct PairCounts {
  std::uint64_t intersection = 0;
  std::uint64_t union_ = 0;
};

// Popcount of AND and OR over the packed words. Throws width-mismatch when
// the fingerprints disagree on width.
PairCounts bit_counts(const Fingerprint& a, const Fingerprint& b);

// Tanimoto coefficient |A & B| / |A | B| as one integer division at the end.
// Two all-zero fingerprints compare as 0.0 (maximally dissimilar).
double tanimoto(const Fingerprint& a, const Fingerprint& b);

// Exact test of intersection / union_ > threshold without forming the
// quotient. union_ == 0 never exceeds. Valid for any finite threshold.
bool ratio_exceeds(std::uint64_t intersection, std::uint64_t union_,
                   double threshold);

// Exact three-way comparison of a/b vs c/d for nonnegative fractions with
// nonzero denominators treated as 0/1 when the denominator is zero.
// Returns <0, 0, >0.
int compare_ratios(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                   std::uint64_t d);

// Pairwise Tanimoto over a drug universe, drugs ordered by id. The upper
// triangle is stored as float32 (the full Drugbank matrix stays near 6 MB).
// Fresh matrices also keep the packed fingerprint words so threshold tests
// and cross-set maxima can run on exact integer counts; matrices loaded from
// a cache file have only the float32 values.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;

  std::size_t size() const noexcept { return ids_.size(); }
  std::uint32_t width() const noexcept { return width_; }
  const std::vector<DrugId>& ids() const noexcept { return ids_; }
  bool exact() const noexcept { return !words_.empty(); }

  // Count of pairs where both fingerprints were all-zero; such pairs score
  // 0.0 and callers may want to warn.
  std::uint64_t zero_pairs() const noexcept { return zero_pairs_; }

  std::size_t index_of(const DrugId& id) const;  // throws unknown-drug

  float value(std::size_t i, std::size_t j) const;
  float value(const DrugId& a, const DrugId& b) const;
  double max_value() const;  // max over stored off-diagonal entries, 0 if n<2

  // Exact counts for pair (i, j). Requires exact().
  PairCounts counts(std::size_t i, std::size_t j) const;

  void save(const std::filesystem::path& path) const;

  // The cache stores no ids; a loaded matrix is anonymous until the caller
  // attaches the sorted drug list it was built from.
  static SimilarityMatrix load(const std::filesystem::path& path);
  void attach_ids(std::vector<DrugId> ids);

  friend SimilarityMatrix pairwise_similarity(
      const std::map<DrugId, Fingerprint>& fingerprints, unsigned workers);

 private:
  std::vector<DrugId> ids_;              // sorted
  std::vector<float> tri_;               // upper triangle, row-major, i < j
  std::vector<std::uint64_t> words_;     // n rows of words_per_row_, or empty
  std::size_t words_per_row_ = 0;
  std::uint32_t width_ = 0;
  std::uint64_t zero_pairs_ = 0;

  std::size_t tri_index(std::size_t i, std::size_t j) const;
};

// Builds the matrix with `workers` threads (0 = hardware concurrency).
// The result is identical for every worker count.
SimilarityMatrix pairwise_similarity(
    const std::map<DrugId, Fingerprint>& fingerprints, unsigned workers = 0);

// Largest similarity across the known/new boundary. Uses exact integer
// comparisons when the matrix retains fingerprints. 0.0 when either side is
// empty. Throws unknown-drug for ids outside the matrix.
double max_cross_similarity(const SimilarityMatrix& sim,
                            const std::vector<DrugId>& known,
                            const std::vector<DrugId>& new_drugs);

}  // namespace ddishift
