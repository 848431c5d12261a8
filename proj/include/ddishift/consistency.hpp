#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ddishift/types.hpp"

namespace ddishift {

// Score of one split scheme against the approval-time ground truth at one
// threshold year. A drug is misplaced when the scheme's side disagrees with
// the realistic side (year < threshold -> known, otherwise new); each
// misplaced drug costs |year - threshold|. index = max penalty over all
// schemes / own penalty; a zero penalty has no finite index and is reported
// as perfect (treated as +infinity in comparisons).
struct SchemeScore {
  double penalty = 0.0;
  std::optional<double> index;  // nullopt = perfect

  bool perfect() const noexcept { return !index.has_value(); }
};

struct ConsistencyResult {
  int threshold_year = 0;
  std::map<std::string, SchemeScore> schemes;
  std::size_t evaluated_drugs = 0;  // drugs with a year seen by any scheme
};

using NamedSplit = std::pair<std::string, DrugSplit>;

// Errors: no-approval-data when years is empty or disjoint from every
// scheme, threshold-out-of-range when threshold_year falls outside the
// evaluated drugs' year span.
ConsistencyResult consistency_index(const std::vector<NamedSplit>& schemes,
                                    const std::map<DrugId, int>& years,
                                    int threshold_year);

struct YearRange {
  int first = 0;
  int last = 0;  // inclusive
  int step = 1;
};

std::vector<ConsistencyResult> consistency_sweep(
    const std::vector<NamedSplit>& schemes, const std::map<DrugId, int>& years,
    const YearRange& range);

// CSV with columns threshold_year,scheme,penalty,index; perfect scores
// serialize index as the string "perfect".
void write_consistency_csv(std::ostream& out,
                           const std::vector<ConsistencyResult>& results);

}  // namespace ddishift
