#include "ddishift/consistency.hpp"

#include <algorithm>
#include <set>

#include "ddishift/dataio.hpp"

namespace ddishift {

ConsistencyResult consistency_index(const std::vector<NamedSplit>& schemes,
                                    const std::map<DrugId, int>& years,
                                    int threshold_year) {
  if (schemes.empty())
    throw Error(errc::bad_argument, "no split schemes to score");

  std::set<DrugId> evaluated;
  int min_year = 0, max_year = 0;
  bool any = false;
  for (const auto& [name, split] : schemes) {
    for (const auto* list : {&split.known, &split.new_drugs}) {
      for (const auto& d : *list) {
        const auto it = years.find(d);
        if (it == years.end()) continue;
        evaluated.insert(d);
        if (!any) {
          min_year = max_year = it->second;
          any = true;
        } else {
          min_year = std::min(min_year, it->second);
          max_year = std::max(max_year, it->second);
        }
      }
    }
  }
  if (!any)
    throw Error(errc::no_approval_data,
                "no scheme drug has an approval year");
  if (threshold_year < min_year || threshold_year > max_year)
    throw Error(errc::threshold_out_of_range,
                "threshold " + std::to_string(threshold_year) +
                    " outside observed years [" + std::to_string(min_year) +
                    ", " + std::to_string(max_year) + "]");

  ConsistencyResult res;
  res.threshold_year = threshold_year;
  res.evaluated_drugs = evaluated.size();

  double max_penalty = 0.0;
  for (const auto& [name, split] : schemes) {
    double p = 0.0;
    for (const auto& d : split.known) {
      const auto it = years.find(d);
      if (it != years.end() && it->second >= threshold_year)
        p += it->second - threshold_year;
    }
    for (const auto& d : split.new_drugs) {
      const auto it = years.find(d);
      if (it != years.end() && it->second < threshold_year)
        p += threshold_year - it->second;
    }
    res.schemes[name].penalty = p;
    max_penalty = std::max(max_penalty, p);
  }
  for (auto& [name, score] : res.schemes)
    if (score.penalty > 0.0) score.index = max_penalty / score.penalty;
  return res;
}

std::vector<ConsistencyResult> consistency_sweep(
    const std::vector<NamedSplit>& schemes, const std::map<DrugId, int>& years,
    const YearRange& range) {
  if (range.step <= 0)
    throw Error(errc::bad_argument, "year step must be positive");
  if (range.last < range.first)
    throw Error(errc::bad_argument, "year range is empty");
  std::vector<ConsistencyResult> out;
  for (int y = range.first; y <= range.last; y += range.step)
    out.push_back(consistency_index(schemes, years, y));
  return out;
}

void write_consistency_csv(std::ostream& out,
                           const std::vector<ConsistencyResult>& results) {
  out << "threshold_year,scheme,penalty,index\n";
  for (const auto& res : results)
    for (const auto& [name, score] : res.schemes) {
      out << res.threshold_year << ',' << name << ','
          << format_fixed6(score.penalty) << ',';
      if (score.perfect())
        out << "perfect";
      else
        out << format_fixed6(*score.index);
      out << '\n';
    }
}

}  // namespace ddishift
