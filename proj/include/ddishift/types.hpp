#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddishift/errors.hpp"

namespace ddishift {

using DrugId = std::string;       // opaque token, no whitespace
using RelationId = std::int32_t;  // index into the relation vocabulary

enum class Mode { multiclass, multilabel };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& text);

// Packed binary fingerprint. Bit i lives in words[i / 64]; within a word,
// bit 0 of the fingerprint is the most significant bit, matching the hex
// file encoding (first hex digit = bits 0..3).
class Fingerprint {
 public:
  Fingerprint() = default;
  explicit Fingerprint(std::uint32_t width_bits)
      : width_(width_bits), words_((width_bits + 63) / 64, 0) {}

  std::uint32_t width() const noexcept { return width_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  bool test(std::uint32_t i) const {
    return (words_[i / 64] >> (63 - (i % 64))) & 1u;
  }
  void set(std::uint32_t i, bool value = true) {
    const std::uint64_t mask = std::uint64_t{1} << (63 - (i % 64));
    if (value)
      words_[i / 64] |= mask;
    else
      words_[i / 64] &= ~mask;
  }

  std::uint64_t popcount() const noexcept {
    std::uint64_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  bool operator==(const Fingerprint&) const = default;

 private:
  std::uint32_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

// One interaction record. In multilabel mode label is 0 or 1; in multiclass
// mode label is absent and the relation itself is the class.
struct DdiTriplet {
  DrugId head;
  DrugId tail;
  RelationId relation = 0;
  std::optional<int> label;

  bool operator==(const DdiTriplet&) const = default;
};

struct Dataset {
  Mode mode = Mode::multiclass;
  std::vector<DrugId> drugs;           // sorted, unique
  std::vector<std::string> relations;  // vocabulary; index = RelationId
  std::vector<DdiTriplet> triplets;
  std::map<DrugId, Fingerprint> fingerprints;
  std::map<DrugId, int> approval_years;  // may cover only part of drugs

  bool has_drug(const DrugId& id) const;
};

struct ValidationIssue {
  std::string code;
  std::string detail;
};

struct ValidationSummary {
  std::size_t drug_count = 0;
  std::size_t relation_count = 0;  // distinct relation ids used by triplets
  std::size_t triplet_count = 0;
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return issues.empty(); }
};

// Checks the cross-references a loaded Dataset must satisfy: endpoints exist,
// relation ids fit the vocabulary, labels match the mode, fingerprint widths
// agree, approval years are sane.
ValidationSummary validate_dataset(const Dataset& ds);

enum class SplitStrategy { random, frequency, time, cluster };

const char* to_string(SplitStrategy s);
SplitStrategy strategy_from_string(const std::string& text);

// A partition of the drug universe into known and new sets. excluded holds
// drugs a strategy could not place (time split without an approval year);
// known + new_drugs + excluded covers every drug handed to the splitter.
struct DrugSplit {
  std::vector<DrugId> known;      // sorted
  std::vector<DrugId> new_drugs;  // sorted
  std::vector<DrugId> excluded;   // sorted

  SplitStrategy strategy = SplitStrategy::random;
  std::uint64_t seed = 0;
  std::string rng;  // PRNG scheme identifier, e.g. "mt19937_64/fy/v1"

  std::optional<double> gamma0;            // cluster strategy only
  std::optional<double> normalized_gamma0; // gamma0 / max observed similarity
  std::optional<double> achieved_gamma;    // realized max cross-set similarity
  std::optional<std::size_t> cluster_count;
  std::optional<int> threshold_year;       // time strategy only

  bool is_known(const DrugId& id) const;
  bool is_new(const DrugId& id) const;
  bool is_excluded(const DrugId& id) const;

  bool operator==(const DrugSplit&) const = default;
};

// Triplet-level view of a drug split. dropped counts triplets removed
// because an endpoint was excluded from the split.
struct TaskSplit {
  std::vector<DdiTriplet> train;    // both endpoints known
  std::vector<DdiTriplet> s1_test;  // exactly one endpoint new
  std::vector<DdiTriplet> s2_test;  // both endpoints new
  DrugSplit drug_split;
  std::size_t dropped = 0;
};

struct PredictionRecord {
  DrugId head;
  DrugId tail;
  RelationId relation = 0;
  std::optional<double> score;   // multilabel mode
  std::optional<int> gold_label; // multilabel mode
};

}  // namespace ddishift
