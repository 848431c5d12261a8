#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddishift {

// All toolkit failures carry a stable machine-readable code next to the
// human-readable message. Tests and the CLI dispatch on code(), never on
// message text.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* width_mismatch = "width-mismatch";
inline constexpr const char* malformed_hex = "malformed-hex";
inline constexpr const char* duplicate_drug = "duplicate-drug";
inline constexpr const char* duplicate_triplet = "duplicate-triplet";
inline constexpr const char* column_count = "column-count";
inline constexpr const char* bad_label = "bad-label";
inline constexpr const char* bad_year = "bad-year";
inline constexpr const char* bad_score = "bad-score";
inline constexpr const char* bad_relation = "bad-relation";
inline constexpr const char* bad_token = "bad-token";
inline constexpr const char* self_loop = "self-loop";
inline constexpr const char* io_failure = "io-failure";
inline constexpr const char* bad_cache = "bad-cache";
inline constexpr const char* bad_split_file = "bad-split-file";
inline constexpr const char* unknown_drug = "unknown-drug";
inline constexpr const char* missing_fingerprint = "missing-fingerprint";
inline constexpr const char* unsatisfiable_fraction = "unsatisfiable-fraction";
inline constexpr const char* degenerate_split = "degenerate-split";
inline constexpr const char* no_approval_data = "no-approval-data";
inline constexpr const char* threshold_out_of_range = "threshold-out-of-range";
inline constexpr const char* empty_train = "empty-train";
inline constexpr const char* sampling_exhausted = "sampling-exhausted";
inline constexpr const char* length_mismatch = "length-mismatch";
inline constexpr const char* single_class = "single-class";
inline constexpr const char* no_positives = "no-positives";
inline constexpr const char* missing_prediction = "missing-prediction";
inline constexpr const char* duplicate_prediction = "duplicate-prediction";
inline constexpr const char* bad_argument = "bad-argument";
}  // namespace errc

// Error anchored to a 1-based line of a named input file.
inline Error parse_error(const char* code, const std::string& path,
                         std::size_t line, const std::string& what) {
  return Error(code, path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace ddishift
