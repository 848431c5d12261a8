#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddishift/types.hpp"

namespace ddishift {

// On-disk formats are tab-separated text with '#' comment lines and blank
// lines skipped. All parse errors name the file and 1-based line.

// Lowercase hex, even length, bit 0 of the fingerprint = most significant
// bit of the first byte. Width is 4 bits per hex digit.
std::string fingerprint_to_hex(const Fingerprint& fp);
Fingerprint fingerprint_from_hex(const std::string& hex);

// fingerprints.tsv: drug_id <TAB> hex_bits. Rejects width disagreements,
// odd-length or non-hex strings, duplicate drug ids.
std::map<DrugId, Fingerprint> load_fingerprints(
    const std::filesystem::path& path);
void write_fingerprints(const std::filesystem::path& path,
                        const std::map<DrugId, Fingerprint>& fingerprints);

struct TripletFile {
  std::vector<DdiTriplet> triplets;     // file order, exact duplicates removed
  std::size_t duplicates_dropped = 0;
  std::vector<std::string> relations;   // vocabulary inferred from the file
};

// triplets.tsv: head <TAB> tail <TAB> relation (multiclass) plus a trailing
// 0/1 label column in multilabel mode. column_order permutes the first three
// columns: a string over {h, t, r}, default "htr". Relation tokens are kept
// as vocabulary names; ids are assigned by sorted token order. Self-loops
// are rejected.
TripletFile load_triplets(const std::filesystem::path& path, Mode mode,
                          const std::string& column_order = "htr");
void write_triplets(const std::filesystem::path& path,
                    const std::vector<DdiTriplet>& triplets,
                    const std::vector<std::string>& relations, Mode mode);

// approval.tsv: drug_id <TAB> year. Rejects non-integer years and duplicates.
std::map<DrugId, int> load_approval_years(const std::filesystem::path& path);
void write_approval_years(const std::filesystem::path& path,
                          const std::map<DrugId, int>& years);

// predictions.tsv. Multiclass: head <TAB> tail <TAB> relation. Multilabel:
// head <TAB> tail <TAB> relation <TAB> score <TAB> gold_label. Relation
// names missing from `relations` are appended with fresh ids, so a model
// predicting a type outside the gold vocabulary scores as wrong instead of
// failing to parse.
std::vector<PredictionRecord> load_predictions(
    const std::filesystem::path& path, Mode mode,
    std::vector<std::string>& relations);

struct FileManifest {
  std::filesystem::path triplets;
  std::optional<std::filesystem::path> fingerprints;
  std::optional<std::filesystem::path> approval;
  Mode mode = Mode::multiclass;
  std::string column_order = "htr";
};

struct LoadReport {
  std::size_t duplicate_triplets = 0;
  std::size_t foreign_approval_rows = 0;  // approval ids outside the universe
};

// Composes the individual loaders into a Dataset. The drug universe is the
// union of triplet endpoints and fingerprint keys; approval rows for other
// ids are dropped and counted.
Dataset load_dataset(const FileManifest& manifest, LoadReport* report = nullptr);

// split.json round-trip. Carries format_version, strategy, seed, rng, the
// strategy parameters and the sorted id lists, so a split file alone is
// enough to rebuild the partition.
void write_drug_split(const std::filesystem::path& path, const DrugSplit& split);
DrugSplit load_drug_split(const std::filesystem::path& path);

// Task directory: train.tsv, s1_test.tsv, s2_test.tsv and split.json with
// per-file counts folded in.
void write_task_split(const std::filesystem::path& dir, const TaskSplit& tasks,
                      const std::vector<std::string>& relations, Mode mode);
TaskSplit load_task_split(const std::filesystem::path& dir, Mode mode,
                          std::vector<std::string>* relations = nullptr);

// Fixed 6-decimal rendering used by every CSV writer.
std::string format_fixed6(double v);

}  // namespace ddishift
