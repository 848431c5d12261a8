#include "ddishift/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

namespace ddishift {

namespace {

using nlohmann::json;

// Applies fn(line_number, fields) to every data line. Blank lines and lines
// starting with '#' are skipped; a trailing '\r' is stripped.
template <class Fn>
void for_each_row(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_failure, "cannot read " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fields.clear();
    std::size_t start = 0;
    for (;;) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    fn(lineno, fields);
  }
}

void require_columns(const std::filesystem::path& path, std::size_t lineno,
                     const std::vector<std::string>& fields,
                     std::size_t want) {
  if (fields.size() != want)
    throw parse_error(errc::column_count, path.string(), lineno,
                      "expected " + std::to_string(want) + " columns, got " +
                          std::to_string(fields.size()));
  for (const auto& f : fields)
    if (f.empty())
      throw parse_error(errc::bad_token, path.string(), lineno, "empty field");
}

void require_id(const std::filesystem::path& path, std::size_t lineno,
                const std::string& token) {
  if (token.find(' ') != std::string::npos)
    throw parse_error(errc::bad_token, path.string(), lineno,
                      "id '" + token + "' contains whitespace");
}

int parse_int(const std::filesystem::path& path, std::size_t lineno,
              const std::string& token, const char* code) {
  int v = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw parse_error(code, path.string(), lineno,
                      "'" + token + "' is not an integer");
  return v;
}

double parse_double(const std::filesystem::path& path, std::size_t lineno,
                    const std::string& token, const char* code) {
  double v = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw parse_error(code, path.string(), lineno,
                      "'" + token + "' is not a number");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(errc::io_failure, "cannot write " + path.string());
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

struct RawTriplet {
  DrugId head, tail;
  std::string relation;
  std::optional<int> label;
};

std::vector<RawTriplet> load_raw_triplets(const std::filesystem::path& path,
                                          Mode mode,
                                          const std::string& column_order) {
  std::string order = column_order;
  std::sort(order.begin(), order.end());
  if (order != "hrt")
    throw Error(errc::bad_argument, "column order '" + column_order +
                                        "' is not a permutation of h, t, r");
  const std::size_t h = column_order.find('h');
  const std::size_t t = column_order.find('t');
  const std::size_t r = column_order.find('r');
  const std::size_t want = mode == Mode::multilabel ? 4 : 3;

  std::vector<RawTriplet> rows;
  for_each_row(path, [&](std::size_t lineno, const std::vector<std::string>& f) {
    require_columns(path, lineno, f, want);
    RawTriplet row{f[h], f[t], f[r], std::nullopt};
    require_id(path, lineno, row.head);
    require_id(path, lineno, row.tail);
    if (row.head == row.tail)
      throw parse_error(errc::self_loop, path.string(), lineno,
                        "self interaction on '" + row.head + "'");
    if (mode == Mode::multilabel) {
      const int label = parse_int(path, lineno, f[3], errc::bad_label);
      if (label != 0 && label != 1)
        throw parse_error(errc::bad_label, path.string(), lineno,
                          "label must be 0 or 1, got '" + f[3] + "'");
      row.label = label;
    }
    rows.push_back(std::move(row));
  });
  return rows;
}

TripletFile map_relations(std::vector<RawTriplet> rows,
                          const std::vector<std::string>* vocabulary,
                          const std::filesystem::path& path) {
  TripletFile out;
  std::map<std::string, RelationId> ids;
  if (vocabulary) {
    out.relations = *vocabulary;
    for (std::size_t i = 0; i < out.relations.size(); ++i)
      ids[out.relations[i]] = static_cast<RelationId>(i);
  } else {
    std::set<std::string> names;
    for (const auto& r : rows) names.insert(r.relation);
    out.relations.assign(names.begin(), names.end());
    for (std::size_t i = 0; i < out.relations.size(); ++i)
      ids[out.relations[i]] = static_cast<RelationId>(i);
  }

  std::set<std::tuple<DrugId, DrugId, RelationId, int>> seen;
  for (auto& r : rows) {
    const auto it = ids.find(r.relation);
    if (it == ids.end())
      throw Error(errc::bad_relation, path.string() + ": relation '" +
                                          r.relation + "' not in vocabulary");
    DdiTriplet t{std::move(r.head), std::move(r.tail), it->second, r.label};
    if (seen.emplace(t.head, t.tail, t.relation, t.label.value_or(-1)).second)
      out.triplets.push_back(std::move(t));
    else
      ++out.duplicates_dropped;
  }
  return out;
}

}  // namespace

std::string fingerprint_to_hex(const Fingerprint& fp) {
  static const char digits[] = "0123456789abcdef";
  const std::size_t nibbles = (fp.width() + 3) / 4;
  std::string hex(nibbles, '0');
  for (std::uint32_t i = 0; i < fp.width(); ++i)
    if (fp.test(i)) hex[i / 4] = digits[hex_value(hex[i / 4]) | (8 >> (i % 4))];
  return hex;
}

Fingerprint fingerprint_from_hex(const std::string& hex) {
  if (hex.empty() || hex.size() % 2 != 0)
    throw Error(errc::malformed_hex,
                "hex string must have even nonzero length, got " +
                    std::to_string(hex.size()) + " digits");
  Fingerprint fp(static_cast<std::uint32_t>(hex.size() * 4));
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const int v = hex_value(hex[d]);
    if (v < 0)
      throw Error(errc::malformed_hex,
                  std::string("invalid hex digit '") + hex[d] + "'");
    for (int b = 0; b < 4; ++b)
      if (v & (8 >> b)) fp.set(static_cast<std::uint32_t>(d * 4 + b));
  }
  return fp;
}

std::map<DrugId, Fingerprint> load_fingerprints(
    const std::filesystem::path& path) {
  std::map<DrugId, Fingerprint> out;
  std::optional<std::uint32_t> width;
  for_each_row(path, [&](std::size_t lineno, const std::vector<std::string>& f) {
    require_columns(path, lineno, f, 2);
    require_id(path, lineno, f[0]);
    Fingerprint fp;
    try {
      fp = fingerprint_from_hex(f[1]);
    } catch (const Error& e) {
      throw parse_error(errc::malformed_hex, path.string(), lineno, e.what());
    }
    if (width && fp.width() != *width)
      throw parse_error(errc::width_mismatch, path.string(), lineno,
                        "width " + std::to_string(fp.width()) +
                            " differs from " + std::to_string(*width));
    width = fp.width();
    if (!out.emplace(f[0], std::move(fp)).second)
      throw parse_error(errc::duplicate_drug, path.string(), lineno,
                        "duplicate drug '" + f[0] + "'");
  });
  return out;
}

void write_fingerprints(const std::filesystem::path& path,
                        const std::map<DrugId, Fingerprint>& fingerprints) {
  auto out = open_out(path);
  for (const auto& [id, fp] : fingerprints)
    out << id << '\t' << fingerprint_to_hex(fp) << '\n';
  if (!out) throw Error(errc::io_failure, "short write to " + path.string());
}

TripletFile load_triplets(const std::filesystem::path& path, Mode mode,
                          const std::string& column_order) {
  return map_relations(load_raw_triplets(path, mode, column_order), nullptr,
                       path);
}

void write_triplets(const std::filesystem::path& path,
                    const std::vector<DdiTriplet>& triplets,
                    const std::vector<std::string>& relations, Mode mode) {
  auto out = open_out(path);
  for (const auto& t : triplets) {
    out << t.head << '\t' << t.tail << '\t'
        << relations.at(static_cast<std::size_t>(t.relation));
    if (mode == Mode::multilabel) out << '\t' << t.label.value_or(0);
    out << '\n';
  }
  if (!out) throw Error(errc::io_failure, "short write to " + path.string());
}

std::map<DrugId, int> load_approval_years(const std::filesystem::path& path) {
  std::map<DrugId, int> out;
  for_each_row(path, [&](std::size_t lineno, const std::vector<std::string>& f) {
    require_columns(path, lineno, f, 2);
    require_id(path, lineno, f[0]);
    const int year = parse_int(path, lineno, f[1], errc::bad_year);
    if (!out.emplace(f[0], year).second)
      throw parse_error(errc::duplicate_drug, path.string(), lineno,
                        "duplicate drug '" + f[0] + "'");
  });
  return out;
}

void write_approval_years(const std::filesystem::path& path,
                          const std::map<DrugId, int>& years) {
  auto out = open_out(path);
  for (const auto& [id, year] : years) out << id << '\t' << year << '\n';
  if (!out) throw Error(errc::io_failure, "short write to " + path.string());
}

std::vector<PredictionRecord> load_predictions(
    const std::filesystem::path& path, Mode mode,
    std::vector<std::string>& relations) {
  std::map<std::string, RelationId> ids;
  for (std::size_t i = 0; i < relations.size(); ++i)
    ids[relations[i]] = static_cast<RelationId>(i);

  const std::size_t want = mode == Mode::multilabel ? 5 : 3;
  std::vector<PredictionRecord> out;
  for_each_row(path, [&](std::size_t lineno, const std::vector<std::string>& f) {
    require_columns(path, lineno, f, want);
    PredictionRecord rec;
    rec.head = f[0];
    rec.tail = f[1];
    auto it = ids.find(f[2]);
    if (it == ids.end()) {
      relations.push_back(f[2]);
      it = ids.emplace(f[2], static_cast<RelationId>(relations.size() - 1))
               .first;
    }
    rec.relation = it->second;
    if (mode == Mode::multilabel) {
      rec.score = parse_double(path, lineno, f[3], errc::bad_score);
      const int gold = parse_int(path, lineno, f[4], errc::bad_label);
      if (gold != 0 && gold != 1)
        throw parse_error(errc::bad_label, path.string(), lineno,
                          "gold label must be 0 or 1");
      rec.gold_label = gold;
    }
    out.push_back(std::move(rec));
  });
  return out;
}

Dataset load_dataset(const FileManifest& manifest, LoadReport* report) {
  Dataset ds;
  ds.mode = manifest.mode;

  TripletFile tf =
      load_triplets(manifest.triplets, manifest.mode, manifest.column_order);
  ds.triplets = std::move(tf.triplets);
  ds.relations = std::move(tf.relations);
  if (report) report->duplicate_triplets = tf.duplicates_dropped;

  std::set<DrugId> universe;
  for (const auto& t : ds.triplets) {
    universe.insert(t.head);
    universe.insert(t.tail);
  }
  if (manifest.fingerprints) {
    ds.fingerprints = load_fingerprints(*manifest.fingerprints);
    for (const auto& [id, fp] : ds.fingerprints) universe.insert(id);
  }
  ds.drugs.assign(universe.begin(), universe.end());

  if (manifest.approval) {
    auto years = load_approval_years(*manifest.approval);
    for (const auto& [id, year] : years) {
      if (ds.has_drug(id))
        ds.approval_years.emplace(id, year);
      else if (report)
        ++report->foreign_approval_rows;
    }
  }
  return ds;
}

namespace {

json split_to_json(const DrugSplit& split) {
  json j;
  j["format_version"] = 1;
  j["strategy"] = to_string(split.strategy);
  j["seed"] = split.seed;
  j["rng"] = split.rng;
  j["counts"] = {{"known", split.known.size()},
                 {"new", split.new_drugs.size()},
                 {"excluded", split.excluded.size()}};
  if (split.gamma0) j["gamma0"] = *split.gamma0;
  if (split.normalized_gamma0) j["normalized_gamma0"] = *split.normalized_gamma0;
  if (split.achieved_gamma) j["achieved_gamma"] = *split.achieved_gamma;
  if (split.cluster_count) j["cluster_count"] = *split.cluster_count;
  if (split.threshold_year) j["threshold_year"] = *split.threshold_year;
  j["known"] = split.known;
  j["new"] = split.new_drugs;
  j["excluded"] = split.excluded;
  return j;
}

DrugSplit split_from_json(const json& j, const std::string& origin) {
  auto fail = [&origin](const std::string& what) -> Error {
    return Error(errc::bad_split_file, origin + ": " + what);
  };
  try {
    if (j.at("format_version").get<int>() != 1)
      throw fail("unsupported format_version");
    DrugSplit s;
    try {
      s.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    } catch (const Error&) {
      throw fail("unknown strategy '" + j.at("strategy").get<std::string>() + "'");
    }
    s.seed = j.at("seed").get<std::uint64_t>();
    s.rng = j.value("rng", std::string());
    s.known = j.at("known").get<std::vector<DrugId>>();
    s.new_drugs = j.at("new").get<std::vector<DrugId>>();
    s.excluded = j.value("excluded", std::vector<DrugId>{});
    if (j.contains("gamma0")) s.gamma0 = j["gamma0"].get<double>();
    if (j.contains("normalized_gamma0"))
      s.normalized_gamma0 = j["normalized_gamma0"].get<double>();
    if (j.contains("achieved_gamma"))
      s.achieved_gamma = j["achieved_gamma"].get<double>();
    if (j.contains("cluster_count"))
      s.cluster_count = j["cluster_count"].get<std::size_t>();
    if (j.contains("threshold_year"))
      s.threshold_year = j["threshold_year"].get<int>();

    for (auto* list : {&s.known, &s.new_drugs, &s.excluded})
      std::sort(list->begin(), list->end());
    const auto& counts = j.at("counts");
    if (counts.at("known").get<std::size_t>() != s.known.size() ||
        counts.at("new").get<std::size_t>() != s.new_drugs.size() ||
        counts.at("excluded").get<std::size_t>() != s.excluded.size())
      throw fail("counts disagree with id lists");
    return s;
  } catch (const json::exception& e) {
    throw fail(e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_failure, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(errc::bad_split_file, path.string() + ": " + e.what());
  }
}

}  // namespace

void write_drug_split(const std::filesystem::path& path,
                      const DrugSplit& split) {
  auto out = open_out(path);
  out << split_to_json(split).dump(2) << '\n';
  if (!out) throw Error(errc::io_failure, "short write to " + path.string());
}

DrugSplit load_drug_split(const std::filesystem::path& path) {
  return split_from_json(read_json_file(path), path.string());
}

void write_task_split(const std::filesystem::path& dir, const TaskSplit& tasks,
                      const std::vector<std::string>& relations, Mode mode) {
  std::filesystem::create_directories(dir);
  write_triplets(dir / "train.tsv", tasks.train, relations, mode);
  write_triplets(dir / "s1_test.tsv", tasks.s1_test, relations, mode);
  write_triplets(dir / "s2_test.tsv", tasks.s2_test, relations, mode);

  json j = split_to_json(tasks.drug_split);
  j["task_counts"] = {{"train", tasks.train.size()},
                      {"s1_test", tasks.s1_test.size()},
                      {"s2_test", tasks.s2_test.size()},
                      {"dropped", tasks.dropped}};
  j["relations"] = relations;
  auto out = open_out(dir / "split.json");
  out << j.dump(2) << '\n';
  if (!out)
    throw Error(errc::io_failure, "short write to " + (dir / "split.json").string());
}

TaskSplit load_task_split(const std::filesystem::path& dir, Mode mode,
                          std::vector<std::string>* relations) {
  const json j = read_json_file(dir / "split.json");
  TaskSplit tasks;
  tasks.drug_split = split_from_json(j, (dir / "split.json").string());

  std::vector<std::string> vocab;
  try {
    vocab = j.at("relations").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(errc::bad_split_file,
                (dir / "split.json").string() + ": " + e.what());
  }

  auto read = [&](const char* name) {
    return map_relations(load_raw_triplets(dir / name, mode, "htr"), &vocab,
                         dir / name)
        .triplets;
  };
  tasks.train = read("train.tsv");
  tasks.s1_test = read("s1_test.tsv");
  tasks.s2_test = read("s2_test.tsv");
  if (j.contains("task_counts")) {
    const auto& counts = j["task_counts"];
    if (counts.value("train", tasks.train.size()) != tasks.train.size() ||
        counts.value("s1_test", tasks.s1_test.size()) != tasks.s1_test.size() ||
        counts.value("s2_test", tasks.s2_test.size()) != tasks.s2_test.size())
      throw Error(errc::bad_split_file,
                  (dir / "split.json").string() +
                      ": task_counts disagree with the task files");
    tasks.dropped = counts.value("dropped", std::size_t{0});
  }
  if (relations) *relations = std::move(vocab);
  return tasks;
}

std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace ddishift
