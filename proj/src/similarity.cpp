#include "ddishift/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

namespace ddishift {

PairCounts bit_counts(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width())
    throw Error(errc::width_mismatch,
                "fingerprint widths differ: " + std::to_string(a.width()) +
                    " vs " + std::to_string(b.width()));
  PairCounts c;
  const auto& wa = a.words();
  const auto& wb = b.words();
  for (std::size_t k = 0; k < wa.size(); ++k) {
    c.intersection += std::popcount(wa[k] & wb[k]);
    c.union_ += std::popcount(wa[k] | wb[k]);
  }
  return c;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  const PairCounts c = bit_counts(a, b);
  if (c.union_ == 0) return 0.0;
  return static_cast<double>(c.intersection) / static_cast<double>(c.union_);
}

bool ratio_exceeds(std::uint64_t intersection, std::uint64_t union_,
                   double threshold) {
  assert(union_ < (std::uint64_t{1} << 32) && intersection <= union_);
  if (union_ == 0) return false;
  if (threshold < 0) return true;
  if (threshold >= 1.0) return false;
  if (intersection == 0) return false;
  int e = 0;
  const double m = std::frexp(threshold, &e);  // threshold = m * 2^e, e <= 0
  // m carries at most 53 significand bits, so m * 2^53 is an exact integer.
  const auto sig = static_cast<unsigned __int128>(m * 9007199254740992.0);
  const int shift = 53 - e;
  // sig * union_ < 2^85; once the left side is shifted past that it wins.
  if (shift >= 86) return true;
  return (static_cast<unsigned __int128>(intersection) << shift) >
         sig * static_cast<unsigned __int128>(union_);
}

int compare_ratios(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                   std::uint64_t d) {
  if (b == 0) { a = 0; b = 1; }
  if (d == 0) { c = 0; d = 1; }
  const auto lhs = static_cast<unsigned __int128>(a) * d;
  const auto rhs = static_cast<unsigned __int128>(c) * b;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

std::size_t SimilarityMatrix::tri_index(std::size_t i, std::size_t j) const {
  // caller guarantees i < j < n
  const std::size_t n = ids_.size();
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::size_t SimilarityMatrix::index_of(const DrugId& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id)
    throw Error(errc::unknown_drug, "drug '" + id + "' not in similarity matrix");
  return static_cast<std::size_t>(it - ids_.begin());
}

float SimilarityMatrix::value(std::size_t i, std::size_t j) const {
  if (i == j) {
    if (!exact()) return 1.0f;
    const std::uint64_t* row = words_.data() + i * words_per_row_;
    std::uint64_t pc = 0;
    for (std::size_t k = 0; k < words_per_row_; ++k) pc += std::popcount(row[k]);
    return pc == 0 ? 0.0f : 1.0f;  // all-zero against itself is 0/0
  }
  if (i > j) std::swap(i, j);
  return tri_[tri_index(i, j)];
}

float SimilarityMatrix::value(const DrugId& a, const DrugId& b) const {
  return value(index_of(a), index_of(b));
}

double SimilarityMatrix::max_value() const {
  double best = 0.0;
  for (float v : tri_) best = std::max(best, static_cast<double>(v));
  return best;
}

PairCounts SimilarityMatrix::counts(std::size_t i, std::size_t j) const {
  if (!exact())
    throw Error(errc::bad_cache,
                "matrix was loaded from cache and has no exact counts");
  PairCounts c;
  const std::uint64_t* a = words_.data() + i * words_per_row_;
  const std::uint64_t* b = words_.data() + j * words_per_row_;
  for (std::size_t k = 0; k < words_per_row_; ++k) {
    c.intersection += std::popcount(a[k] & b[k]);
    c.union_ += std::popcount(a[k] | b[k]);
  }
  return c;
}

namespace {
constexpr char kMagic[4] = {'D', 'S', 'I', 'M'};
constexpr std::uint32_t kCacheVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
  // files are little-endian; all supported targets are
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw Error(errc::bad_cache, "truncated cache file " + path.string());
  return v;
}
}  // namespace

void SimilarityMatrix::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::io_failure, "cannot write " + path.string());
  out.write(kMagic, 4);
  put(out, kCacheVersion);
  put(out, static_cast<std::uint64_t>(ids_.size()));
  put(out, width_);
  out.write(reinterpret_cast<const char*>(tri_.data()),
            static_cast<std::streamsize>(tri_.size() * sizeof(float)));
  if (!out) throw Error(errc::io_failure, "short write to " + path.string());
}

SimilarityMatrix SimilarityMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_failure, "cannot read " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw Error(errc::bad_cache, "not a similarity cache: " + path.string());
  const auto version = get<std::uint32_t>(in, path);
  if (version != kCacheVersion)
    throw Error(errc::bad_cache, "unsupported cache version " +
                                     std::to_string(version) + " in " +
                                     path.string());
  const auto n = get<std::uint64_t>(in, path);
  const auto width = get<std::uint32_t>(in, path);

  SimilarityMatrix m;
  m.width_ = width;
  m.ids_.resize(n);  // anonymous until the caller attaches real ids
  m.tri_.resize(n < 2 ? 0 : n * (n - 1) / 2);
  if (!m.tri_.empty() &&
      !in.read(reinterpret_cast<char*>(m.tri_.data()),
               static_cast<std::streamsize>(m.tri_.size() * sizeof(float))))
    throw Error(errc::bad_cache, "truncated cache file " + path.string());
  return m;
}

void SimilarityMatrix::attach_ids(std::vector<DrugId> ids) {
  if (ids.size() != ids_.size())
    throw Error(errc::bad_cache,
                "cache holds " + std::to_string(ids_.size()) +
                    " drugs, id list has " + std::to_string(ids.size()));
  if (!std::is_sorted(ids.begin(), ids.end()) ||
      std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw Error(errc::bad_argument, "id list must be sorted and unique");
  ids_ = std::move(ids);
}

SimilarityMatrix pairwise_similarity(
    const std::map<DrugId, Fingerprint>& fingerprints, unsigned workers) {
  SimilarityMatrix m;
  if (fingerprints.empty()) return m;

  m.width_ = fingerprints.begin()->second.width();
  m.ids_.reserve(fingerprints.size());
  m.words_per_row_ = (m.width_ + 63) / 64;
  m.words_.reserve(fingerprints.size() * m.words_per_row_);
  for (const auto& [id, fp] : fingerprints) {
    if (fp.width() != m.width_)
      throw Error(errc::width_mismatch,
                  "fingerprint width differs for '" + id + "'");
    m.ids_.push_back(id);
    m.words_.insert(m.words_.end(), fp.words().begin(), fp.words().end());
  }

  const std::size_t n = m.ids_.size();
  if (n < 2) return m;
  m.tri_.assign(n * (n - 1) / 2, 0.0f);

  if (workers == 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, n > 1 ? n - 1 : 1));

  std::atomic<std::size_t> next_row{0};
  std::vector<std::uint64_t> zero_partials(workers, 0);

  auto work = [&](unsigned slot) {
    const std::size_t wpr = m.words_per_row_;
    std::uint64_t zeros = 0;
    for (;;) {
      const std::size_t i = next_row.fetch_add(1);
      if (i >= n - 1) break;
      const std::uint64_t* a = m.words_.data() + i * wpr;
      float* out = m.tri_.data() + m.tri_index(i, i + 1);
      for (std::size_t j = i + 1; j < n; ++j, ++out) {
        const std::uint64_t* b = m.words_.data() + j * wpr;
        std::uint64_t inter = 0, uni = 0;
        for (std::size_t k = 0; k < wpr; ++k) {
          inter += std::popcount(a[k] & b[k]);
          uni += std::popcount(a[k] | b[k]);
        }
        if (uni == 0) {
          ++zeros;
          *out = 0.0f;
        } else {
          *out = static_cast<float>(static_cast<double>(inter) /
                                    static_cast<double>(uni));
        }
      }
    }
    zero_partials[slot] = zeros;
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }
  for (std::uint64_t z : zero_partials) m.zero_pairs_ += z;
  return m;
}

double max_cross_similarity(const SimilarityMatrix& sim,
                            const std::vector<DrugId>& known,
                            const std::vector<DrugId>& new_drugs) {
  if (known.empty() || new_drugs.empty()) return 0.0;

  std::vector<std::size_t> ki, ni;
  ki.reserve(known.size());
  ni.reserve(new_drugs.size());
  for (const auto& id : known) ki.push_back(sim.index_of(id));
  for (const auto& id : new_drugs) ni.push_back(sim.index_of(id));

  if (sim.exact()) {
    PairCounts best{0, 1};
    for (std::size_t a : ki)
      for (std::size_t b : ni) {
        const PairCounts c = sim.counts(a, b);
        if (compare_ratios(c.intersection, c.union_, best.intersection,
                           best.union_) > 0)
          best = c;
      }
    if (best.union_ == 0) return 0.0;
    return static_cast<double>(best.intersection) /
           static_cast<double>(best.union_);
  }

  double bestv = 0.0;
  for (std::size_t a : ki)
    for (std::size_t b : ni)
      bestv = std::max(bestv, static_cast<double>(sim.value(a, b)));
  return bestv;
}

}  // namespace ddishift
