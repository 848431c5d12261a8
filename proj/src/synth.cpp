#include "ddishift/synth.hpp"

#include <algorithm>
#include <string>

#include "ddishift/rng.hpp"

namespace ddishift {

namespace {

Fingerprint random_print(Rng& rng, std::uint32_t width, double density) {
  Fingerprint fp(width);
  for (std::uint32_t i = 0; i < width; ++i)
    if (rng.coin(density)) fp.set(i);
  return fp;
}

Fingerprint flipped(Rng& rng, const Fingerprint& base, double rate) {
  Fingerprint fp = base;
  for (std::uint32_t i = 0; i < fp.width(); ++i)
    if (rng.coin(rate)) fp.set(i, !fp.test(i));
  return fp;
}

std::string padded(const char* prefix, std::size_t i, std::size_t total) {
  std::size_t digits = 1;
  for (std::size_t v = total > 0 ? total - 1 : 0; v >= 10; v /= 10) ++digits;
  std::string num = std::to_string(i);
  return prefix + std::string(digits - std::min(digits, num.size()), '0') + num;
}

}  // namespace

Dataset generate_synthetic(const SynthConfig& cfg) {
  if (cfg.drug_count < 2 || cfg.cluster_count == 0 || cfg.epoch_count == 0 ||
      cfg.width == 0 || cfg.year_jitter < 0)
    throw Error(errc::bad_argument, "degenerate generator configuration");
  if (cfg.cluster_count > cfg.drug_count)
    throw Error(errc::bad_argument, "more clusters than drugs");

  Rng rng(cfg.seed);
  Dataset ds;
  ds.mode = Mode::multiclass;

  // family centroids; all but the last two epochs descend from one base
  const Fingerprint base = random_print(rng, cfg.width, cfg.bit_density);
  const std::size_t old_epochs = cfg.epoch_count >= 3 ? cfg.epoch_count - 2 : 0;
  std::vector<Fingerprint> centroids;
  std::vector<std::size_t> centroid_epoch(cfg.cluster_count);
  centroids.reserve(cfg.cluster_count);
  for (std::size_t c = 0; c < cfg.cluster_count; ++c) {
    const std::size_t epoch = c * cfg.epoch_count / cfg.cluster_count;
    centroid_epoch[c] = epoch;
    if (epoch < old_epochs)
      centroids.push_back(flipped(rng, base, cfg.core_flip));
    else
      centroids.push_back(random_print(rng, cfg.width, cfg.bit_density));
  }

  // drugs in contiguous family blocks; ids zero-padded so lexicographic
  // order matches generation order
  const std::size_t n = cfg.drug_count;
  std::vector<std::size_t> family(n);
  std::vector<int> quirk(n);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t c = d * cfg.cluster_count / n;
    family[d] = c;
    const DrugId id = padded("D", d, n);
    ds.drugs.push_back(id);
    ds.fingerprints.emplace(id, flipped(rng, centroids[c], cfg.drug_flip));
    const int year = cfg.start_year +
                     static_cast<int>(centroid_epoch[c]) * cfg.year_step +
                     static_cast<int>(rng.below(2 * cfg.year_jitter + 1)) -
                     cfg.year_jitter;
    ds.approval_years.emplace(id, year);
    quirk[d] = rng.coin(cfg.quirk_prob) ? 1 : 0;
  }

  const std::size_t vocab = 3 * cfg.cluster_count;
  for (std::size_t r = 0; r < vocab; ++r)
    ds.relations.push_back(padded("R", r, vocab));

  // one triplet per unordered pair, orientation by coin; the relation mixes
  // the head family with both quirk bits, then label noise
  for (std::size_t u = 0; u + 1 < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      std::size_t h = u, t = v;
      if (rng.coin(0.5)) std::swap(h, t);
      std::size_t rel = 3 * family[h] + quirk[h] + quirk[t];
      if (rng.coin(cfg.label_noise)) rel = rng.below(vocab);
      ds.triplets.push_back(
          {ds.drugs[h], ds.drugs[t], static_cast<RelationId>(rel), {}});
    }
  return ds;
}

}  // namespace ddishift
