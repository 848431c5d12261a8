#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ddishift {

// Every randomized routine in the toolkit draws from this wrapper and from
// nothing else. Raw mt19937_64 output plus explicit rejection sampling and an
// own Fisher-Yates keep byte streams identical across standard libraries;
// std::uniform_int_distribution and std::shuffle are not portable that way.
inline constexpr std::string_view kRngName = "mt19937_64/fy/v1";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return unit() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ddishift
