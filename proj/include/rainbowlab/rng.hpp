#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace rainbowlab {

/// SplitMix64 run in counter mode: the i-th output of stream (seed, stream_id)
/// is a fixed bijective mix of key + i * gamma. Any position of any stream can
/// be reached in O(1), so per-worker or per-sample substreams are reproducible
/// regardless of scheduling.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0, std::uint64_t counter = 0)
      : key_(mix(seed ^ mix(stream_id + 0x632be59bd9b4e019ULL))), counter_(counter) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (counter_++) * kGamma); }

  std::uint64_t counter() const { return counter_; }

  /// Uniform integer in [0, bound) without modulo bias (Lemire's method).
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Fisher-Yates shuffle driven by the unbiased bounded draw.
template <typename T>
void shuffle(std::span<T> values, CounterRng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

/// Uniform m-subset of {0, ..., universe-1}, returned sorted (Floyd's algorithm).
inline std::vector<std::uint64_t> sample_subset(std::uint64_t universe, std::uint64_t m,
                                                CounterRng& rng) {
  std::vector<std::uint64_t> chosen;
  if (m > universe) m = universe;
  chosen.reserve(m);
  for (std::uint64_t j = universe - m; j < universe; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    auto it = std::lower_bound(chosen.begin(), chosen.end(), t);
    if (it != chosen.end() && *it == t) {
      chosen.insert(std::lower_bound(chosen.begin(), chosen.end(), j), j);
    } else {
      chosen.insert(it, t);
    }
  }
  return chosen;
}

}  // namespace rainbowlab
