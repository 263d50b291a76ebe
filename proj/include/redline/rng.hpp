#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace redline {

// splitmix64 finalizer. Also the mixing step of the watermark hash, so the
// exact constants matter; do not swap in std::hash.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Counter-based generator: identical sequences on every platform, cheap to
// fork per example via derive().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix64(seed ^ 0x5851F42D4C957F2DULL)) {}

  std::uint64_t next_u64() {
    state_ = mix64(state_ + 0x9E3779B97F4A7C15ULL);
    return state_;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). n must be > 0.
  std::size_t next_index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // Fisher-Yates sample of k distinct elements from items, order randomized.
  template <typename T>
  std::vector<T> sample(std::vector<T> items, std::size_t k) {
    if (k > items.size()) k = items.size();
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + next_index(items.size() - i);
      std::swap(items[i], items[j]);
    }
    items.resize(k);
    return items;
  }

 private:
  std::uint64_t state_;
};

// Stable seed derivation for per-example / per-stage streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index = 0) {
  return mix64(base ^ mix64(fnv1a64(tag) ^ mix64(index)));
}

}  // namespace redline
