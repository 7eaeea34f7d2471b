#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

namespace cntq {

/// SplitMix64 finalizer (Steele/Lea/Flood constants). Also used standalone
/// to derive child-stream seeds.
constexpr std::uint64_t mix_bits(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed of the idx-th child stream of `seed`. Every piece of randomness in
/// the pipeline comes from a stream derived this way, so items can be
/// generated in any order (or in parallel) with identical results.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t idx) {
  return mix_bits(seed ^ (0x9E3779B97F4A7C15ull * (idx + 1)));
}

/// FNV-1a hash of a stage name, for stage-tagged stream derivation:
/// derive_seed(derive_seed(master_seed, tag64("gen")), item_index).
constexpr std::uint64_t tag64(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Fixed-increment SplitMix64 generator. One 64-bit word of state; passes
/// BigCrush; trivially reproducible across languages, which is the point.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    return mix_bits(z);
  }

  /// Uniform in [0, 1), 53 random bits.
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be >= 1. Fixed-point multiply keeps
  /// the draw a pure function of one next_u64() call.
  std::uint64_t next_below(std::uint64_t n) {
    using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller; always consumes exactly two draws.
  double next_normal() {
    double u1 = next_u01();
    const double u2 = next_u01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard, same draw count
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double next_normal(double mean, double stddev) {
    return mean + stddev * next_normal();
  }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates shuffle driven by a SplitMix64 stream.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.next_below(i)]);
  }
}

}  // namespace cntq
