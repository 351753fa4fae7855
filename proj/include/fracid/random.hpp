#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fracid {

/// SplitMix64 finaliser (Steele, Lea & Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a hash of a purpose tag.
std::uint64_t fnv1a64(std::string_view text);

/// Child seed for (master, purpose, index):
///   h = splitmix64(master); h = splitmix64(h ^ fnv1a64(tag)); h = splitmix64(h ^ index)
/// Streams for different indices are independent of how many indices exist,
/// so adding runs never perturbs the earlier ones.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index);

/// Portable uniform generator: std::mt19937_64 (fully specified by the C++
/// standard) with doubles formed from the top 53 bits, (x >> 11) * 2^-53.
/// std::uniform_real_distribution is avoided because its output differs
/// between standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace fracid
